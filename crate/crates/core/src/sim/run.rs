use std::f64::consts::{E, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::geometry::{
    angle_between, dot, norm, perpendicular_unit, rotate_perpendicular, Body, Boundary, Vec3,
};
use super::system::{HardSphereSystem, StepOutcome};
use crate::error::{Error, Result};
use crate::gas::{builtin_species, derive_state, STP_PRESSURE, STP_TEMPERATURE};
use crate::randomization::collisions_to_randomize;

/// Recorded in every serialized result so a run can be reproduced exactly.
pub const PRNG_ID: &str =
    "rand_chacha-0.9 ChaCha8Rng seed_from_u64 (stream 0: initial state, stream 1: kicks)";

/// Largest accepted packing fraction.
pub const MAX_PACKING: f64 = 0.3;

/// Upper edge of the exponential-growth window, rad.
const FIT_UPPER: f64 = 0.1;
/// Lower edge of the growth window as a multiple of the initial separation.
const FIT_LOWER_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    /// Two replicas differing by one rotated velocity.
    Twin,
    /// One replica whose colliders receive random angular kicks, compared to an unkicked reference.
    Kick,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_particles: usize,
    /// Edge of the periodic cube, m.
    pub box_length: f64,
    /// m
    pub radius: f64,
    /// kg
    pub mass: f64,
    /// RMS speed of the initial Maxwell–Boltzmann velocities, m/s.
    pub speed_scale: f64,
    pub seed: u64,
    pub mode: SimMode,
    /// Twin mode: initial rotation of particle 0, rad. Kick mode: standard
    /// deviation of the per-collision rotation, rad.
    pub perturbation: f64,
    pub max_collisions_per_particle: u32,
}

impl SimConfig {
    /// N₂-like spheres at STP speeds, with the box sized for `packing`.
    pub fn with_packing(n_particles: usize, packing: f64) -> Result<Self> {
        let species = builtin_species("N2")?;
        let state = derive_state(species.clone(), STP_TEMPERATURE, STP_PRESSURE)?;
        if !(packing.is_finite() && packing > 0.0) {
            return Err(Error::Config(format!(
                "packing fraction must be positive, got {packing}"
            )));
        }
        let volume = n_particles as f64 * sphere_volume(species.radius) / packing;
        Ok(Self {
            n_particles,
            box_length: volume.cbrt(),
            radius: species.radius,
            mass: species.mass,
            speed_scale: state.v_rms,
            seed: 0,
            mode: SimMode::Twin,
            perturbation: 1e-9,
            max_collisions_per_particle: 20,
        })
    }

    pub fn packing_fraction(&self) -> f64 {
        self.n_particles as f64 * sphere_volume(self.radius) / self.box_length.powi(3)
    }

    pub fn number_density(&self) -> f64 {
        self.n_particles as f64 / self.box_length.powi(3)
    }

    /// 1/(√2 π d² n) with d = 2r.
    pub fn kinetic_mean_free_path(&self) -> f64 {
        let d = 2.0 * self.radius;
        1.0 / (2f64.sqrt() * PI * d * d * self.number_density())
    }

    /// Total collisions allowed: max_collisions_per_particle × N / 2.
    pub fn collision_budget(&self) -> u64 {
        (u64::from(self.max_collisions_per_particle) * self.n_particles as u64).div_ceil(2)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n_particles < 2 {
            return bad(format!(
                "need at least 2 particles, got {}",
                self.n_particles
            ));
        }
        for (name, v) in [
            ("box_length", self.box_length),
            ("radius", self.radius),
            ("mass", self.mass),
            ("speed_scale", self.speed_scale),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        let packing = self.packing_fraction();
        if !(packing < MAX_PACKING) {
            return bad(format!(
                "packing fraction {packing} must be below {MAX_PACKING}"
            ));
        }
        if !(self.box_length > 8.0 * self.radius) {
            return bad("box length must exceed 8 radii".into());
        }
        let p = self.perturbation;
        match self.mode {
            SimMode::Twin if !(p.is_finite() && (0.0..PI / 2.0).contains(&p)) => {
                return bad(format!("twin perturbation must lie in [0, π/2), got {p}"));
            }
            SimMode::Kick if !(p.is_finite() && p > 0.0 && p < PI / 2.0) => {
                return bad(format!("kick perturbation must lie in (0, π/2), got {p}"));
            }
            _ => {}
        }
        if self.max_collisions_per_particle == 0 {
            return bad("max_collisions_per_particle must be at least 1".into());
        }
        Ok(())
    }
}

fn sphere_volume(r: f64) -> f64 {
    4.0 / 3.0 * PI * r * r * r
}

/// (collision index, RMS angular separation in rad, velocity correlation)
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceSample(pub u64, pub f64, pub f64);

impl DivergenceSample {
    pub fn collision(&self) -> u64 {
        self.0
    }

    pub fn separation(&self) -> f64 {
        self.1
    }

    /// Σ v·v_ref / Σ |v_ref|².
    pub fn correlation(&self) -> f64 {
        self.2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitWindow {
    pub first_collision: u64,
    pub last_collision: u64,
    pub points: usize,
    pub lower_separation: f64,
    pub upper_separation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub config: SimConfig,
    pub prng: String,
    pub collisions_elapsed: u64,
    pub events_processed: u64,
    /// s
    pub simulated_time: f64,
    pub divergence_series: Vec<DivergenceSample>,
    pub fit_window: Option<FitWindow>,
    /// Slope of ln(separation) against mean collisions per particle.
    pub fitted_log_growth_per_collision: Option<f64>,
    /// Total path / (2 × collisions) of the unperturbed replica, m.
    pub measured_mean_free_path: f64,
    pub kinetic_mean_free_path: f64,
    /// 2λ_measured / r
    pub measured_gain: f64,
    /// Kick mode: mean collisions per particle until the velocity correlation falls below 1/e.
    pub decorrelation_collisions_per_particle: Option<f64>,
    /// Kick mode: collisions_to_randomize(perturbation, measured_gain).
    pub predicted_decorrelation_collisions: Option<u64>,
    /// Relative kinetic-energy drift of the unperturbed replica.
    pub energy_drift: f64,
    /// Total-momentum change of the unperturbed replica, kg·m/s.
    pub momentum_drift: Vec3,
    pub initial_momentum_magnitude: f64,
}

impl SimResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("SimResult serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let result: SimResult = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            reason: e.to_string(),
        })?;
        result.config.validate()?;
        Ok(result)
    }

    pub fn collisions_per_particle(&self, collision: u64) -> f64 {
        2.0 * collision as f64 / self.config.n_particles as f64
    }
}

pub fn run(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let bodies = initial_bodies(config, &mut rng)?;
    match config.mode {
        SimMode::Twin => run_twin(config, bodies, &mut rng),
        SimMode::Kick => run_kick(config, bodies),
    }
}

/// Runs one simulation per seed in parallel; results are returned in seed order.
pub fn run_ensemble(config: &SimConfig, seeds: &[u64]) -> Result<Vec<(u64, SimResult)>> {
    seeds
        .par_iter()
        .map(|&seed| {
            let cfg = SimConfig {
                seed,
                ..config.clone()
            };
            run(&cfg).map(|r| (seed, r))
        })
        .collect()
}

fn initial_bodies(config: &SimConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Body>> {
    let l = config.box_length;
    let boundary = Boundary::Periodic { length: l };
    let min_sq = (2.0 * config.radius * (1.0 + 1e-9)).powi(2);
    let component = Normal::new(0.0, config.speed_scale / 3f64.sqrt())
        .map_err(|e| Error::Config(e.to_string()))?;

    let mut positions: Vec<Vec3> = Vec::with_capacity(config.n_particles);
    const MAX_ATTEMPTS: usize = 10_000;
    for i in 0..config.n_particles {
        let mut placed = false;
        for _ in 0..MAX_ATTEMPTS {
            let p = [
                rng.random::<f64>() * l,
                rng.random::<f64>() * l,
                rng.random::<f64>() * l,
            ];
            if positions.iter().all(|q| {
                let d = boundary.separation(*q, p);
                dot(d, d) >= min_sq
            }) {
                positions.push(p);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::Config(format!(
                "could not place particle {i} without overlap"
            )));
        }
    }
    Ok(positions
        .into_iter()
        .map(|position| Body {
            position,
            velocity: [
                component.sample(rng),
                component.sample(rng),
                component.sample(rng),
            ],
        })
        .collect())
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v: Vec3 = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let n = norm(v);
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Uniformly random unit axis perpendicular to `v`.
fn random_transverse_axis(v: Vec3, rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        if let Some(axis) = perpendicular_unit(v, random_unit(rng)) {
            return axis;
        }
    }
}

fn compare(reference: &[Vec3], other: &[Vec3]) -> (f64, f64) {
    let mut sum_sq = 0.0;
    let mut cross = 0.0;
    let mut norm_sq = 0.0;
    for (a, b) in reference.iter().zip(other) {
        let theta = angle_between(*a, *b);
        sum_sq += theta * theta;
        cross += dot(*a, *b);
        norm_sq += dot(*a, *a);
    }
    ((sum_sq / reference.len() as f64).sqrt(), cross / norm_sq)
}

/// Brings `follower` level with `leader`, which has just processed a collision
/// at `time`, and compares velocities.
///
/// The comparison is taken midway to the leader's next event: the follower's
/// counterpart of the collision may lie a hair after `time`, and comparing at
/// `time` itself would catch it half-done.
fn sample(
    leader: &mut HardSphereSystem,
    follower: &mut HardSphereSystem,
    time: f64,
) -> Result<DivergenceSample> {
    let at = match leader.next_event_time() {
        Some(next) => 0.5 * (time + next),
        None => time,
    };
    follower.advance_to(at)?;
    let (sep, corr) = compare(leader.velocities(), follower.velocities());
    Ok(DivergenceSample(leader.collisions(), sep, corr))
}

fn initial_sample(a: &HardSphereSystem, b: &HardSphereSystem) -> DivergenceSample {
    let (sep, corr) = compare(a.velocities(), b.velocities());
    DivergenceSample(0, sep, corr)
}

fn run_twin(config: &SimConfig, bodies: Vec<Body>, rng: &mut ChaCha8Rng) -> Result<SimResult> {
    let mut perturbed = bodies.clone();
    let v0 = perturbed[0].velocity;
    let axis = random_transverse_axis(v0, rng);
    perturbed[0].velocity = rotate_perpendicular(v0, axis, config.perturbation);

    let mut reference =
        HardSphereSystem::new(&bodies, config.radius, config.mass, config.box_length)?;
    let mut twin =
        HardSphereSystem::new(&perturbed, config.radius, config.mass, config.box_length)?;

    let mut series = vec![initial_sample(&reference, &twin)];
    let budget = config.collision_budget();
    while reference.collisions() < budget {
        match reference.next_collision(None)? {
            StepOutcome::Collision { time, .. } => {
                series.push(sample(&mut reference, &mut twin, time)?);
            }
            _ => break,
        }
    }

    let initial = series[0].separation();
    let fit = if initial > 0.0 {
        fit_log_growth(
            &series,
            config.n_particles,
            FIT_LOWER_FACTOR * initial,
            FIT_UPPER,
        )
    } else {
        None
    };
    let (fitted, window) = match fit {
        Some((slope, w)) => (Some(slope), Some(w)),
        None => (None, None),
    };
    Ok(finish(
        config, &reference, series, fitted, window, None, None,
    ))
}

fn run_kick(config: &SimConfig, bodies: Vec<Body>) -> Result<SimResult> {
    let mut reference =
        HardSphereSystem::new(&bodies, config.radius, config.mass, config.box_length)?;
    let mut kicked = HardSphereSystem::new(&bodies, config.radius, config.mass, config.box_length)?;
    kicked.set_conserves_momentum(false);

    let mut kick_rng = ChaCha8Rng::seed_from_u64(config.seed);
    kick_rng.set_stream(1);
    let angle = Normal::new(0.0, config.perturbation).map_err(|e| Error::Config(e.to_string()))?;
    let mut kick = |_: usize, v: &mut Vec3| {
        let axis = random_transverse_axis(*v, &mut kick_rng);
        *v = rotate_perpendicular(*v, axis, angle.sample(&mut kick_rng));
    };

    let mut series = vec![initial_sample(&kicked, &reference)];
    let mut decorrelated = None;
    let budget = config.collision_budget();
    while kicked.collisions() < budget {
        match kicked.next_collision(Some(&mut kick))? {
            StepOutcome::Collision { time, .. } => {
                let s = sample(&mut kicked, &mut reference, time)?;
                series.push(s);
                if s.correlation() < 1.0 / E {
                    decorrelated = Some(2.0 * s.collision() as f64 / config.n_particles as f64);
                    break;
                }
            }
            _ => break,
        }
    }

    let mut result = finish(config, &reference, series, None, None, decorrelated, None);
    result.predicted_decorrelation_collisions =
        collisions_to_randomize(config.perturbation, result.measured_gain).ok();
    Ok(result)
}

fn finish(
    config: &SimConfig,
    reference: &HardSphereSystem,
    divergence_series: Vec<DivergenceSample>,
    fitted_log_growth_per_collision: Option<f64>,
    fit_window: Option<FitWindow>,
    decorrelation_collisions_per_particle: Option<f64>,
    predicted_decorrelation_collisions: Option<u64>,
) -> SimResult {
    let collisions = reference.collisions();
    let measured_mean_free_path = if collisions > 0 {
        reference.total_path() / (2.0 * collisions as f64)
    } else {
        f64::INFINITY
    };
    SimResult {
        config: config.clone(),
        prng: PRNG_ID.to_string(),
        collisions_elapsed: divergence_series.last().map_or(0, |s| s.collision()),
        events_processed: reference.events(),
        simulated_time: reference.now(),
        divergence_series,
        fit_window,
        fitted_log_growth_per_collision,
        measured_mean_free_path,
        kinetic_mean_free_path: config.kinetic_mean_free_path(),
        measured_gain: 2.0 * measured_mean_free_path / config.radius,
        decorrelation_collisions_per_particle,
        predicted_decorrelation_collisions,
        energy_drift: reference.energy_drift(),
        momentum_drift: reference.momentum_drift(),
        initial_momentum_magnitude: norm(reference.initial_momentum()),
    }
}

/// Least-squares slope of ln(separation) against mean collisions per particle,
/// over the first contiguous stretch of samples with separation in
/// [`lower`, `upper`]. Needs at least three points.
pub fn fit_log_growth(
    series: &[DivergenceSample],
    n_particles: usize,
    lower: f64,
    upper: f64,
) -> Option<(f64, FitWindow)> {
    let start = series.iter().position(|s| s.separation() >= lower)?;
    let len = series[start..]
        .iter()
        .take_while(|s| s.separation() <= upper)
        .count();
    let window = &series[start..start + len];
    if window.len() < 3 {
        return None;
    }
    let scale = 2.0 / n_particles as f64;
    let xs: Vec<f64> = window
        .iter()
        .map(|s| s.collision() as f64 * scale)
        .collect();
    let ys: Vec<f64> = window.iter().map(|s| s.separation().ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some((
        sxy / sxx,
        FitWindow {
            first_collision: window[0].collision(),
            last_collision: window[window.len() - 1].collision(),
            points: window.len(),
            lower_separation: lower,
            upper_separation: upper,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(mode: SimMode) -> SimConfig {
        let mut c = SimConfig::with_packing(64, 0.02).unwrap();
        c.mode = mode;
        c.seed = 7;
        c.max_collisions_per_particle = 10;
        c
    }

    #[test]
    fn zero_perturbation_never_diverges() {
        let mut c = small(SimMode::Twin);
        c.perturbation = 0.0;
        let r = run(&c).unwrap();
        assert!(r.divergence_series.len() > 100);
        assert!(r
            .divergence_series
            .iter()
            .all(|s| s.separation() == 0.0 && s.correlation() == 1.0));
        assert_eq!(r.fitted_log_growth_per_collision, None);
    }

    #[test]
    fn same_seed_same_bytes() {
        let c = small(SimMode::Twin);
        assert_eq!(run(&c).unwrap().to_json(), run(&c).unwrap().to_json());
        let k = small(SimMode::Kick);
        assert_eq!(run(&k).unwrap().to_json(), run(&k).unwrap().to_json());
        let mut other = c.clone();
        other.seed = 8;
        assert_ne!(run(&c).unwrap().to_json(), run(&other).unwrap().to_json());
    }

    #[test]
    fn json_round_trip() {
        let r = run(&small(SimMode::Twin)).unwrap();
        let back = SimResult::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(matches!(
            SimResult::from_json("{"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn config_guards() {
        let mut c = SimConfig::with_packing(100, 0.01).unwrap();
        assert!(c.validate().is_ok());
        assert!((c.packing_fraction() - 0.01).abs() < 1e-12);
        c.box_length = SimConfig::with_packing(100, 0.5).unwrap().box_length;
        assert!(matches!(run(&c), Err(Error::Config(_))));
        let mut k = small(SimMode::Kick);
        k.perturbation = 0.0;
        assert!(k.validate().is_err());
        let mut t = small(SimMode::Twin);
        t.perturbation = -1e-3;
        assert!(t.validate().is_err());
        t.perturbation = 1e-3;
        t.n_particles = 1;
        assert!(t.validate().is_err());
    }

    #[test]
    fn fit_recovers_exact_exponential() {
        let n = 10;
        let series: Vec<_> = (0..40u64)
            .map(|c| DivergenceSample(c, 1e-8 * (1.5 * c as f64 * 2.0 / n as f64).exp(), 1.0))
            .collect();
        let (slope, w) = fit_log_growth(&series, n, 1e-7, 0.1).unwrap();
        assert!((slope - 1.5).abs() < 1e-9);
        assert!(w.points >= 3);
        assert!(series[w.last_collision as usize].separation() <= 0.1);
    }

    #[test]
    fn twin_spheres_stay_apart() {
        let c = small(SimMode::Twin);
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        let bodies = initial_bodies(&c, &mut rng).unwrap();
        let mut sys = HardSphereSystem::new(&bodies, c.radius, c.mass, c.box_length).unwrap();
        let boundary = Boundary::Periodic {
            length: c.box_length,
        };
        let mut last = 0.0;
        for _ in 0..2000 {
            sys.step().unwrap();
            assert!(sys.now() >= last);
            last = sys.now();
        }
        let pos = sys.positions();
        for i in 0..pos.len() {
            for j in i + 1..pos.len() {
                let d = norm(boundary.separation(pos[i], pos[j]));
                assert!(d >= 2.0 * c.radius * (1.0 - 1e-9), "{i},{j}: {d:e}");
            }
        }
    }
}
