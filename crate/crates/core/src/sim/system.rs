//! Event-driven dynamics of equal hard spheres in a periodic cube.

use super::events::{EventKind, EventQueue};
use super::geometry::{
    add_scaled, dot, norm, predict_pair_collision, resolve_elastic_collision, Body, Boundary, Vec3,
};
use crate::error::{Error, Result};

/// Relative kinetic-energy drift that aborts a run.
pub const ENERGY_DRIFT_LIMIT: f64 = 1e-9;

/// Called with a particle index and its post-collision velocity.
pub type Kick<'a> = &'a mut dyn FnMut(usize, &mut Vec3);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    Collision {
        a: usize,
        b: usize,
        time: f64,
    },
    Renew {
        a: usize,
        time: f64,
    },
    /// No further events; every particle is at rest or isolated.
    Exhausted,
}

/// Positions are stored at each particle's last update time `t_ref` and
/// advanced lazily, so a collision touches only the two particles involved.
#[derive(Debug, Clone)]
pub struct HardSphereSystem {
    boundary: Boundary,
    radius: f64,
    mass: f64,
    /// Distance a particle may fly before its predictions must be renewed.
    renew_distance: f64,
    pos: Vec<Vec3>,
    vel: Vec<Vec3>,
    t_ref: Vec<f64>,
    path: Vec<f64>,
    counters: Vec<u64>,
    renew_at: Vec<f64>,
    queue: EventQueue,
    now: f64,
    collisions: u64,
    events: u64,
    conserves_momentum: bool,
    initial_energy: f64,
    initial_momentum: Vec3,
    momentum_scale: f64,
}

impl HardSphereSystem {
    pub fn new(bodies: &[Body], radius: f64, mass: f64, box_length: f64) -> Result<Self> {
        if bodies.len() < 2 {
            return Err(Error::Config("at least two particles are required".into()));
        }
        if !(box_length > 8.0 * radius) {
            return Err(Error::Config(format!(
                "box length {box_length:e} must exceed 8 radii ({:e})",
                8.0 * radius
            )));
        }
        let boundary = Boundary::Periodic { length: box_length };
        let n = bodies.len();
        let mut sys = Self {
            boundary,
            radius,
            mass,
            // Two particles each flying less than L/4 − r cannot change which
            // periodic image is nearest before they could touch.
            renew_distance: 0.25 * box_length - radius,
            pos: bodies.iter().map(|b| boundary.wrap(b.position)).collect(),
            vel: bodies.iter().map(|b| b.velocity).collect(),
            t_ref: vec![0.0; n],
            path: vec![0.0; n],
            counters: vec![0; n],
            renew_at: vec![f64::INFINITY; n],
            queue: EventQueue::new(),
            now: 0.0,
            collisions: 0,
            events: 0,
            conserves_momentum: true,
            initial_energy: 0.0,
            initial_momentum: [0.0; 3],
            momentum_scale: 0.0,
        };
        sys.initial_energy = sys.kinetic_energy();
        sys.initial_momentum = sys.total_momentum();
        sys.momentum_scale = sys.vel.iter().map(|v| mass * norm(*v)).sum();

        let contact_sq = 4.0 * radius * radius;
        for i in 0..n {
            for j in i + 1..n {
                let d = boundary.separation(sys.pos[i], sys.pos[j]);
                if dot(d, d) < contact_sq {
                    return Err(Error::Config(format!(
                        "initial overlap between particles {i} and {j}"
                    )));
                }
            }
        }
        for i in 0..n {
            sys.schedule_renew(i);
        }
        for i in 0..n {
            sys.predict_pairs(i, i + 1)?;
        }
        Ok(sys)
    }

    /// Stops momentum-conservation checks; used when external kicks are applied.
    pub fn set_conserves_momentum(&mut self, conserves: bool) {
        self.conserves_momentum = conserves;
    }

    pub fn len(&self) -> usize {
        self.vel.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vel.is_empty()
    }

    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn collisions(&self) -> u64 {
        self.collisions
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn velocities(&self) -> &[Vec3] {
        &self.vel
    }

    pub fn positions(&self) -> Vec<Vec3> {
        (0..self.len())
            .map(|i| self.boundary.wrap(self.position_at(i, self.now)))
            .collect()
    }

    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.mass * self.vel.iter().map(|v| dot(*v, *v)).sum::<f64>()
    }

    pub fn total_momentum(&self) -> Vec3 {
        let mut p = [0.0; 3];
        for v in &self.vel {
            for k in 0..3 {
                p[k] += self.mass * v[k];
            }
        }
        p
    }

    pub fn initial_energy(&self) -> f64 {
        self.initial_energy
    }

    pub fn initial_momentum(&self) -> Vec3 {
        self.initial_momentum
    }

    /// Distance flown by all particles up to the current time.
    pub fn total_path(&self) -> f64 {
        (0..self.len())
            .map(|i| self.path[i] + norm(self.vel[i]) * (self.now - self.t_ref[i]))
            .sum()
    }

    /// Time of the next live event, if any.
    pub fn next_event_time(&mut self) -> Option<f64> {
        self.queue.peek_valid(&self.counters).map(|e| e.time)
    }

    pub fn step(&mut self) -> Result<StepOutcome> {
        self.step_with(None)
    }

    /// Processes one event. `kick`, if given, may alter the outgoing velocity
    /// of each collider before its new events are predicted.
    pub fn step_with(&mut self, kick: Option<Kick<'_>>) -> Result<StepOutcome> {
        let Some(event) = self.queue.pop_valid(&self.counters) else {
            return Ok(StepOutcome::Exhausted);
        };
        if !(event.time >= self.now) {
            return Err(self.integrity(format!(
                "event at t = {:e} precedes current time {:e}",
                event.time, self.now
            )));
        }
        self.now = event.time;
        self.events += 1;

        let outcome = match event.kind {
            EventKind::Collision { a, b, .. } => {
                self.sync(a);
                self.sync(b);
                let mut body_a = Body {
                    position: self.pos[a],
                    velocity: self.vel[a],
                };
                let mut body_b = Body {
                    position: self.pos[b],
                    velocity: self.vel[b],
                };
                let pair_energy =
                    dot(body_a.velocity, body_a.velocity) + dot(body_b.velocity, body_b.velocity);
                resolve_elastic_collision(&mut body_a, &mut body_b, self.radius, self.boundary)
                    .map_err(|e| self.integrity(format!("pair ({a}, {b}): {e}")))?;
                let after =
                    dot(body_a.velocity, body_a.velocity) + dot(body_b.velocity, body_b.velocity);
                if (after - pair_energy).abs() > 1e-12 * pair_energy {
                    return Err(self.integrity(format!("pair ({a}, {b}) changed kinetic energy")));
                }
                self.vel[a] = body_a.velocity;
                self.vel[b] = body_b.velocity;
                if let Some(kick) = kick {
                    kick(a, &mut self.vel[a]);
                    kick(b, &mut self.vel[b]);
                }
                self.counters[a] += 1;
                self.counters[b] += 1;
                self.collisions += 1;
                self.schedule_renew(a);
                self.schedule_renew(b);
                self.predict_pairs(a, 0)?;
                self.predict_pairs(b, 0)?;
                StepOutcome::Collision {
                    a,
                    b,
                    time: self.now,
                }
            }
            EventKind::Renew { a, .. } => {
                self.sync(a);
                self.counters[a] += 1;
                self.schedule_renew(a);
                self.predict_pairs(a, 0)?;
                StepOutcome::Renew { a, time: self.now }
            }
        };

        if self.events.is_multiple_of(self.len() as u64) {
            self.check_conservation()?;
        }
        Ok(outcome)
    }

    /// Processes every event up to and including time `t`.
    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        while let Some(next) = self.next_event_time() {
            if next > t {
                break;
            }
            self.step()?;
        }
        Ok(())
    }

    /// Steps until the next collision (renewals are processed silently).
    pub fn next_collision(&mut self, mut kick: Option<Kick<'_>>) -> Result<StepOutcome> {
        loop {
            let outcome = match kick.as_deref_mut() {
                Some(k) => self.step_with(Some(k))?,
                None => self.step_with(None)?,
            };
            match outcome {
                StepOutcome::Renew { .. } => continue,
                other => return Ok(other),
            }
        }
    }

    pub fn energy_drift(&self) -> f64 {
        ((self.kinetic_energy() - self.initial_energy) / self.initial_energy).abs()
    }

    pub fn momentum_drift(&self) -> Vec3 {
        let p = self.total_momentum();
        [
            p[0] - self.initial_momentum[0],
            p[1] - self.initial_momentum[1],
            p[2] - self.initial_momentum[2],
        ]
    }

    fn check_conservation(&self) -> Result<()> {
        let drift = self.energy_drift();
        if !(drift <= ENERGY_DRIFT_LIMIT) {
            return Err(self.integrity(format!("relative energy drift {drift:e}")));
        }
        if self.conserves_momentum {
            let dp = self.momentum_drift();
            if dp.iter().any(|d| !(d.abs() <= 1e-10 * self.momentum_scale)) {
                return Err(self.integrity(format!("momentum drift {dp:?}")));
            }
        }
        Ok(())
    }

    fn integrity(&self, reason: String) -> Error {
        Error::Integrity(format!(
            "event {} at t = {:e}: {reason}",
            self.events, self.now
        ))
    }

    #[inline]
    fn position_at(&self, i: usize, t: f64) -> Vec3 {
        add_scaled(self.pos[i], self.vel[i], t - self.t_ref[i])
    }

    fn sync(&mut self, i: usize) {
        let dt = self.now - self.t_ref[i];
        self.path[i] += norm(self.vel[i]) * dt;
        self.pos[i] = self.boundary.wrap(add_scaled(self.pos[i], self.vel[i], dt));
        self.t_ref[i] = self.now;
    }

    fn schedule_renew(&mut self, i: usize) {
        let speed = norm(self.vel[i]);
        let at = if speed > 0.0 {
            self.now + self.renew_distance / speed
        } else {
            f64::INFINITY
        };
        self.renew_at[i] = at;
        if at.is_finite() {
            self.queue.push(
                at,
                EventKind::Renew {
                    a: i,
                    count_a: self.counters[i],
                },
            );
        }
    }

    /// Schedules collisions of `i` with every `j ≥ from`, `j ≠ i`, that fall
    /// inside both particles' renewal windows.
    fn predict_pairs(&mut self, i: usize, from: usize) -> Result<()> {
        let pi = self.position_at(i, self.now);
        let vi = self.vel[i];
        for j in from..self.len() {
            if j == i {
                continue;
            }
            let pj = self.position_at(j, self.now);
            let hit = predict_pair_collision(pi, vi, pj, self.vel[j], self.radius, self.boundary)
                .map_err(|e| self.integrity(format!("pair ({i}, {j}): {e}")))?;
            if let Some(dt) = hit {
                let t = self.now + dt;
                if t <= self.renew_at[i].min(self.renew_at[j]) {
                    self.queue.push(
                        t,
                        EventKind::Collision {
                            a: i,
                            b: j,
                            count_a: self.counters[i],
                            count_b: self.counters[j],
                        },
                    );
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body(p: Vec3, v: Vec3) -> Body {
        Body {
            position: p,
            velocity: v,
        }
    }

    #[test]
    fn two_body_head_on() {
        let bodies = [
            body([1.0, 5.0, 5.0], [1.0, 0.0, 0.0]),
            body([4.0, 5.0, 5.0], [-1.0, 0.0, 0.0]),
        ];
        let mut sys = HardSphereSystem::new(&bodies, 0.5, 1.0, 10.0).unwrap();
        let out = sys.next_collision(None).unwrap();
        assert!(matches!(
            out,
            StepOutcome::Collision { a: 0, b: 1, .. } | StepOutcome::Collision { a: 1, b: 0, .. }
        ));
        assert!((sys.now() - 1.0).abs() < 1e-12);
        assert_eq!(sys.velocities()[0], [-1.0, 0.0, 0.0]);
        // They meet again through the periodic boundary after travelling L − 2·2r = 8 in relative motion.
        sys.next_collision(None).unwrap();
        assert!((sys.now() - 5.0).abs() < 1e-9, "{}", sys.now());
    }

    #[test]
    fn rejects_overlap_and_tiny_box() {
        let overlapping = [
            body([1.0, 1.0, 1.0], [0.0; 3]),
            body([1.5, 1.0, 1.0], [0.0; 3]),
        ];
        assert!(matches!(
            HardSphereSystem::new(&overlapping, 0.5, 1.0, 10.0),
            Err(Error::Config(_))
        ));
        let ok = [
            body([1.0, 1.0, 1.0], [0.0; 3]),
            body([3.0, 1.0, 1.0], [0.0; 3]),
        ];
        assert!(HardSphereSystem::new(&ok, 0.5, 1.0, 3.0).is_err());
    }

    #[test]
    fn resting_particles_exhaust() {
        let bodies = [
            body([1.0, 1.0, 1.0], [0.0; 3]),
            body([5.0, 5.0, 5.0], [0.0; 3]),
        ];
        let mut sys = HardSphereSystem::new(&bodies, 0.5, 1.0, 10.0).unwrap();
        assert_eq!(sys.step().unwrap(), StepOutcome::Exhausted);
    }

    #[test]
    fn renewal_keeps_periodic_flight_correct() {
        // A slow particle and a fast one crossing the box several times before meeting.
        let bodies = [
            body([5.0, 5.0, 5.0], [0.0, 0.0, 0.0]),
            body([1.0, 5.3, 5.0], [-3.0, 0.0, 0.0]),
        ];
        let mut sys = HardSphereSystem::new(&bodies, 0.5, 1.0, 10.0).unwrap();
        let out = sys.next_collision(None).unwrap();
        // B travels left from x=1 through the boundary to contact at x ≈ 5 + √(1 − 0.09)
        let contact_x = 5.0 + (1.0f64 - 0.09).sqrt();
        let expected = (1.0 + 10.0 - contact_x) / 3.0;
        assert!(matches!(out, StepOutcome::Collision { .. }));
        assert!(
            (sys.now() - expected).abs() < 1e-12,
            "{} vs {expected}",
            sys.now()
        );
    }
}
