use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use unruh_gas::constants::HBAR;
use unruh_gas::quadrature::IntegralMethod;
use unruh_gas::randomization::{build_report, build_report_with_gain, Channel};
use unruh_gas::sim::{run, SimConfig, SimMode};
use unruh_gas::species_file::parse_species_file;
use unruh_gas::sweep::Grid;
use unruh_gas::{
    bose_power_integral, derive_state, estimate_mdw, estimate_unruh, estimate_unruh_calibrated,
    Catalogue, Error, GasSpecies, GasState, Result,
};

use crate::output::{self, object, to_value, Format};
use crate::{EstimateArgs, GasArgs, IntegrateArgs, SimulateArgs, SweepArgs};

const TWIN_PERTURBATION: f64 = 1e-9;
const KICK_PERTURBATION: f64 = 1e-12;

fn resolve_species(gas: &GasArgs) -> Result<GasSpecies> {
    let mut catalogue = Catalogue::builtin();
    if let Some(path) = &gas.species_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        catalogue.extend(parse_species_file(&text)?);
    }
    catalogue.get(&gas.species)
}

pub fn estimate(args: &EstimateArgs) -> Result<String> {
    let mut species = resolve_species(&args.gas)?;
    if let Some(r) = args.radius_m {
        species = species.with_radius(r)?;
    }
    let state = derive_state(species, args.temperature_k, args.pressure_pa)?;
    let method = args.gas.integral_method;

    let thermal = estimate_unruh(&state, method)?;
    let calibrated = args.calibrate_rmv_hbar.is_some() || args.calibrate_alpha.is_some();
    let (unruh, calibration) = if calibrated {
        let rmv = args
            .calibrate_rmv_hbar
            .unwrap_or(state.radius() * state.mass() * state.v_rms / HBAR);
        let alpha = args.calibrate_alpha.unwrap_or(thermal.alpha);
        let est = estimate_unruh_calibrated(rmv, alpha, state.temperature, state.v_rms, method)?;
        (
            est,
            object(vec![("rmv_over_hbar", rmv.into()), ("alpha", alpha.into())]),
        )
    } else {
        (thermal, Value::Null)
    };
    let mdw = estimate_mdw(&state)?;

    let channel = |est: Value, channel: Channel, kick: f64| -> Result<Value> {
        let mut v = est;
        let map = v.as_object_mut().expect("estimates serialize as objects");
        map.insert(
            "randomization_kinetic".into(),
            to_value(&build_report(&state, channel, kick)?),
        );
        let with_gain = match args.gain {
            Some(g) => to_value(&build_report_with_gain(&state, channel, kick, g)?),
            None => Value::Null,
        };
        map.insert("randomization_calibrated".into(), with_gain);
        Ok(v)
    };

    let mut gas = to_value(&state);
    gas.as_object_mut()
        .expect("gas state serializes as an object")
        .insert(
            "amplification_gain".into(),
            state.amplification_gain().into(),
        );
    let report = object(vec![
        ("gas", gas),
        (
            "unruh",
            channel(to_value(&unruh), Channel::Unruh, unruh.delta_theta0)?,
        ),
        (
            "mdw",
            channel(to_value(&mdw), Channel::Mdw, mdw.delta_theta0)?,
        ),
        ("calibration", calibration),
    ]);
    Ok(output::render(&report, args.format))
}

pub fn integrate(args: &IntegrateArgs) -> Result<String> {
    let adaptive = bose_power_integral(args.alpha, args.p, IntegralMethod::Adaptive)?;
    let zeta = bose_power_integral(args.alpha, args.p, IntegralMethod::ClosedFormZeta)?;
    let factorial = bose_power_integral(args.alpha, args.p, IntegralMethod::ClosedFormFactorial)?;
    let diff = |a: f64, b: f64| (a - b) / b;
    let report = object(vec![
        ("alpha", args.alpha.into()),
        ("p", args.p.into()),
        ("adaptive", to_value(&adaptive)),
        ("closed_form_zeta", to_value(&zeta)),
        ("closed_form_factorial", to_value(&factorial)),
        (
            "relative_difference",
            object(vec![
                ("adaptive_vs_zeta", diff(adaptive.value, zeta.value).into()),
                (
                    "adaptive_vs_factorial",
                    diff(adaptive.value, factorial.value).into(),
                ),
                (
                    "zeta_vs_factorial",
                    diff(zeta.value, factorial.value).into(),
                ),
            ]),
        ),
    ]);
    Ok(output::render(&report, args.format))
}

pub fn simulate(args: &SimulateArgs) -> Result<String> {
    let mode = SimMode::from(args.mode);
    let default_perturbation = match mode {
        SimMode::Twin => TWIN_PERTURBATION,
        SimMode::Kick => KICK_PERTURBATION,
    };
    let config = SimConfig {
        seed: args.seed,
        mode,
        perturbation: args.perturbation.unwrap_or(default_perturbation),
        max_collisions_per_particle: args.max_collisions,
        ..SimConfig::with_packing(args.particles, args.packing)?
    };
    let result = run(&config)?;
    Ok(match args.format {
        Format::Json => {
            let mut s = result.to_json();
            s.push('\n');
            s
        }
        Format::HumanTable => output::table(&to_value(&result)),
        Format::Csv => {
            let rows: Vec<Value> = result
                .divergence_series
                .iter()
                .map(|s| {
                    object(vec![
                        ("collision", s.collision().into()),
                        (
                            "collisions_per_particle",
                            result.collisions_per_particle(s.collision()).into(),
                        ),
                        ("separation", s.separation().into()),
                        ("correlation", s.correlation().into()),
                    ])
                })
                .collect();
            output::csv(&rows)
        }
    })
}

#[derive(Serialize)]
struct SweepRow {
    temperature_k: f64,
    pressure_pa: f64,
    radius_m: f64,
    number_density: f64,
    mean_free_path: f64,
    v_rms: f64,
    collision_rate: f64,
    gain: f64,
    acceleration: f64,
    unruh_temperature: f64,
    alpha: f64,
    peak_wavelength: f64,
    unruh_delta_theta0: f64,
    unruh_n: u64,
    unruh_time: f64,
    omega0: f64,
    coupling_omega: f64,
    ln_u_ratio: f64,
    mdw_delta_theta0: f64,
    mdw_n: u64,
    mdw_time: f64,
}

fn sweep_row(state: &GasState, method: IntegralMethod) -> Result<SweepRow> {
    let unruh = estimate_unruh(state, method)?;
    let mdw = estimate_mdw(state)?;
    let slow = build_report(state, Channel::Unruh, unruh.delta_theta0)?;
    let fast = build_report(state, Channel::Mdw, mdw.delta_theta0)?;
    Ok(SweepRow {
        temperature_k: state.temperature,
        pressure_pa: state.pressure,
        radius_m: state.radius(),
        number_density: state.number_density,
        mean_free_path: state.mean_free_path,
        v_rms: state.v_rms,
        collision_rate: state.collision_rate,
        gain: state.amplification_gain(),
        acceleration: unruh.acceleration,
        unruh_temperature: unruh.unruh_temperature,
        alpha: unruh.alpha,
        peak_wavelength: unruh.peak_wavelength,
        unruh_delta_theta0: unruh.delta_theta0,
        unruh_n: slow.n_collisions,
        unruh_time: slow.randomization_time,
        omega0: mdw.omega0,
        coupling_omega: mdw.coupling_omega,
        ln_u_ratio: mdw.ln_u_ratio,
        mdw_delta_theta0: mdw.delta_theta0,
        mdw_n: fast.n_collisions,
        mdw_time: fast.randomization_time,
    })
}

fn grid(flag: &str, text: &str) -> Result<Vec<f64>> {
    match Grid::parse(text) {
        Ok(g) => Ok(g.points()),
        Err(Error::Parse { line, reason }) => Err(Error::Parse {
            line,
            reason: format!("--{flag}: {reason}"),
        }),
        Err(e) => Err(e),
    }
}

pub fn sweep(args: &SweepArgs) -> Result<String> {
    let species = resolve_species(&args.gas)?;
    let temperatures = grid("temperature-k", &args.temperature_k)?;
    let pressures = grid("pressure-pa", &args.pressure_pa)?;
    let radii = match &args.radius_m {
        Some(text) => grid("radius-m", text)?,
        None => vec![species.radius],
    };
    let ranged: Vec<&str> = [
        ("temperature_k", temperatures.len()),
        ("pressure_pa", pressures.len()),
        ("radius_m", radii.len()),
    ]
    .into_iter()
    .filter(|&(_, n)| n > 1)
    .map(|(name, _)| name)
    .collect();
    if ranged.len() > 1 {
        return Err(Error::Config(format!(
            "only one quantity may be swept, got {}",
            ranged.join(" and ")
        )));
    }

    let mut points = Vec::with_capacity(temperatures.len() * pressures.len() * radii.len());
    for &t in &temperatures {
        for &p in &pressures {
            points.extend(radii.iter().map(|&r| (t, p, r)));
        }
    }
    let method = args.gas.integral_method;
    let rows = points
        .par_iter()
        .map(|&(t, p, r)| {
            let state = derive_state(species.with_radius(r)?, t, p)?;
            sweep_row(&state, method).map(|row| to_value(&row))
        })
        .collect::<Result<Vec<Value>>>()?;

    Ok(match args.format {
        Format::Csv => output::csv(&rows),
        Format::Json => output::json(&object(vec![
            ("species", species.name.clone().into()),
            ("swept", ranged.first().map_or(Value::Null, |&s| s.into())),
            ("rows", Value::Array(rows)),
        ])),
        Format::HumanTable => rows
            .iter()
            .map(output::table)
            .collect::<Vec<_>>()
            .join("\n"),
    })
}
