mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use unruh_gas::quadrature::IntegralMethod;
use unruh_gas::sim::SimMode;

use crate::output::Format;

#[derive(Parser)]
#[command(
    name = "unruh-gas",
    version,
    about = "Vacuum-radiation kicks and collision chaos in dilute gases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gas state, Unruh and Moore–DeWitt kicks, and collisions to randomize.
    Estimate(EstimateArgs),
    /// Compare the three evaluations of ∫ x^p/(e^{αx} − 1) dx.
    Integrate(IntegrateArgs),
    /// Run the hard-sphere simulator and print the serialized result.
    Simulate(SimulateArgs),
    /// Tabulate estimates over a range of temperature, pressure or radius.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GasArgs {
    #[arg(long, default_value = "N2")]
    species: String,
    /// Extra or overriding species records (`name= mass_kg= radius_m=` per line).
    #[arg(long)]
    species_file: Option<PathBuf>,
    #[arg(long, value_parser = parse_method, default_value = "adaptive")]
    integral_method: IntegralMethod,
}

#[derive(Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    gas: GasArgs,
    #[arg(long, default_value_t = 273.15)]
    temperature_k: f64,
    #[arg(long, default_value_t = 101_325.0)]
    pressure_pa: f64,
    /// Override the species radius.
    #[arg(long)]
    radius_m: Option<f64>,
    /// Per-collision amplification used in addition to the kinetic-theory 2λ/r.
    #[arg(long)]
    gain: Option<f64>,
    /// Fix r·m·v in units of ℏ for the Unruh channel.
    #[arg(long)]
    calibrate_rmv_hbar: Option<f64>,
    /// Fix α for the Unruh channel.
    #[arg(long)]
    calibrate_alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::HumanTable)]
    format: Format,
}

#[derive(Args)]
pub struct IntegrateArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 8)]
    p: u32,
    #[arg(long, value_enum, default_value_t = Format::HumanTable)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Twin,
    Kick,
}

impl From<ModeArg> for SimMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Twin => SimMode::Twin,
            ModeArg::Kick => SimMode::Kick,
        }
    }
}

#[derive(Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 500)]
    particles: usize,
    #[arg(long, default_value_t = 0.01)]
    packing: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Twin)]
    mode: ModeArg,
    /// Twin: initial rotation of particle 0. Kick: per-collision kick width. Radians.
    #[arg(long, allow_hyphen_values = true)]
    perturbation: Option<f64>,
    /// Stop after this many collisions per particle on average.
    #[arg(long, default_value_t = 20)]
    max_collisions: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    gas: GasArgs,
    /// Value or range `start:stop:count[(log)]`.
    #[arg(long, default_value = "273.15", allow_hyphen_values = true)]
    temperature_k: String,
    #[arg(long, default_value = "101325", allow_hyphen_values = true)]
    pressure_pa: String,
    /// Defaults to the species radius.
    #[arg(long, allow_hyphen_values = true)]
    radius_m: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn parse_method(s: &str) -> Result<IntegralMethod, String> {
    s.parse().map_err(|e: unruh_gas::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Estimate(a) => commands::estimate(&a),
        Command::Integrate(a) => commands::integrate(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Sweep(a) => commands::sweep(&a),
    };
    match outcome {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", output::error_line(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for bad input, 3 when the simulator detects an internal inconsistency.
fn exit_code(e: &unruh_gas::Error) -> u8 {
    if e.is_runtime() {
        3
    } else {
        2
    }
}
