//! Event-driven hard-sphere molecular dynamics used to measure how an angular
//! perturbation grows per collision.

mod events;
pub mod geometry;
mod run;
mod system;

pub use events::{Event, EventKind, EventQueue};
pub use geometry::{
    deflection_sensitivity, deflection_sensitivity_numeric, predict_pair_collision,
    resolve_elastic_collision, Body, Boundary, Vec3,
};
pub use run::{
    fit_log_growth, run, run_ensemble, DivergenceSample, FitWindow, SimConfig, SimMode, SimResult,
    MAX_PACKING, PRNG_ID,
};
pub use system::{HardSphereSystem, Kick, StepOutcome, ENERGY_DRIFT_LIMIT};
