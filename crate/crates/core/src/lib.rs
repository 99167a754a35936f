//! Estimates of how strongly vacuum radiation emitted during molecular
//! collisions scrambles the motion of a dilute gas.
//!
//! Two channels give a per-collision angular kick Δθ₀: Unruh radiation seen
//! by the accelerating molecule ([`unruh`]) and Moore–DeWitt radiation from
//! the collision acting as a moving mirror ([`mdw`]). Hard-sphere chaos
//! amplifies the kick by roughly 2λ/r per collision ([`randomization`]); the
//! [`sim`] module measures that amplification in an event-driven simulation.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod gas;
pub mod mdw;
pub mod quadrature;
pub mod randomization;
pub mod sim;
pub mod species_file;
pub mod sweep;
pub mod unruh;

pub use error::{Error, Result};
pub use gas::{
    builtin_species, collision_acceleration, derive_state, Catalogue, GasSpecies, GasState,
};
pub use mdw::{estimate_mdw, MdwEstimate};
pub use quadrature::{bose_power_integral, IntegralMethod, IntegralResult};
pub use randomization::{
    build_report, build_report_with_gain, collisions_to_exceed, collisions_to_randomize, Channel,
    RandomizationReport,
};
pub use unruh::{estimate_unruh, estimate_unruh_calibrated, UnruhEstimate};
