//! Momentum diffusion of a colliding molecule driven by Unruh radiation.
//!
//! During a collision a molecule of radius r and speed v accelerates at
//! a ≃ v²/r and sees the vacuum as thermal at T_U = ℏa/(2πk_Bc). Scattering of
//! that radiation (conducting-sphere cross-section σ = (10π/3) r² (kr)⁴) over the
//! collision time r/v gives
//!
//! ```text
//! Δp² = (5ℏ²/(3πr²)) (c/v) ∫ x⁸/(e^{αx} − 1) dx,   α = 2πc²/(a r),  x = kr
//! ```
//!
//! and an angular kick Δθ₀ = Δp/(mv).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR, K_B};
use crate::error::{require_positive, Error, Result};
use crate::gas::{collision_acceleration, GasState};
use crate::quadrature::{bose_power_integral, factorial, IntegralMethod};

/// Smallest α accepted; the estimate assumes a far-from-relativistic gas (α ≫ 1).
pub const MIN_ALPHA: f64 = 1e3;

/// Power of x in the diffusion integrand: k² from the momentum transfer,
/// (kr)⁴ from σ, and k² from the mode density.
pub const DIFFUSION_POWER: u32 = 8;

/// Upper limit of kr for the long-wavelength cross-section.
pub const RAYLEIGH_LIMIT: f64 = 0.1;

/// Exponent beyond which the Bose factor is replaced by its Boltzmann tail.
const OCCUPATION_ASYMPTOTIC_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnruhEstimate {
    /// m/s²
    pub acceleration: f64,
    /// K
    pub unruh_temperature: f64,
    pub alpha: f64,
    /// Wavenumber where the diffusion integrand peaks, m⁻¹.
    pub peak_wavenumber: f64,
    /// m
    pub peak_wavelength: f64,
    /// kg²·m²/s²
    pub delta_p_squared: f64,
    /// rad
    pub delta_theta0: f64,
    pub integral_method: IntegralMethod,
}

pub fn unruh_temperature(acceleration: f64) -> Result<f64> {
    if !(acceleration.is_finite() && acceleration >= 0.0) {
        return Err(Error::domain(
            "acceleration",
            format!("must be non-negative and finite, got {acceleration}"),
        ));
    }
    Ok(HBAR * acceleration / (2.0 * PI * K_B * C))
}

/// Mean photon number per mode, 1/(exp(2πcω/a) − 1), seen at proper acceleration `a`.
pub fn mean_occupation(omega: f64, acceleration: f64) -> Result<f64> {
    require_positive("omega", omega)?;
    require_positive("acceleration", acceleration)?;
    Ok(bose_occupation(2.0 * PI * C * omega / acceleration))
}

/// 1/(e^x − 1), switching to e^{−x} once the −1 is below double precision.
pub fn bose_occupation(x: f64) -> f64 {
    if x > OCCUPATION_ASYMPTOTIC_EXPONENT {
        (-x).exp()
    } else {
        1.0 / x.exp_m1()
    }
}

/// Rayleigh-regime scattering cross-section of a conducting sphere.
pub fn conducting_sphere_cross_section(k: f64, radius: f64) -> Result<f64> {
    require_positive("k", k)?;
    require_positive("radius", radius)?;
    let kr = k * radius;
    if kr >= RAYLEIGH_LIMIT {
        return Err(Error::validity(
            "rayleigh",
            format!("kr = {kr} is not small compared to 1 (limit {RAYLEIGH_LIMIT})"),
        ));
    }
    Ok(10.0 * PI / 3.0 * radius * radius * kr.powi(4))
}

pub fn wavelength(wavenumber: f64) -> f64 {
    2.0 * PI / wavenumber
}

pub fn estimate_unruh(state: &GasState, method: IntegralMethod) -> Result<UnruhEstimate> {
    let a = collision_acceleration(state);
    let r = state.radius();
    let alpha = 2.0 * PI * C * C / (a * r);
    from_parts(r, state.mass(), state.v_rms, alpha, method)
}

/// Runs the estimate from externally supplied intermediates instead of a gas state.
///
/// `rmv_over_hbar` fixes the product r·m·v in units of ℏ and `alpha` overrides the
/// thermal α. The mass follows from ⟨v²⟩ = 3k_BT/m and the radius from r·m·v.
pub fn estimate_unruh_calibrated(
    rmv_over_hbar: f64,
    alpha: f64,
    temperature: f64,
    speed: f64,
    method: IntegralMethod,
) -> Result<UnruhEstimate> {
    require_positive("rmv_over_hbar", rmv_over_hbar)?;
    require_positive("alpha", alpha)?;
    require_positive("temperature", temperature)?;
    require_positive("speed", speed)?;
    let mass = 3.0 * K_B * temperature / (speed * speed);
    let radius = rmv_over_hbar * HBAR / (mass * speed);
    from_parts(radius, mass, speed, alpha, method)
}

fn from_parts(
    radius: f64,
    mass: f64,
    speed: f64,
    alpha: f64,
    method: IntegralMethod,
) -> Result<UnruhEstimate> {
    if !(alpha >= MIN_ALPHA) {
        return Err(Error::validity(
            "relativistic",
            format!("alpha = {alpha:e} is below the nonrelativistic guard {MIN_ALPHA:e}"),
        ));
    }
    let acceleration = 2.0 * PI * C * C / (alpha * radius);
    let peak_wavenumber = f64::from(DIFFUSION_POWER) / (alpha * radius);
    let integral = bose_power_integral(alpha, DIFFUSION_POWER, method)?;
    let delta_p_squared =
        5.0 * HBAR * HBAR / (3.0 * PI * radius * radius) * (C / speed) * integral.value;

    Ok(UnruhEstimate {
        acceleration,
        unruh_temperature: unruh_temperature(acceleration)?,
        alpha,
        peak_wavenumber,
        peak_wavelength: wavelength(peak_wavenumber),
        delta_p_squared,
        delta_theta0: delta_p_squared.sqrt() / (mass * speed),
        integral_method: method,
    })
}

/// Angular kick written directly in terms of T, m, r and v with the integral
/// replaced by 8!/α⁹:
/// Δθ₀ = (ℏ/(rmv)) √(8!·5c/(3πv)) (3k_BT/(2πmc²))^{9/2}.
pub fn unruh_kick_closed_form(state: &GasState) -> f64 {
    let (m, r, v) = (state.mass(), state.radius(), state.v_rms);
    let thermal = 3.0 * K_B * state.temperature / (2.0 * PI * m * C * C);
    HBAR / (r * m * v)
        * (factorial(DIFFUSION_POWER) * 5.0 * C / (3.0 * PI * v)).sqrt()
        * thermal.powf(4.5)
}
