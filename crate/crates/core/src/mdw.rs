//! Moore–DeWitt (dynamical Casimir) momentum diffusion of a colliding molecule.
//!
//! A collision is treated as one half-period of a mechanical oscillator at
//! ω₀ = v/r acting as an imperfect mirror with amplitude reflectivity
//! R(ω) = −iΩ/(ω + iΩ). Matching |R|² ≈ Ω²/ω² to k²σ for a conducting sphere gives
//! the coupling Ω = √(10π/3) (kr)³ ω, evaluated at the sampled scale kr = v/c.
//! The diffusion rate is
//!
//! ```text
//! Γ = ℏΩω₀/(2πmc²) · ζ(ω₀/Ω),
//! ζ(u) = ln(1+u²)/(2u) − arctan(u)/u² − 1/u
//! ```
//!
//! and Δp² = Γ m ω₀ ℏ τ / 2 with ω₀τ = π.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR};
use crate::error::{require_positive, Error, Result};
use crate::gas::GasState;

/// Largest v/c accepted.
pub const MAX_SPEED_RATIO: f64 = 0.01;

/// Smallest ω₀/Ω accepted. ζ(u) changes sign near u ≈ 3.7 and the estimate
/// assumes Ω ≪ ω₀.
pub const MIN_U_RATIO: f64 = 10.0;

const SMALL_U: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MdwEstimate {
    /// Collision "oscillation" frequency v/r, rad/s.
    pub omega0: f64,
    /// Dalvit–Neto coupling Ω, rad/s.
    pub coupling_omega: f64,
    /// ω₀/Ω
    pub u_ratio: f64,
    pub ln_u_ratio: f64,
    pub zeta_value: f64,
    /// 1/s
    pub gamma_rate: f64,
    /// kg²·m²/s²
    pub delta_p_squared: f64,
    /// Angular kick via the full ζ, rad.
    pub delta_theta0: f64,
    /// Angular kick via the ln(ω₀/Ω) asymptote, rad.
    pub delta_theta0_log_form: f64,
}

/// ζ(u) = ln(1+u²)/(2u) − arctan(u)/u² − 1/u.
pub fn dn_zeta(u: f64) -> Result<f64> {
    require_positive("u", u)?;
    if u < SMALL_U {
        // −2/u + 5u/6 − 9u³/20 + O(u⁵)
        return Ok(-2.0 / u + 5.0 * u / 6.0 - 0.45 * u * u * u);
    }
    let log_term = if u > 1.0 {
        2.0 * u.ln() + (1.0 / (u * u)).ln_1p()
    } else {
        (u * u).ln_1p()
    };
    Ok(log_term / (2.0 * u) - u.atan() / (u * u) - 1.0 / u)
}

/// Ω = √(10π/3) (kr)³ ω.
pub fn dn_coupling(k: f64, radius: f64, omega: f64) -> Result<f64> {
    require_positive("k", k)?;
    require_positive("radius", radius)?;
    require_positive("omega", omega)?;
    Ok((10.0 * PI / 3.0).sqrt() * (k * radius).powi(3) * omega)
}

/// |R(ω)|² = Ω²/(ω² + Ω²) for the amplitude reflectivity −iΩ/(ω + iΩ).
pub fn reflectivity_squared(omega: f64, coupling_omega: f64) -> f64 {
    let o2 = coupling_omega * coupling_omega;
    o2 / (omega * omega + o2)
}

/// Γ = ℏΩω₀ ζ(ω₀/Ω) / (2πmc²).
pub fn diffusion_rate(omega0: f64, coupling_omega: f64, mass: f64) -> Result<f64> {
    require_positive("omega0", omega0)?;
    require_positive("coupling_omega", coupling_omega)?;
    require_positive("mass", mass)?;
    let u = omega0 / coupling_omega;
    if !(u > MIN_U_RATIO) {
        return Err(Error::validity(
            "log_regime",
            format!("omega0/Omega = {u:e} must exceed {MIN_U_RATIO}"),
        ));
    }
    Ok(HBAR * coupling_omega * omega0 * dn_zeta(u)? / (2.0 * PI * mass * C * C))
}

pub fn estimate_mdw(state: &GasState) -> Result<MdwEstimate> {
    let (m, r, v) = (state.mass(), state.radius(), state.v_rms);
    let beta = v / C;
    if !(beta < MAX_SPEED_RATIO) {
        return Err(Error::validity(
            "relativistic",
            format!("v/c = {beta:e} must be below {MAX_SPEED_RATIO}"),
        ));
    }
    let omega0 = v / r;
    // Frequencies sampled by a half-period at ω₀ have kr = ω₀r/c = v/c.
    let k = omega0 / C;
    let coupling_omega = dn_coupling(k, r, omega0)?;
    let u_ratio = omega0 / coupling_omega;
    let gamma_rate = diffusion_rate(omega0, coupling_omega, m)?;
    let tau = PI / omega0;
    let delta_p_squared = gamma_rate * m * omega0 * HBAR * tau / 2.0;

    Ok(MdwEstimate {
        omega0,
        coupling_omega,
        u_ratio,
        ln_u_ratio: u_ratio.ln(),
        zeta_value: dn_zeta(u_ratio)?,
        gamma_rate,
        delta_p_squared,
        delta_theta0: delta_p_squared.sqrt() / (m * v),
        delta_theta0_log_form: mdw_kick_log_form(m, r, v, u_ratio),
    })
}

/// Δθ₀ ≃ (ℏ/(rmv)) √((5π/6) ln(ω₀/Ω)) (v/c)⁴.
pub fn mdw_kick_log_form(mass: f64, radius: f64, speed: f64, u_ratio: f64) -> f64 {
    HBAR / (radius * mass * speed) * (5.0 * PI / 6.0 * u_ratio.ln()).sqrt() * (speed / C).powi(4)
}
