//! Collision counts needed for a per-collision angular kick to be amplified to
//! order one radian by hard-sphere chaos, Δθₙ ≃ gⁿ Δθ₀ with gain g = 2λ/r.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::GasState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Unruh,
    Mdw,
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::Unruh => "unruh",
            Channel::Mdw => "mdw",
        })
    }
}

/// Where the amplification gain came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GainSource {
    /// 2λ/r from the kinetic-theory mean free path.
    KineticTheory,
    /// Supplied by the caller.
    Calibrated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomizationReport {
    pub channel: Channel,
    pub delta_theta0: f64,
    pub gain: f64,
    pub gain_source: GainSource,
    /// −ln Δθ₀ / ln g before rounding.
    pub n_fractional: f64,
    /// Nearest integer to `n_fractional`.
    pub n_collisions: u64,
    /// Smallest n with gⁿ Δθ₀ ≥ 1.
    pub n_threshold: u64,
    /// s
    pub randomization_time: f64,
}

fn check_angle(delta_theta0: f64) -> Result<()> {
    if delta_theta0.is_finite() && delta_theta0 > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "delta_theta0",
            format!("must be positive and finite, got {delta_theta0}"),
        ))
    }
}

/// gⁿ Δθ₀, evaluated through logarithms.
pub fn amplified_angle(delta_theta0: f64, gain: f64, n: u64) -> Result<f64> {
    check_angle(delta_theta0)?;
    if !(gain.is_finite() && gain > 0.0) {
        return Err(Error::domain(
            "gain",
            format!("must be positive and finite, got {gain}"),
        ));
    }
    if n == 0 {
        return Ok(delta_theta0);
    }
    Ok((delta_theta0.ln() + n as f64 * gain.ln()).exp())
}

fn fractional_count(delta_theta0: f64, gain: f64) -> Result<f64> {
    check_angle(delta_theta0)?;
    if !(gain.is_finite() && gain > 1.0) {
        return Err(Error::domain(
            "gain",
            format!("must exceed 1 for exponential amplification, got {gain}"),
        ));
    }
    Ok(-delta_theta0.ln() / gain.ln())
}

/// Collisions needed to bring the angle to order one radian: −ln Δθ₀ / ln g
/// rounded to the nearest integer, or zero when Δθ₀ ≥ 1.
///
/// After the returned n collisions gⁿ Δθ₀ lies within a factor √g of 1 rad.
pub fn collisions_to_randomize(delta_theta0: f64, gain: f64) -> Result<u64> {
    let x = fractional_count(delta_theta0, gain)?;
    Ok(if x <= 0.0 { 0 } else { x.round() as u64 })
}

/// Smallest n with gⁿ Δθ₀ ≥ 1; zero when Δθ₀ ≥ 1.
///
/// Quotients within 1e-9 of an integer are taken as that integer so that
/// Δθ₀ = g^{-k} gives exactly k despite rounding in the logarithms.
pub fn collisions_to_exceed(delta_theta0: f64, gain: f64) -> Result<u64> {
    let x = fractional_count(delta_theta0, gain)?;
    if x <= 0.0 {
        return Ok(0);
    }
    let nearest = x.round();
    let n = if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        x.ceil()
    };
    Ok(n as u64)
}

/// Wall-clock time for each molecule to undergo `n` collisions.
pub fn randomization_time(state: &GasState, n: u64) -> f64 {
    n as f64 / state.collision_rate
}

/// Report using the kinetic-theory gain 2λ/r of `state`.
pub fn build_report(
    state: &GasState,
    channel: Channel,
    delta_theta0: f64,
) -> Result<RandomizationReport> {
    report(
        state,
        channel,
        delta_theta0,
        state.amplification_gain(),
        GainSource::KineticTheory,
    )
}

/// Report with an explicitly supplied gain.
pub fn build_report_with_gain(
    state: &GasState,
    channel: Channel,
    delta_theta0: f64,
    gain: f64,
) -> Result<RandomizationReport> {
    report(state, channel, delta_theta0, gain, GainSource::Calibrated)
}

fn report(
    state: &GasState,
    channel: Channel,
    delta_theta0: f64,
    gain: f64,
    gain_source: GainSource,
) -> Result<RandomizationReport> {
    let n_fractional = fractional_count(delta_theta0, gain)?;
    let n_collisions = collisions_to_randomize(delta_theta0, gain)?;
    Ok(RandomizationReport {
        channel,
        delta_theta0,
        gain,
        gain_source,
        n_fractional,
        n_collisions,
        n_threshold: collisions_to_exceed(delta_theta0, gain)?,
        randomization_time: randomization_time(state, n_collisions),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::{builtin_species, derive_state, STP_PRESSURE, STP_TEMPERATURE};
    use proptest::prelude::*;

    #[test]
    fn zero_collisions_is_identity() {
        for (x, g) in [(0.3, 7.0), (1e-40, 1e3), (2.0, 0.5)] {
            assert_eq!(amplified_angle(x, g, 0).unwrap(), x);
        }
    }

    #[test]
    fn powers_of_ten() {
        let v = amplified_angle(1e-10, 10.0, 3).unwrap();
        assert!((v / 1e-7 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn calibrated_inputs_land_near_one_radian() {
        // 34 ln 35 = 120.88 against −ln(3e-53) = 120.94: order unity but just short of 1.
        let v = amplified_angle(3e-53, 35.0, 34).unwrap();
        assert!(v > 0.5 && v < 2.0, "{v}");
        let n = fractional_count(3e-53, 35.0).unwrap();
        assert!((n - 34.016).abs() < 1e-3, "{n}");
        assert_eq!(collisions_to_randomize(3e-53, 35.0).unwrap(), 34);
        assert_eq!(collisions_to_exceed(3e-53, 35.0).unwrap(), 35);
    }

    #[test]
    fn trivial_counts() {
        assert_eq!(collisions_to_randomize(1.0, 35.0).unwrap(), 0);
        assert_eq!(collisions_to_randomize(5.0, 35.0).unwrap(), 0);
        assert_eq!(collisions_to_exceed(1.0, 35.0).unwrap(), 0);
        for g in [2.0, 10.0, 35.0, 700.0] {
            assert_eq!(collisions_to_randomize(1.0 / g, g).unwrap(), 1);
            assert_eq!(collisions_to_exceed(1.0 / g, g).unwrap(), 1);
            assert_eq!(collisions_to_randomize(g.powi(-7), g).unwrap(), 7);
            assert_eq!(collisions_to_exceed(g.powi(-7), g).unwrap(), 7);
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(
            collisions_to_randomize(1e-5, 1.0),
            Err(Error::Domain { field: "gain", .. })
        ));
        assert!(collisions_to_randomize(1e-5, 0.5).is_err());
        assert!(matches!(
            collisions_to_randomize(0.0, 10.0),
            Err(Error::Domain {
                field: "delta_theta0",
                ..
            })
        ));
        assert!(collisions_to_randomize(-1.0, 10.0).is_err());
        assert!(collisions_to_exceed(1e-5, 1.0).is_err());
        let s = derive_state(
            builtin_species("N2").unwrap(),
            STP_TEMPERATURE,
            STP_PRESSURE,
        )
        .unwrap();
        assert!(build_report_with_gain(&s, Channel::Unruh, 1e-20, 1.0).is_err());
    }

    #[test]
    fn n2_time_scale() {
        let s = derive_state(
            builtin_species("N2").unwrap(),
            STP_TEMPERATURE,
            STP_PRESSURE,
        )
        .unwrap();
        let t = randomization_time(&s, 34);
        assert!(t > 0.5e-9 && t < 10e-9, "{t:e}");
        let r = build_report(&s, Channel::Mdw, 1e-24).unwrap();
        assert_eq!(r.gain_source, GainSource::KineticTheory);
        assert!((r.gain - s.amplification_gain()).abs() == 0.0);
        assert_eq!(
            r.randomization_time,
            r.n_collisions as f64 / s.collision_rate
        );
    }

    proptest! {
        #[test]
        fn nearest_count_lands_within_half_a_collision(log10_theta in -60.0f64..-1.0, gi in 0usize..4) {
            let g = [2.0, 10.0, 35.0, 700.0][gi];
            let theta = 10f64.powf(log10_theta);
            let n = collisions_to_randomize(theta, g).unwrap();
            let slack = n as f64 * g.ln() + theta.ln();
            let tol = 1e-9 * (n as f64).max(1.0) * g.ln();
            prop_assert!(slack.abs() <= 0.5 * g.ln() + tol);
            let angle = amplified_angle(theta, g, n).unwrap();
            prop_assert!(angle >= g.powf(-0.5) * (1.0 - 1e-7) && angle <= g.sqrt() * (1.0 + 1e-7));
            let exceed = collisions_to_exceed(theta, g).unwrap();
            prop_assert!(exceed == n || exceed == n + 1);
        }

        #[test]
        fn ceiling_is_tight(log10_theta in -60.0f64..-1.0, gi in 0usize..4) {
            let g = [2.0, 10.0, 35.0, 700.0][gi];
            let theta = 10f64.powf(log10_theta);
            let n = collisions_to_exceed(theta, g).unwrap();
            let slack = n as f64 * g.ln() + theta.ln();
            let tol = 1e-9 * (n as f64).max(1.0) * g.ln();
            prop_assert!(slack >= -tol && slack <= g.ln() + tol);
            prop_assert!(amplified_angle(theta, g, n).unwrap() >= 1.0 - 1e-7);
            if n > 0 {
                prop_assert!(amplified_angle(theta, g, n - 1).unwrap() < 1.0 + 1e-7);
            }
        }

        #[test]
        fn monotone(a in 1e-60f64..1.0, b in 1e-60f64..1.0, g1 in 1.01f64..1e3, g2 in 1.01f64..1e3) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let (gl, gh) = if g1 < g2 { (g1, g2) } else { (g2, g1) };
            for count in [collisions_to_randomize, collisions_to_exceed] {
                prop_assert!(count(hi, g1).unwrap() <= count(lo, g1).unwrap());
                prop_assert!(count(a, gh).unwrap() <= count(a, gl).unwrap());
            }
        }
    }
}
