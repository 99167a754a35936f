//! Physical constants (CODATA 2018, exact SI values where defined).
//!
//! Every quantity in this crate is in SI units.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 2.997_924_58e8;
/// Unified atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub k_b: f64,
    pub c: f64,
}

pub const fn constants() -> PhysicalConstants {
    PhysicalConstants {
        hbar: HBAR,
        k_b: K_B,
        c: C,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codata_values() {
        let k = constants();
        assert_eq!(k.hbar, 1.054571817e-34);
        assert_eq!(k.k_b, 1.380649e-23);
        assert_eq!(k.c, 2.99792458e8);
        assert!(k.hbar > 0.0 && k.k_b > 0.0 && k.c > 0.0);
    }

    #[test]
    fn repeated_calls_identical() {
        assert_eq!(constants(), constants());
    }

    #[test]
    fn hbar_c_over_kb() {
        let k = constants();
        let v = k.hbar * k.c / k.k_b;
        assert!((v / 2.2898e-3 - 1.0).abs() < 1e-4, "{v}");
        // independent value: 1.054571817e-34 * 2.99792458e8 / 1.380649e-23
        assert!((v / 2.289_884_52e-3 - 1.0).abs() < 1e-7, "{v}");
    }
}
