//! Gas species and the ideal-gas kinetic-theory state derived from them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{ATOMIC_MASS_UNIT, K_B};
use crate::error::{require_positive, Error, Result};

/// Standard temperature, K.
pub const STP_TEMPERATURE: f64 = 273.15;
/// Standard pressure, Pa.
pub const STP_PRESSURE: f64 = 101_325.0;

/// A monodisperse hard-sphere molecular species.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GasSpecies {
    pub name: String,
    /// Molecular mass, kg.
    pub mass: f64,
    /// Effective hard-sphere radius, m (half the kinetic diameter).
    pub radius: f64,
}

impl GasSpecies {
    pub fn new(name: impl Into<String>, mass: f64, radius: f64) -> Result<Self> {
        Ok(Self {
            name: name.into(),
            mass: require_positive("mass", mass)?,
            radius: require_positive("radius", radius)?,
        })
    }

    /// Same species with a different hard-sphere radius.
    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Self::new(self.name.clone(), self.mass, radius)
    }
}

/// (name, standard atomic weight in u, kinetic diameter in m)
const BUILTIN: &[(&str, f64, f64)] = &[
    ("N2", 28.0134, 3.70e-10),
    ("O2", 31.9988, 3.46e-10),
    ("Ar", 39.948, 3.40e-10),
    ("Ne", 20.1797, 2.75e-10),
    ("He", 4.002_602, 2.60e-10),
];

/// Lookup table of species, built-ins first, optionally overridden by user records.
#[derive(Debug, Clone)]
pub struct Catalogue {
    entries: Vec<GasSpecies>,
}

impl Catalogue {
    pub fn builtin() -> Self {
        let entries = BUILTIN
            .iter()
            .map(|&(name, weight, diameter)| GasSpecies {
                name: name.to_string(),
                mass: weight * ATOMIC_MASS_UNIT,
                radius: 0.5 * diameter,
            })
            .collect();
        Self { entries }
    }

    /// Adds or replaces entries by name.
    pub fn extend(&mut self, records: impl IntoIterator<Item = GasSpecies>) {
        for record in records {
            match self.entries.iter_mut().find(|e| e.name == record.name) {
                Some(existing) => *existing = record,
                None => self.entries.push(record),
            }
        }
    }

    pub fn get(&self, name: &str) -> Result<GasSpecies> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .cloned()
            .ok_or_else(|| Error::UnknownSpecies {
                name: name.to_string(),
                available: self.names(),
            })
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GasSpecies> {
        self.entries.iter()
    }
}

pub fn builtin_species(name: &str) -> Result<GasSpecies> {
    Catalogue::builtin().get(name)
}

/// Equilibrium kinetic-theory description of an ideal gas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GasState {
    pub species: GasSpecies,
    /// K
    pub temperature: f64,
    /// Pa
    pub pressure: f64,
    /// m⁻³
    pub number_density: f64,
    /// Root-mean-square speed, m/s.
    pub v_rms: f64,
    /// Mean (Maxwell) speed, m/s.
    pub v_mean: f64,
    /// Hard-sphere mean free path with collision diameter 2r, m.
    pub mean_free_path: f64,
    /// Collisions per molecule per second.
    pub collision_rate: f64,
}

impl GasState {
    pub fn radius(&self) -> f64 {
        self.species.radius
    }

    pub fn mass(&self) -> f64 {
        self.species.mass
    }

    /// Per-collision angular amplification of a hard-sphere gas, 2λ/r.
    pub fn amplification_gain(&self) -> f64 {
        2.0 * self.mean_free_path / self.species.radius
    }
}

pub fn derive_state(species: GasSpecies, temperature: f64, pressure: f64) -> Result<GasState> {
    require_positive("temperature", temperature)?;
    require_positive("pressure", pressure)?;
    require_positive("mass", species.mass)?;
    require_positive("radius", species.radius)?;

    let kt = K_B * temperature;
    let number_density = pressure / kt;
    let v_rms = (3.0 * kt / species.mass).sqrt();
    let v_mean = (8.0 * kt / (PI * species.mass)).sqrt();
    let diameter = 2.0 * species.radius;
    let mean_free_path = 1.0 / (2f64.sqrt() * PI * diameter * diameter * number_density);
    let collision_rate = v_mean / mean_free_path;

    Ok(GasState {
        species,
        temperature,
        pressure,
        number_density,
        v_rms,
        v_mean,
        mean_free_path,
        collision_rate,
    })
}

/// Typical acceleration during a collision, a ≃ v²/r with ⟨v²⟩ = 3k_BT/m.
pub fn collision_acceleration(state: &GasState) -> f64 {
    3.0 * K_B * state.temperature / (state.species.mass * state.species.radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n2_stp() -> GasState {
        derive_state(
            builtin_species("N2").unwrap(),
            STP_TEMPERATURE,
            STP_PRESSURE,
        )
        .unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn builtin_masses() {
        // 28.0134 u and 4.0026 u with u = 1.66054e-27 kg
        assert!(rel(builtin_species("N2").unwrap().mass, 4.6518e-26) < 1e-4);
        assert!(rel(builtin_species("He").unwrap().mass, 6.6465e-27) < 1e-4);
        assert_eq!(builtin_species("N2").unwrap().radius, 1.85e-10);
    }

    #[test]
    fn builtin_radii_in_sanity_band() {
        for s in Catalogue::builtin().iter() {
            assert!((1e-11..=1e-8).contains(&s.radius), "{}", s.name);
        }
    }

    #[test]
    fn unknown_species_lists_available() {
        match builtin_species("Xx") {
            Err(Error::UnknownSpecies { name, available }) => {
                assert_eq!(name, "Xx");
                assert!(available.iter().any(|n| n == "N2"));
                assert!(available.iter().any(|n| n == "Ar"));
                assert!(available.iter().any(|n| n == "He"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn n2_stp_state() {
        let s = n2_stp();
        assert!(rel(s.number_density, 2.6868e25) < 1e-4);
        assert!(rel(s.v_rms, 493.1) < 1e-3, "{}", s.v_rms);
        assert_eq!(s.number_density, STP_PRESSURE / (K_B * STP_TEMPERATURE));
    }

    #[test]
    fn quadrupled_temperature_doubles_v_rms() {
        let sp = builtin_species("N2").unwrap();
        let a = derive_state(sp.clone(), 250.0, 1e5).unwrap();
        let b = derive_state(sp, 1000.0, 1e5).unwrap();
        assert_eq!(b.v_rms, 2.0 * a.v_rms);
    }

    #[test]
    fn acceleration_n2() {
        let s = n2_stp();
        let a = collision_acceleration(&s);
        assert!(rel(a, 1.314e15) < 1e-3, "{a}");
        assert!(rel(a * s.radius(), s.v_rms * s.v_rms) < 1e-14);
    }

    #[test]
    fn acceleration_linear_in_temperature() {
        let sp = builtin_species("Ar").unwrap();
        let a = collision_acceleration(&derive_state(sp.clone(), 300.0, 1e5).unwrap());
        let b = collision_acceleration(&derive_state(sp, 600.0, 1e5).unwrap());
        assert!(rel(b, 2.0 * a) < 1e-15);
    }

    #[test]
    fn non_positive_inputs_name_the_field() {
        let sp = builtin_species("N2").unwrap();
        match derive_state(sp.clone(), 0.0, 1e5) {
            Err(Error::Domain { field, .. }) => assert_eq!(field, "temperature"),
            other => panic!("{other:?}"),
        }
        match derive_state(sp, 300.0, -1.0) {
            Err(Error::Domain { field, .. }) => assert_eq!(field, "pressure"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overrides_replace_builtins() {
        let mut cat = Catalogue::builtin();
        cat.extend([GasSpecies::new("N2", 1e-26, 2e-10).unwrap()]);
        assert_eq!(cat.get("N2").unwrap().mass, 1e-26);
        assert_eq!(cat.names().len(), Catalogue::builtin().names().len());
    }

    proptest! {
        #[test]
        fn kinetic_identities(t in 1.0f64..1e4, p in 1.0f64..1e7, idx in 0usize..5) {
            let sp = Catalogue::builtin().iter().nth(idx).unwrap().clone();
            let d = 2.0 * sp.radius;
            let s = derive_state(sp, t, p).unwrap();
            let lhs = s.mean_free_path * s.number_density * 2f64.sqrt() * PI * d * d;
            prop_assert!((lhs - 1.0).abs() < 1e-12);
            prop_assert!((s.v_mean / s.v_rms / (8.0 / (3.0 * PI)).sqrt() - 1.0).abs() < 1e-12);
            for v in [s.collision_rate, s.mean_free_path, s.v_rms] {
                prop_assert!(v.is_finite() && v > 0.0);
            }
            prop_assert!((s.collision_rate * s.mean_free_path / s.v_mean - 1.0).abs() < 1e-12);
        }
    }
}
