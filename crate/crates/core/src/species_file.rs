//! Line-oriented species catalogue files.
//!
//! One record per line, whitespace-separated `key=value` pairs:
//!
//! ```text
//! # comment
//! name=N2 mass_kg=4.6517e-26 radius_m=1.85e-10
//! ```
//!
//! Keys `name`, `mass_kg` and `radius_m` are each required exactly once.
//! Blank lines and lines starting with `#` are skipped.

use crate::error::{Error, Result};
use crate::gas::GasSpecies;

pub fn parse_species_file(text: &str) -> Result<Vec<GasSpecies>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_record(line, idx + 1)?);
    }
    Ok(out)
}

fn parse_record(line: &str, lineno: usize) -> Result<GasSpecies> {
    let err = |reason: String| Error::Parse {
        line: lineno,
        reason,
    };
    let mut name = None;
    let mut mass = None;
    let mut radius = None;

    for pair in line.split_whitespace() {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got `{pair}`")))?;
        let slot = match key {
            "name" => {
                if value.is_empty() || value.contains('=') {
                    return Err(err(format!("invalid name `{value}`")));
                }
                if name.replace(value.to_string()).is_some() {
                    return Err(err("duplicate key `name`".into()));
                }
                continue;
            }
            "mass_kg" => &mut mass,
            "radius_m" => &mut radius,
            other => return Err(err(format!("unknown key `{other}`"))),
        };
        let parsed: f64 = value
            .parse()
            .map_err(|_| err(format!("`{key}` is not a number: `{value}`")))?;
        if !(parsed.is_finite() && parsed > 0.0) {
            return Err(err(format!("`{key}` must be positive and finite")));
        }
        if slot.replace(parsed).is_some() {
            return Err(err(format!("duplicate key `{key}`")));
        }
    }

    let name = name.ok_or_else(|| err("missing key `name`".into()))?;
    let mass = mass.ok_or_else(|| err("missing key `mass_kg`".into()))?;
    let radius = radius.ok_or_else(|| err("missing key `radius_m`".into()))?;
    GasSpecies::new(name, mass, radius)
}

/// Renders one record in the format accepted by [`parse_species_file`].
pub fn format_record(species: &GasSpecies) -> String {
    format!(
        "name={} mass_kg={:e} radius_m={:e}",
        species.name, species.mass, species.radius
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_records_and_skips_comments() {
        let text = "# test\n\nname=N2 mass_kg=4.65e-26 radius_m=1.85e-10\n  name=Xe radius_m=2.0e-10 mass_kg=2.18e-25  \n";
        let v = parse_species_file(text).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[1].name, "Xe");
        assert_eq!(v[1].mass, 2.18e-25);
        assert_eq!(v[1].radius, 2.0e-10);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("name=A mass_kg=1 radius_m=1\nname=B mass_kg=1", 2),
            ("\n\nname=A mass_kg=x radius_m=1", 3),
            ("name=A mass_kg=1 radius_m=1 colour=red", 1),
            ("name=A mass_kg=1 mass_kg=2 radius_m=1", 1),
            ("name=A mass_kg=-1 radius_m=1", 1),
            ("name=A mass_kg=inf radius_m=1", 1),
            ("name= mass_kg=1 radius_m=1", 1),
            ("just words", 1),
        ];
        for (text, line) in cases {
            match parse_species_file(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(
            name in "[A-Za-z][A-Za-z0-9_]{0,8}",
            mass in 1e-28f64..1e-24,
            radius in 1e-11f64..1e-8,
        ) {
            let s = GasSpecies::new(name, mass, radius).unwrap();
            let parsed = parse_species_file(&format_record(&s)).unwrap();
            prop_assert_eq!(parsed, vec![s]);
        }

        #[test]
        fn never_panics(text in "\\PC{0,200}") {
            let _ = parse_species_file(&text);
        }
    }
}
