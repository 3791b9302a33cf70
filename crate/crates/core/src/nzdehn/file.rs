//! Manifold potential files.
//!
//! ```json
//! {
//!   "cusps": 1,
//!   "shapes": [[0.66, 0.56]],
//!   "coefficients": [{"alpha": [4], "value": [0.01, -0.02]}],
//!   "truncation": 8,
//!   "trust_radius": 0.5
//! }
//! ```
//!
//! `trust_radius` is optional. Validation happens while parsing so every
//! error carries the line and column where it was detected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::Deserialize;

use super::potential::check_exponent;
use super::{DehnError, NZPotential};

// Checks run inside `visit_seq` so the parser reports the position of the
// offending array rather than of whatever follows it.

struct Shape(Complex64);

impl<'de> Deserialize<'de> for Shape {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Shape;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a shape [re, im]")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Shape, A::Error> {
                let re: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                if im == 0.0 {
                    return Err(de::Error::custom(format!("shape [{re}, {im}] is real")));
                }
                Ok(Shape(Complex64::new(re, im)))
            }
        }
        d.deserialize_seq(V)
    }
}

struct Alpha(Vec<u32>);

impl<'de> Deserialize<'de> for Alpha {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Alpha;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an exponent vector")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Alpha, A::Error> {
                let mut a = Vec::new();
                while let Some(x) = seq.next_element::<u32>()? {
                    a.push(x);
                }
                if a.iter().any(|x| x % 2 == 1) {
                    return Err(de::Error::custom(format!(
                        "exponent {a:?} has an odd entry"
                    )));
                }
                match a.iter().sum::<u32>() {
                    0 => Err(de::Error::custom(format!(
                        "exponent {a:?} is a constant term"
                    ))),
                    2 => Err(de::Error::custom(format!(
                        "exponent {a:?} is quadratic; quadratic terms come from the shapes"
                    ))),
                    _ => Ok(Alpha(a)),
                }
            }
        }
        d.deserialize_seq(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Coefficient {
    alpha: Alpha,
    value: [f64; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    cusps: usize,
    shapes: Vec<Shape>,
    coefficients: Vec<Coefficient>,
    truncation: u32,
    #[serde(default)]
    trust_radius: Option<f64>,
}

#[derive(Deserialize)]
#[serde(try_from = "Raw")]
struct Manifold(NZPotential);

impl TryFrom<Raw> for Manifold {
    type Error = String;

    fn try_from(raw: Raw) -> Result<Self, String> {
        if raw.shapes.len() != raw.cusps {
            return Err(format!(
                "{} shapes given for {} cusps",
                raw.shapes.len(),
                raw.cusps
            ));
        }
        let mut coeffs = BTreeMap::new();
        for (k, c) in raw.coefficients.into_iter().enumerate() {
            check_exponent(&c.alpha.0, raw.cusps, raw.truncation)
                .map_err(|e| format!("coefficient {}: {e}", k + 1))?;
            let alpha = c.alpha.0;
            if coeffs
                .insert(alpha.clone(), Complex64::new(c.value[0], c.value[1]))
                .is_some()
            {
                return Err(format!("exponent {alpha:?} appears twice"));
            }
        }
        let pot = NZPotential::new(
            raw.shapes.into_iter().map(|s| s.0).collect(),
            coeffs,
            raw.truncation,
        )
        .map_err(|e| e.to_string())?;
        match raw.trust_radius {
            Some(r) => pot
                .with_trust_radius(r)
                .map(Manifold)
                .map_err(|e| e.to_string()),
            None => Ok(Manifold(pot)),
        }
    }
}

/// Parse a manifold potential from JSON text.
pub fn parse_manifold(text: &str) -> Result<NZPotential, DehnError> {
    serde_json::from_str::<Manifold>(text)
        .map(|m| m.0)
        .map_err(|e| {
            let full = e.to_string();
            let msg = match full.rsplit_once(" at line ") {
                Some((head, _)) => head.to_string(),
                None => full,
            };
            DehnError::ManifoldFile {
                line: e.line(),
                column: e.column(),
                msg,
            }
        })
}

pub fn read_manifold(path: &Path) -> Result<NZPotential, DehnError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| DehnError::Io(format!("{}: {e}", path.display())))?;
    parse_manifold(&text)
}

/// Serialize a potential in the manifold file format.
pub fn manifold_to_json(pot: &NZPotential) -> String {
    let mut obj = serde_json::json!({
        "cusps": pot.n_cusps(),
        "shapes": pot.shapes().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "coefficients": pot
            .coefficients()
            .iter()
            .map(|(a, m)| serde_json::json!({"alpha": a, "value": [m.re, m.im]}))
            .collect::<Vec<_>>(),
        "truncation": pot.trunc_degree(),
    });
    if pot.trust_radius().is_finite() {
        obj["trust_radius"] = serde_json::json!(pot.trust_radius());
    }
    serde_json::to_string_pretty(&obj).expect("json values are finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nzdehn::{synth_potential, SynthConfig};

    #[test]
    fn round_trip() {
        let pot = synth_potential(5, 2, 8, &SynthConfig::default()).unwrap();
        assert_eq!(parse_manifold(&manifold_to_json(&pot)).unwrap(), pot);
    }

    fn line_of(text: &str) -> usize {
        match parse_manifold(text) {
            Err(DehnError::ManifoldFile { line, .. }) => line,
            other => panic!("expected a file error, got {other:?}"),
        }
    }

    #[test]
    fn odd_exponent_reports_its_line() {
        let text = "{\n \"cusps\": 1,\n \"shapes\": [[0, 1]],\n \"coefficients\": [\n  {\"alpha\": [3], \"value\": [1, 0]}\n ],\n \"truncation\": 8\n}";
        assert_eq!(line_of(text), 5);
    }

    #[test]
    fn real_shape_reports_its_line() {
        let text = "{\n \"cusps\": 1,\n \"shapes\": [\n  [1.5, 0]\n ],\n \"coefficients\": [],\n \"truncation\": 8\n}";
        assert_eq!(line_of(text), 4);
    }

    #[test]
    fn constant_term_rejected() {
        let text = "{\"cusps\": 1, \"shapes\": [[0, 1]],\n\"coefficients\": [{\"alpha\": [0], \"value\": [1, 0]}], \"truncation\": 8}";
        assert_eq!(line_of(text), 2);
    }

    #[test]
    fn cross_field_errors() {
        let text = "{\"cusps\": 2, \"shapes\": [[0, 1]], \"coefficients\": [], \"truncation\": 8}";
        assert!(matches!(
            parse_manifold(text),
            Err(DehnError::ManifoldFile { .. })
        ));
        let text = "{\"cusps\": 1, \"shapes\": [[0, 1]], \"coefficients\": [{\"alpha\": [10], \"value\": [1, 0]}], \"truncation\": 8}";
        assert!(parse_manifold(text).is_err());
    }
}
