use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DehnError, NZPotential};

/// Radius of the disk the degree-4 coefficients are drawn from. Degree `k`
/// uses radius `SYNTH_COEFF_RADIUS^(k/2 - 1)`, so the series converges for
/// `|u|^2 < 1 / SYNTH_COEFF_RADIUS`.
pub const SYNTH_COEFF_RADIUS: f64 = 0.1;

/// Cusp shapes for a synthetic potential.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum ShapeSpec {
    /// Cusp 1: the root of `x^3 - x + 1` in the upper half plane. Cusp
    /// `k >= 2`: `i * k^(1/3)`.
    #[default]
    Default,
    Explicit(Vec<Complex64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthConfig {
    pub shapes: ShapeSpec,
    /// Include monomials involving more than one cusp.
    pub mixing: bool,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            shapes: ShapeSpec::Default,
            mixing: true,
        }
    }
}

fn cubic_root_upper() -> Complex64 {
    // Real root rho of x^3 - x + 1; the other two have real part -rho/2 and
    // squared modulus -1/rho.
    let mut x = -1.3f64;
    for _ in 0..60 {
        x -= (x * x * x - x + 1.0) / (3.0 * x * x - 1.0);
    }
    let re = -x / 2.0;
    Complex64::new(re, (-1.0 / x - re * re).sqrt())
}

/// Default shape of cusp `k` (0-based).
pub fn default_shape(k: usize) -> Complex64 {
    if k == 0 {
        cubic_root_upper()
    } else {
        Complex64::new(0.0, ((k + 1) as f64).cbrt())
    }
}

fn even_exponents(n: usize, half: u32, out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>) {
    if cur.len() + 1 == n {
        cur.push(2 * half);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for h in 0..=half {
        cur.push(2 * h);
        even_exponents(n, half - h, out, cur);
        cur.pop();
    }
}

/// Seeded potential with every admissible coefficient drawn uniformly from a
/// disk whose radius decays geometrically with the degree. The trust radius is
/// half the convergence radius of the model series.
pub fn synth_potential(
    seed: u64,
    n: usize,
    trunc_degree: u32,
    config: &SynthConfig,
) -> Result<NZPotential, DehnError> {
    let shapes = match &config.shapes {
        ShapeSpec::Default => (0..n).map(default_shape).collect(),
        ShapeSpec::Explicit(s) => {
            if s.len() != n {
                return Err(DehnError::CuspCount {
                    expected: n,
                    got: s.len(),
                });
            }
            s.clone()
        }
    };
    if trunc_degree < 4 || trunc_degree % 2 == 1 {
        return Err(DehnError::InvalidPotential(format!(
            "truncation degree {trunc_degree} must be even and at least 4"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = BTreeMap::new();
    for half in 2..=trunc_degree / 2 {
        let radius = SYNTH_COEFF_RADIUS.powi(half as i32 - 1);
        let mut alphas = Vec::new();
        even_exponents(n, half, &mut alphas, &mut Vec::new());
        for alpha in alphas {
            let mixed = alpha.iter().filter(|&&a| a > 0).count() > 1;
            // Draw even when skipped so the pure terms do not depend on the
            // mixing flag.
            let r = radius * rng.random::<f64>().sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            if mixed && !config.mixing {
                continue;
            }
            coeffs.insert(alpha, Complex64::from_polar(r, theta));
        }
    }
    let trust = 0.5 / SYNTH_COEFF_RADIUS.sqrt();
    NZPotential::new(shapes, coeffs, trunc_degree)?.with_trust_radius(trust)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nzdehn::sgi_check;

    #[test]
    fn default_shape_is_a_root() {
        let t = default_shape(0);
        assert!((t * t * t - t + 1.0).norm() < 1e-14);
        assert!(t.im > 0.0);
        let t2 = default_shape(1);
        assert!((t2 * t2 * t2 - Complex64::new(0.0, -2.0)).norm() < 1e-14);
    }

    #[test]
    fn deterministic_in_seed() {
        let a = synth_potential(0, 2, 8, &SynthConfig::default()).unwrap();
        let b = synth_potential(0, 2, 8, &SynthConfig::default()).unwrap();
        assert_eq!(a, b);
        let c = synth_potential(1, 2, 8, &SynthConfig::default()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn mixing_controls_sgi() {
        let mixed = synth_potential(3, 2, 8, &SynthConfig::default()).unwrap();
        assert!(!sgi_check(&mixed).unwrap());
        let split = synth_potential(
            3,
            2,
            8,
            &SynthConfig {
                mixing: false,
                ..SynthConfig::default()
            },
        )
        .unwrap();
        assert!(sgi_check(&split).unwrap());
        assert_eq!(
            mixed.coefficients().get(&vec![4, 0]),
            split.coefficients().get(&vec![4, 0])
        );
    }

    #[test]
    fn tail_is_small_at_radius_three_tenths() {
        for n in 1..=3 {
            let p = synth_potential(0, n, 8, &SynthConfig::default()).unwrap();
            assert!(p.tail_estimate(0.3) < 1e-6);
        }
    }
}
