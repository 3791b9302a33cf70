use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use zpdehn_core::nzdehn::{
    canonical_slopes, default_shape, solve_filling, synth_potential, DehnError, FillingCoefficient,
    NZPotential, Slope, SynthConfig,
};

fn pot(seed: u64, n: usize) -> NZPotential {
    synth_potential(seed, n, 8, &SynthConfig::default()).unwrap()
}

/// A point with every `|u_i|` below `frac` of the trust radius.
fn point(n: usize) -> impl Strategy<Value = (f64, Vec<(f64, f64)>)> {
    (
        0.05f64..0.9,
        prop::collection::vec((0.0f64..1.0, 0.0f64..2.0 * PI), n),
    )
}

fn at(p: &NZPotential, frac: f64, raw: &[(f64, f64)]) -> Vec<Complex64> {
    raw.iter()
        .map(|&(r, th)| Complex64::from_polar(frac * r * p.trust_radius(), th))
        .collect()
}

/// `exp(2 pi i (r + s t) / (p + q t))`, inverted if inside the unit disk.
fn closed_form(tau: Complex64, s: &Slope) -> Complex64 {
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let t = (i2pi * (tau * s.s as f64 + s.r as f64) / (tau * s.q as f64 + s.p as f64)).exp();
    if t.norm() < 1.0 {
        1.0 / t
    } else {
        t
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn v_is_half_the_gradient_of_phi(seed in 0u64..50, n in 1usize..=3, (frac, raw) in point(3)) {
        let p = pot(seed, n);
        let u = at(&p, frac, &raw[..n]);
        let v = p.v_of_u(&u).unwrap();
        let h = 1e-5;
        for j in 0..n {
            let (mut up, mut dn) = (u.clone(), u.clone());
            up[j] += h;
            dn[j] -= h;
            let fd = (p.phi(&up) - p.phi(&dn)) / (2.0 * h);
            prop_assert!((v[j] - 0.5 * fd).norm() < 1e-8, "{} vs {}", v[j], 0.5 * fd);
        }
    }

    #[test]
    fn potential_is_even(seed in 0u64..50, n in 1usize..=3, (frac, raw) in point(3)) {
        let p = pot(seed, n);
        let u = at(&p, frac, &raw[..n]);
        let neg: Vec<Complex64> = u.iter().map(|z| -z).collect();
        prop_assert!((p.phi(&u) - p.phi(&neg)).norm() <= 1e-12 * (1.0 + p.phi(&u).norm()));
        for (a, b) in p.v_of_u(&u).unwrap().iter().zip(p.v_of_u(&neg).unwrap()) {
            prop_assert!((a + b).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn holonomy_is_normalized_and_independent_of_the_dual_pair(seed in 0u64..20, idx in any::<prop::sample::Index>(), k in -3i64..=3) {
        let p = pot(seed, 1);
        let slopes = canonical_slopes(10, 20);
        let s = slopes[idx.index(slopes.len())];
        let solve = |s| match solve_filling(&p, &FillingCoefficient::new(vec![s])) {
            Err(DehnError::OutOfTrustRadius { .. }) => None,
            r => Some(r.unwrap()),
        };
        let (Some(base), Some(moved)) = (solve(s), solve(s.shifted(k))) else {
            return Err(TestCaseError::reject("outside the trust radius"));
        };
        prop_assert!(base.t[0].norm() > 1.0);
        prop_assert!((base.t[0] - moved.t[0]).norm() < 1e-10, "{} vs {}", base.t[0], moved.t[0]);
    }
}

#[test]
fn quadratic_potentials_match_the_closed_form() {
    let shapes = [
        default_shape(0),
        default_shape(1),
        Complex64::new(0.3, 0.7),
        Complex64::new(-1.2, 2.5),
    ];
    for tau in shapes {
        let p = NZPotential::quadratic(vec![tau]).unwrap();
        for s in canonical_slopes(1, 20) {
            let r = solve_filling(&p, &FillingCoefficient::new(vec![s])).unwrap();
            let want = closed_form(tau, &s);
            assert!(r.t[0].norm() > 1.0, "{s}");
            assert!(
                (r.t[0] - want).norm() < 1e-10 * want.norm().max(1.0),
                "{tau} {s}: {} vs {want}",
                r.t[0]
            );
        }
    }
}
