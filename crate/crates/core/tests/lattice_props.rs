use num_traits::Zero;
use proptest::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use zpdehn_core::exactalg::IntMatrix;
use zpdehn_core::lattice::{find_multiplicative_relation, siegel_basis};

const PRIMES: [u32; 5] = [2, 3, 5, 7, 11];
const PREC: u32 = 256;

/// `zeta_order^root * prod PRIMES[j]^exps[j]` at `PREC` bits.
fn number(exps: &[i64], root: i64, order: i64) -> Complex {
    let mut q = Rational::from(1);
    for (&p, &e) in PRIMES.iter().zip(exps) {
        let pe = Rational::from(Integer::from(p).pow(e.unsigned_abs() as u32));
        q *= if e >= 0 { pe } else { pe.recip() };
    }
    let angle: Float = Float::with_val(PREC, Constant::Pi) * 2 * root / order;
    let zeta = Complex::with_val(PREC, (angle.clone().cos(), angle.sin()));
    zeta * Float::with_val(PREC, &q)
}

/// Exact check of `sum a_i * (exps_i, root_i) = 0` with the root part taken
/// modulo `order`.
fn is_relation(a: &[i64], exps: &[Vec<i64>], roots: &[i64], order: i64) -> bool {
    let primes_ok =
        (0..PRIMES.len()).all(|j| a.iter().zip(exps).map(|(x, e)| x * e[j]).sum::<i64>() == 0);
    let root: i64 = a.iter().zip(roots).map(|(x, r)| x * r).sum();
    primes_ok && root.rem_euclid(order) == 0
}

/// Numbers `eta_0..eta_{k-2}` with random factorizations and a last number
/// forced by a planted relation with `a_{k-1} = +-1`.
fn planted() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>, i64, Vec<i64>)> {
    (
        2usize..=5,
        prop_oneof![Just(1i64), Just(2), Just(4), Just(6)],
    )
        .prop_flat_map(|(k, order)| {
            (
                prop::collection::vec(prop::collection::vec(-2i64..=2, PRIMES.len()), k - 1),
                prop::collection::vec(0..order, k - 1),
                Just(order),
                prop::collection::vec(-10i64..=10, k - 1),
                prop_oneof![Just(1i64), Just(-1)],
            )
                .prop_filter_map(
                    "trivial relation",
                    |(mut exps, mut roots, order, mut a, last)| {
                        if a.iter().all(|x| *x == 0) {
                            return None;
                        }
                        // eta_last^last = prod eta_i^{-a_i}.
                        let e: Vec<i64> = (0..PRIMES.len())
                            .map(|j| {
                                -last * a.iter().zip(&exps).map(|(x, v)| x * v[j]).sum::<i64>()
                            })
                            .collect();
                        let r = (-last * a.iter().zip(&roots).map(|(x, r)| x * r).sum::<i64>())
                            .rem_euclid(order);
                        exps.push(e);
                        roots.push(r);
                        a.push(last);
                        Some((exps, roots, order, a))
                    },
                )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn siegel_vectors_annihilate_exactly(
        rows in prop::collection::vec(prop::collection::vec(-1_000_000i64..=1_000_000, 5), 1..=3),
        extra in 0usize..=2,
    ) {
        let r = rows.len();
        let n = (r + 1 + extra).min(5);
        let rows: Vec<Vec<i64>> = rows.iter().map(|v| v[..n].to_vec()).collect();
        let m = IntMatrix::from_rows(n, &rows);
        prop_assume!(m.rank() == r);
        let (b, ratio) = siegel_basis(&m).unwrap();
        prop_assert_eq!(b.len(), n - r);
        prop_assert!(ratio.is_finite() && ratio > 0.0);
        for v in &b.vectors {
            prop_assert!(m.apply(v).iter().all(Zero::is_zero));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn planted_relations_are_recovered((exps, roots, order, a) in planted()) {
        let nums: Vec<Complex> = exps.iter().zip(&roots).map(|(e, &r)| number(e, r, order)).collect();
        prop_assert!(is_relation(&a, &exps, &roots, order));
        let rel = find_multiplicative_relation(&nums, 10).unwrap();
        let rel = rel.expect("planted relation missed");
        prop_assert!(rel.exponents.iter().all(|x| x.abs() <= 10));
        prop_assert!(is_relation(&rel.exponents, &exps, &roots, order), "{:?} is not a relation", rel.exponents);
    }

    #[test]
    fn distinct_primes_have_no_relation(pick in prop::sample::subsequence(PRIMES.to_vec(), 1..=3)) {
        let nums: Vec<Complex> = pick.iter().map(|&p| Complex::with_val(PREC, (p, 0))).collect();
        prop_assert_eq!(find_multiplicative_relation(&nums, 20).unwrap(), None);
    }
}
