use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use zpdehn_core::exactalg::{
    coordinates_in, kernel_basis, rank_q, rat, rat_row, ratio, IntMatrix, QPoly, QPolyMatrix, Rat,
};

fn monomials(nvars: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; nvars]];
    for i in 0..nvars {
        let mut e = vec![0; nvars];
        e[i] = 1;
        out.push(e.clone());
        for j in i..nvars {
            let mut f = e.clone();
            f[j] += 1;
            out.push(f);
        }
    }
    out
}

fn poly(nvars: usize) -> impl Strategy<Value = QPoly> {
    let m = monomials(nvars);
    prop_oneof![
        2 => Just(QPoly::zero(nvars)),
        5 => prop::collection::vec((0..m.len(), -3i64..=3), 1..=3).prop_map(move |terms| {
            QPoly::from_terms(nvars, terms.into_iter().map(|(k, c)| (m[k].clone(), rat(c))))
        }),
    ]
}

/// Random matrices, sometimes with a row made dependent on two others.
fn poly_matrix() -> impl Strategy<Value = QPolyMatrix> {
    (1usize..=3, 1usize..=4, 1usize..=4)
        .prop_flat_map(|(nv, r, c)| {
            (
                Just(nv),
                prop::collection::vec(prop::collection::vec(poly(nv), c), r),
                any::<bool>(),
                -2i64..=2,
            )
        })
        .prop_map(|(nv, mut rows, dep, k)| {
            if dep && rows.len() >= 3 {
                let last = rows.len() - 1;
                rows[last] = rows[0]
                    .iter()
                    .zip(&rows[1])
                    .map(|(a, b)| a.scale(&rat(k)).add(b))
                    .collect();
            }
            QPolyMatrix::from_rows(nv, rows)
        })
}

fn swapped(m: &QPolyMatrix, a: usize, b: usize) -> QPolyMatrix {
    let mut order: Vec<usize> = (0..m.rows()).collect();
    order.swap(a, b);
    m.select(&order, &(0..m.cols()).collect::<Vec<_>>())
}

fn scaled(m: &QPolyMatrix, r: usize, k: &Rat) -> QPolyMatrix {
    let mut out = m.clone();
    for c in 0..m.cols() {
        out.set(r, c, m.get(r, c).scale(k));
    }
    out
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut total = BigInt::zero();
    for (j, x) in m[0].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = x * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn column_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// gcd of the maximal minors; 1 exactly when the rows span a saturated
/// sublattice of `Z^n`.
fn minor_gcd(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows[0].len();
    column_subsets(n, rows.len())
        .iter()
        .fold(BigInt::zero(), |g, cols| {
            let sub: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                .collect();
            g.gcd(&det(&sub))
        })
}

fn box_vectors(n: usize, b: i64) -> Vec<Vec<i64>> {
    let w = 2 * b + 1;
    (0..w.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let d = code % w - b;
                    code /= w;
                    d
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generic_rank_row_and_transpose_invariance(m in poly_matrix(), a in 0usize..4, b in 0usize..4, num in 1i64..=5, den in 1i64..=5, neg in any::<bool>()) {
        let r = m.generic_rank();
        prop_assert!(r <= m.rows().min(m.cols()));
        let (a, b) = (a % m.rows(), b % m.rows());
        prop_assert_eq!(swapped(&m, a, b).generic_rank(), r);
        let k = ratio(if neg { -num } else { num }, den);
        prop_assert_eq!(scaled(&m, a, &k).generic_rank(), r);
        prop_assert_eq!(m.transpose().generic_rank(), r);
    }

    #[test]
    fn constant_matrices_match_rational_rank(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..=4), cols in 1usize..=4) {
        let rows: Vec<Vec<Rat>> = rows.iter().map(|r| rat_row(&r[..cols])).collect();
        let m = QPolyMatrix::from_rat_rows(2, &rows);
        prop_assert_eq!(m.generic_rank(), rank_q(&rows));
    }

    #[test]
    fn kernel_basis_is_the_integer_kernel(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..=3), cols in 1usize..=4) {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r[..cols].to_vec()).collect();
        let m = IntMatrix::from_rows(cols, &rows);
        let k = kernel_basis(&m);
        let kr: Vec<Vec<Rat>> = k.iter().map(|v| v.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect();
        for v in &k {
            prop_assert!(m.apply(v).iter().all(Zero::is_zero));
        }
        let mr: Vec<Vec<Rat>> = rows.iter().map(|r| rat_row(r)).collect();
        prop_assert_eq!(k.len(), cols - rank_q(&mr));
        if k.is_empty() {
            return Ok(());
        }
        prop_assert_eq!(rank_q(&kr), k.len());
        prop_assert!(minor_gcd(&k).abs().is_one(), "not saturated: {:?}", k);
        // Every small integer kernel vector has integer coordinates.
        for x in box_vectors(cols, 3) {
            let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            if !m.apply(&xb).iter().all(Zero::is_zero) {
                continue;
            }
            let coords = coordinates_in(&kr, &rat_row(&x));
            prop_assert!(coords.as_ref().is_some_and(|c| c.iter().all(|q| q.is_integer())), "{:?} outside span of {:?}", x, k);
        }
    }
}
