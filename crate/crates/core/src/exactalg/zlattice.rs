use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::Rat;

/// Rectangular matrix of big integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must be rows*cols");
        IntMatrix { rows, cols, data }
    }

    /// Build from machine-integer rows. `cols` is needed for the 0-row case.
    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged integer matrix");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_big_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged integer matrix");
            data.extend(r);
        }
        IntMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn identity(n: usize) -> Self {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i64).collect())
            .collect();
        Self::from_rows(n, &rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn to_rat_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|x| Rat::from_integer(x.clone()))
                    .collect()
            })
            .collect()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        super::rank_q(&self.to_rat_rows())
    }

    /// `self * v`.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

fn sub_mul(target: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (t, s) in target.iter_mut().zip(src) {
        *t -= s * q;
    }
}

/// Integer row echelon form driven by the first `pivot_cols` columns, with
/// unimodular row operations applied to whole rows. Pivots are made
/// positive and entries above each pivot reduced into `[0, pivot)`.
/// Returns the number of pivots; pivot rows come first.
fn echelon(rows: &mut [Vec<BigInt>], pivot_cols: usize) -> usize {
    let m = rows.len();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == m {
            break;
        }
        loop {
            let best = (r..m)
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()));
            let Some(p) = best else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if !rows[i][c].is_zero() {
                    let q = rows[i][c].div_floor(&rows[r][c]);
                    let (head, tail) = rows.split_at_mut(i);
                    sub_mul(&mut tail[0], &head[r], &q);
                    if !rows[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < m && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = rows[i][c].div_floor(&rows[r][c]);
                if !q.is_zero() {
                    let (head, tail) = rows.split_at_mut(r);
                    sub_mul(&mut head[i], &tail[0], &q);
                }
            }
            r += 1;
        }
    }
    r
}

/// Hermite normal form of the lattice spanned by `rows`; zero rows dropped.
pub fn hermite_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let cols = rows.first().map_or(0, Vec::len);
    let r = echelon(&mut rows, cols);
    rows.truncate(r);
    rows
}

/// Basis of the integer kernel lattice `{x : M x = 0}` in Hermite normal
/// form (first nonzero entry of each vector positive).
///
/// Row-reduces `[M^T | I]` with unimodular operations; the identity part of
/// every row whose left part vanished is a kernel vector, and together they
/// form a lattice basis because the transform is unimodular.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (r, c) = (m.rows(), m.cols());
    let mut aug: Vec<Vec<BigInt>> = (0..c)
        .map(|j| {
            let mut row: Vec<BigInt> = (0..r).map(|i| m.get(i, j).clone()).collect();
            row.extend((0..c).map(|k| BigInt::from((k == j) as i64)));
            row
        })
        .collect();
    let rank = echelon(&mut aug, r);
    let kernel: Vec<Vec<BigInt>> = aug[rank..].iter().map(|row| row[r..].to_vec()).collect();
    if kernel.is_empty() {
        return kernel;
    }
    hermite_rows(kernel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_single_even_form() {
        let m = IntMatrix::from_rows(2, &[vec![2, 4]]);
        assert_eq!(kernel_basis(&m), vec![big(&[2, -1])]);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(kernel_basis(&IntMatrix::identity(2)).is_empty());
    }

    #[test]
    fn kernel_of_sum_form_has_rank_two() {
        let m = IntMatrix::from_rows(3, &[vec![1, 1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).iter().all(Zero::is_zero));
        }
        // Same lattice as the difference basis: both HNFs agree.
        assert_eq!(
            hermite_rows(k),
            hermite_rows(vec![big(&[1, -1, 0]), big(&[0, 1, -1])])
        );
    }

    #[test]
    fn hermite_is_canonical() {
        let a = hermite_rows(vec![big(&[2, 3]), big(&[4, 5])]);
        let b = hermite_rows(vec![big(&[2, 3]), big(&[2, 2])]);
        assert_eq!(a, b);
        assert_eq!(a, vec![big(&[2, 0]), big(&[0, 1])]);
    }

    #[test]
    fn kernel_of_empty_row_set_is_standard_basis() {
        let m = IntMatrix::from_rows(3, &[]);
        assert_eq!(
            kernel_basis(&m),
            vec![big(&[1, 0, 0]), big(&[0, 1, 0]), big(&[0, 0, 1])]
        );
    }
}
