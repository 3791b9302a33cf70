use std::fmt;

use num_traits::{One, Zero};

use super::{QPoly, Rat};

/// Rectangular matrix of polynomials sharing one variable count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QPolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<QPoly>,
}

impl QPolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        QPolyMatrix {
            rows,
            cols,
            nvars,
            entries: vec![QPoly::zero(nvars); rows * cols],
        }
    }

    /// Build from rows. All rows must have equal length and all entries the
    /// same variable count; an empty row list gives a 0x0 matrix.
    pub fn from_rows(nvars: usize, rows: Vec<Vec<QPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            for e in row {
                assert_eq!(e.nvars(), nvars, "entry variable count mismatch");
                entries.push(e);
            }
        }
        QPolyMatrix {
            rows: r,
            cols: c,
            nvars,
            entries,
        }
    }

    /// Constant matrix from rationals.
    pub fn from_rat_rows(nvars: usize, rows: &[Vec<Rat>]) -> Self {
        Self::from_rows(
            nvars,
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|x| QPoly::constant(nvars, x.clone()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, r: usize, c: usize) -> &QPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: QPoly) {
        assert_eq!(v.nvars(), self.nvars, "entry variable count mismatch");
        self.entries[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.nvars);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Submatrix on the given row and column indices, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_rows(
            self.nvars,
            rows.iter()
                .map(|&r| cols.iter().map(|&c| self.get(r, c).clone()).collect())
                .collect(),
        )
    }

    fn to_grid(&self) -> Vec<Vec<QPoly>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).clone()).collect())
            .collect()
    }

    /// Rank over the rational function field in the variables.
    ///
    /// Bareiss elimination with full pivoting: the pivot is the first nonzero
    /// entry of the remaining submatrix in row-major order. Every division is
    /// exact because each intermediate entry is a minor of the input.
    pub fn generic_rank(&self) -> usize {
        let mut a = self.to_grid();
        let (m, n) = (self.rows, self.cols);
        let mut prev = QPoly::one(self.nvars);
        let mut rank = 0;
        for k in 0..m.min(n) {
            let pivot = (k..m)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero());
            let Some((pi, pj)) = pivot else { break };
            a.swap(k, pi);
            if pj != k {
                for row in a.iter_mut() {
                    row.swap(k, pj);
                }
            }
            rank += 1;
            for i in k + 1..m {
                for j in k + 1..n {
                    let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = num
                        .div_exact(&prev)
                        .expect("Bareiss step must divide exactly by the previous pivot");
                }
                a[i][k] = QPoly::zero(self.nvars);
            }
            prev = a[k][k].clone();
        }
        rank
    }
}

impl fmt::Display for QPolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Reduced row echelon form and the pivot columns.
pub fn rref(m: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rat::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let d = &a[r][j] * &f;
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Exact rank over the rationals.
pub fn rank_q(m: &[Vec<Rat>]) -> usize {
    rref(m).1.len()
}

/// Coordinates of `target` in the span of `basis` (assumed independent).
/// Returns `None` when `target` lies outside the span.
pub fn coordinates_in(basis: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let k = basis.len();
    let dim = target.len();
    // Columns are the basis vectors, last column the target.
    let aug: Vec<Vec<Rat>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Rat> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.contains(&k) {
        return None;
    }
    assert!(pivots.len() == k, "basis vectors are dependent");
    let mut x = vec![Rat::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = red[r][k].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rat_row};

    fn t() -> QPoly {
        QPoly::var(1, 0)
    }

    fn c(k: i64) -> QPoly {
        QPoly::constant(1, rat(k))
    }

    #[test]
    fn generic_rank_examples() {
        let one_plus_t = c(1).add(&t());
        let m = QPolyMatrix::from_rows(
            1,
            vec![vec![one_plus_t.clone(), t()], vec![t(), one_plus_t]],
        );
        assert_eq!(m.generic_rank(), 2);

        let m = QPolyMatrix::from_rows(1, vec![vec![c(1), t()], vec![t(), t().mul(&t())]]);
        assert_eq!(m.generic_rank(), 1);

        assert_eq!(QPolyMatrix::zeros(2, 2, 1).generic_rank(), 0);
        assert_eq!(QPolyMatrix::from_rows(1, vec![]).generic_rank(), 0);
    }

    #[test]
    fn generic_rank_of_vandermonde_in_three_shapes() {
        let n = 3;
        let rows = (0..3u32)
            .map(|p| {
                (0..n)
                    .map(|i| {
                        QPoly::monomial(
                            n,
                            (0..n).map(|j| if j == i { p } else { 0 }).collect(),
                            rat(1),
                        )
                    })
                    .collect()
            })
            .collect();
        assert_eq!(QPolyMatrix::from_rows(n, rows).generic_rank(), 3);
    }

    #[test]
    fn rank_q_examples() {
        assert_eq!(rank_q(&[rat_row(&[1, 2]), rat_row(&[2, 4])]), 1);
        let id: Vec<Vec<Rat>> = (0..3)
            .map(|i| rat_row(&[(i == 0) as i64, (i == 1) as i64, (i == 2) as i64]))
            .collect();
        assert_eq!(rank_q(&id), 3);
        assert_eq!(
            rank_q(&[rat_row(&[1, 0]), rat_row(&[0, 1]), rat_row(&[1, 1])]),
            2
        );
        assert_eq!(rank_q(&[]), 0);
    }

    #[test]
    fn coordinates_recover_combination() {
        let b = vec![rat_row(&[1, 0, 1]), rat_row(&[0, 1, 1])];
        assert_eq!(
            coordinates_in(&b, &rat_row(&[2, -3, -1])),
            Some(rat_row(&[2, -3]))
        );
        assert_eq!(coordinates_in(&b, &rat_row(&[0, 0, 1])), None);
    }
}
