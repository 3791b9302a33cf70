use std::fmt;

use serde::Serialize;

use super::{AnomalousError, Result};
use crate::exactalg::{IntMatrix, QPoly, QPolyMatrix, Rat};

/// Integer exponent rows of an algebraic subgroup of the holonomy torus of
/// `X` (`copies = 1`) or `X x X` (`copies = 2`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubgroupSpec {
    n_cusps: usize,
    copies: usize,
    rows: IntMatrix,
}

impl SubgroupSpec {
    pub fn new(n_cusps: usize, copies: usize, rows: IntMatrix) -> Result<Self> {
        if copies != 1 && copies != 2 {
            return Err(AnomalousError::Copies(copies));
        }
        let expected = 2 * n_cusps * copies;
        if rows.cols() != expected {
            return Err(AnomalousError::Shape {
                expected,
                got: rows.cols(),
            });
        }
        let rank = rows.rank();
        if rank != rows.rows() {
            return Err(AnomalousError::RowsDependent {
                rank,
                rows: rows.rows(),
            });
        }
        Ok(SubgroupSpec {
            n_cusps,
            copies,
            rows,
        })
    }

    pub fn from_rows(n_cusps: usize, copies: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = 2 * n_cusps * copies;
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(AnomalousError::Shape {
                expected: cols,
                got: r.len(),
            });
        }
        Self::new(n_cusps, copies, IntMatrix::from_rows(cols, rows))
    }

    /// `M_i = L_i = 1`.
    pub fn cusp_trivial(n_cusps: usize, i: usize) -> Result<Self> {
        let mut a = vec![0; 2 * n_cusps];
        let mut b = vec![0; 2 * n_cusps];
        a[2 * i] = 1;
        b[2 * i + 1] = 1;
        Self::from_rows(n_cusps, 1, &[a, b])
    }

    pub fn n_cusps(&self) -> usize {
        self.n_cusps
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn rows(&self) -> &IntMatrix {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.rows()
    }

    /// Number of cusp variables `u_j` (and `u'_j`).
    pub fn n_vars(&self) -> usize {
        self.n_cusps * self.copies
    }

    pub(crate) fn rat_rows(&self) -> Vec<Vec<Rat>> {
        self.rows.to_rat_rows()
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, row) in self.rows.row_vecs().iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            let s: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", s.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum AnomalyVerdict {
    Isolated,
    Anomalous {
        jacobian_rank: usize,
        deficiency: usize,
    },
}

impl AnomalyVerdict {
    pub fn is_anomalous(&self) -> bool {
        matches!(self, AnomalyVerdict::Anomalous { .. })
    }
}

impl fmt::Display for AnomalyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnomalyVerdict::Isolated => write!(f, "isolated"),
            AnomalyVerdict::Anomalous {
                jacobian_rank,
                deficiency,
            } => {
                write!(
                    f,
                    "anomalous (jacobian rank {jacobian_rank}, deficiency {deficiency})"
                )
            }
        }
    }
}

/// Jacobian of the logarithmic equations at the complete structure, one
/// column per variable `u_1, ..., u_n[, u'_1, ..., u'_n]`. Primed columns
/// carry the same shape as the unprimed cusp of the same index.
pub fn jacobian_at_complete(spec: &SubgroupSpec) -> QPolyMatrix {
    let id: Vec<usize> = (0..spec.n_cusps).collect();
    jacobian_with_permutation(spec, &id).expect("identity is a permutation")
}

/// As [`jacobian_at_complete`], with primed column `j` carrying the shape of
/// cusp `sigma[j]`.
pub fn jacobian_with_permutation(spec: &SubgroupSpec, sigma: &[usize]) -> Result<QPolyMatrix> {
    let n = spec.n_cusps;
    let mut seen = vec![false; n];
    if sigma.len() != n
        || sigma
            .iter()
            .any(|&s| s >= n || std::mem::replace(&mut seen[s], true))
    {
        return Err(AnomalousError::Permutation(sigma.to_vec()));
    }
    let rows = spec.rat_rows();
    let shape = |col: usize| if col < n { col } else { sigma[col - n] };
    let grid = rows
        .iter()
        .map(|row| {
            (0..spec.n_vars())
                .map(|j| QPoly::affine(n, row[2 * j].clone(), row[2 * j + 1].clone(), shape(j)))
                .collect()
        })
        .collect();
    Ok(QPolyMatrix::from_rows(n, grid))
}

/// Isolated iff the Jacobian has the largest rank the row and variable counts
/// allow; otherwise the component through the complete structure has
/// positive dimension and the deficiency measures the drop.
pub fn anomaly_verdict(spec: &SubgroupSpec) -> AnomalyVerdict {
    let rank = jacobian_at_complete(spec).generic_rank();
    let full = spec.row_count().min(spec.n_vars());
    if rank == full {
        AnomalyVerdict::Isolated
    } else {
        AnomalyVerdict::Anomalous {
            jacobian_rank: rank,
            deficiency: full - rank,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn t(n: usize, i: usize) -> QPoly {
        QPoly::var(n, i)
    }

    fn c(n: usize, k: i64) -> QPoly {
        QPoly::constant(n, rat(k))
    }

    #[test]
    fn jacobian_of_first_cusp_trivial() {
        let spec = SubgroupSpec::cusp_trivial(2, 0).unwrap();
        let j = jacobian_at_complete(&spec);
        assert_eq!(
            j,
            QPolyMatrix::from_rows(2, vec![vec![c(2, 1), c(2, 0)], vec![t(2, 0), c(2, 0)]])
        );
    }

    #[test]
    fn jacobian_of_diagonal_rows() {
        let spec = SubgroupSpec::from_rows(2, 1, &[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]).unwrap();
        let j = jacobian_at_complete(&spec);
        assert_eq!(
            j,
            QPolyMatrix::from_rows(2, vec![vec![c(2, 1), c(2, 1)], vec![t(2, 0), t(2, 1)]])
        );
    }

    #[test]
    fn jacobian_of_product_diagonal() {
        let spec = SubgroupSpec::from_rows(1, 2, &[vec![1, 0, -1, 0], vec![0, 1, 0, -1]]).unwrap();
        let j = jacobian_at_complete(&spec);
        let minus_t = t(1, 0).neg();
        assert_eq!(
            j,
            QPolyMatrix::from_rows(1, vec![vec![c(1, 1), c(1, -1)], vec![t(1, 0), minus_t]])
        );
    }

    #[test]
    fn permutation_moves_primed_shapes() {
        let spec = SubgroupSpec::from_rows(2, 2, &[vec![0, 0, 0, 0, 0, 0, 0, 1]]).unwrap();
        let j = jacobian_with_permutation(&spec, &[1, 0]).unwrap();
        assert_eq!(j.get(0, 3), &t(2, 0));
        assert!(jacobian_with_permutation(&spec, &[0, 0]).is_err());
    }

    #[test]
    fn verdict_examples() {
        let h = SubgroupSpec::cusp_trivial(2, 0).unwrap();
        assert_eq!(
            anomaly_verdict(&h),
            AnomalyVerdict::Anomalous {
                jacobian_rank: 1,
                deficiency: 1
            }
        );
        let d = SubgroupSpec::from_rows(2, 1, &[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]).unwrap();
        assert_eq!(anomaly_verdict(&d), AnomalyVerdict::Isolated);
    }

    #[test]
    fn cusp_trivial_is_anomalous_for_every_cusp() {
        for n in 2..=4 {
            for i in 0..n {
                assert!(anomaly_verdict(&SubgroupSpec::cusp_trivial(n, i).unwrap()).is_anomalous());
            }
        }
    }

    #[test]
    fn rejects_dependent_rows_and_bad_shapes() {
        assert!(matches!(
            SubgroupSpec::from_rows(2, 1, &[vec![1, 1, 0, 0], vec![2, 2, 0, 0]]),
            Err(AnomalousError::RowsDependent { rank: 1, rows: 2 })
        ));
        assert!(SubgroupSpec::from_rows(2, 1, &[vec![1, 0, 0]]).is_err());
        assert!(SubgroupSpec::from_rows(1, 3, &[vec![1, 0, 0, 0, 0, 0]]).is_err());
    }
}
