use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::{anomaly_verdict, AnomalousError, AnomalyVerdict, Result, SubgroupSpec};
use crate::exactalg::{QPoly, QPolyMatrix, Rat};
use crate::interchange::{all_transversals_dependent, find_deficient_subset, PairedVectorFamily};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum CascadeOutcome {
    /// The component through the complete structure lies in `M_i = L_i = 1`.
    Cusp(usize),
    Isolated,
}

impl fmt::Display for CascadeOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CascadeOutcome::Cusp(i) => write!(f, "cusp {}", i + 1),
            CascadeOutcome::Isolated => write!(f, "isolated"),
        }
    }
}

fn exhausted(msg: String) -> AnomalousError {
    AnomalousError::CascadeExhausted(msg)
}

/// Jacobian of `rows` restricted to the cusps in `cusps`.
fn jac(n: usize, rows: &[Vec<Rat>], cusps: &[usize]) -> QPolyMatrix {
    let grid = rows
        .iter()
        .map(|r| {
            cusps
                .iter()
                .map(|&j| QPoly::affine(n, r[2 * j].clone(), r[2 * j + 1].clone(), j))
                .collect()
        })
        .collect();
    QPolyMatrix::from_rows(n, grid)
}

/// Column pairs `(a_j, b_j)` of `rows` for the cusps in `cusps`.
fn pair_family(rows: &[Vec<Rat>], cusps: &[usize]) -> Result<PairedVectorFamily> {
    let pairs = cusps
        .iter()
        .map(|&j| {
            let a = rows.iter().map(|r| r[2 * j].clone()).collect();
            let b = rows.iter().map(|r| r[2 * j + 1].clone()).collect();
            (a, b)
        })
        .collect();
    Ok(PairedVectorFamily::new(pairs)?)
}

/// Rational row echelon form pivoting only on the columns of `cusps`. Pivot
/// rows come first; the remaining rows vanish on those columns. Returns the
/// pivot count.
fn echelon_on(rows: &mut [Vec<Rat>], cusps: &[usize]) -> usize {
    let mut r = 0;
    for &j in cusps {
        for col in [2 * j, 2 * j + 1] {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let piv = rows[r][col].clone();
            for i in 0..rows.len() {
                if i != r && !rows[i][col].is_zero() {
                    let f = &rows[i][col] / &piv;
                    let (pr, ir) = if i < r {
                        let (a, b) = rows.split_at_mut(r);
                        (&b[0], &mut a[i])
                    } else {
                        let (a, b) = rows.split_at_mut(i);
                        (&a[r], &mut b[0])
                    };
                    for (x, y) in ir.iter_mut().zip(pr.iter()) {
                        *x -= &f * y;
                    }
                }
            }
            r += 1;
        }
    }
    r
}

/// One level of the recursion: `rows` vanish outside the cusps in `cusps`
/// and their Jacobian on `cusps` is rank deficient.
fn descend(n: usize, mut rows: Vec<Vec<Rat>>, cusps: Vec<usize>) -> Result<usize> {
    let rk = jac(n, &rows, &cusps).generic_rank();
    if rk == cusps.len() {
        // Every u_j with j in cusps vanishes on the component.
        return cusps
            .iter()
            .copied()
            .max()
            .ok_or_else(|| exhausted("no cusps left".into()));
    }
    if rk == rows.len() {
        return Err(exhausted(format!(
            "rows have full rank {rk} on cusps {cusps:?}"
        )));
    }
    rows.truncate(cusps.len());
    let t: Vec<usize> = cusps[..rows.len()].to_vec();
    let fam = pair_family(&rows, &t)?;
    if !all_transversals_dependent(&fam)? {
        return Err(exhausted(format!(
            "an independent transversal exists on cusps {t:?}"
        )));
    }
    let mut s: Vec<usize> = find_deficient_subset(&fam)?
        .into_iter()
        .map(|k| t[k])
        .collect();
    loop {
        let mut work = rows.clone();
        let r = echelon_on(&mut work, &s);
        let top = &work[..r];
        if jac(n, top, &s).generic_rank() == r {
            let rest: Vec<usize> = cusps.iter().copied().filter(|j| !s.contains(j)).collect();
            return descend(n, work[r..].to_vec(), rest);
        }
        // The top rows are themselves deficient on the first r cusps of S.
        let t2: Vec<usize> = s[..r].to_vec();
        let fam2 = pair_family(top, &t2)?;
        if !all_transversals_dependent(&fam2)? {
            return Err(exhausted(format!(
                "an independent transversal exists on cusps {t2:?}"
            )));
        }
        let s2: Vec<usize> = find_deficient_subset(&fam2)?
            .into_iter()
            .map(|k| t2[k])
            .collect();
        if s2.len() >= s.len() {
            return Err(exhausted(format!(
                "deficient subset did not shrink from {s:?}"
            )));
        }
        s = s2;
    }
}

/// For an anomalous single-copy spec, a cusp `i` such that the component
/// through the complete structure lies in `M_i = L_i = 1`.
///
/// Repeatedly extracts a deficient set of cusps `S`, eliminates so that the
/// rows split into a block on `S` of full Jacobian rank and a remainder
/// vanishing on `S`, and recurses on the remainder with the cusps of `S`
/// removed. More than `n` rows are cut to the first `n`.
pub fn containment_cascade(spec: &SubgroupSpec) -> Result<CascadeOutcome> {
    if spec.copies() != 1 {
        return Err(AnomalousError::Unsupported("a single-copy spec".into()));
    }
    if anomaly_verdict(spec) == AnomalyVerdict::Isolated {
        return Ok(CascadeOutcome::Isolated);
    }
    let n = spec.n_cusps();
    let mut rows = spec.rat_rows();
    rows.truncate(n);
    descend(n, rows, (0..n).collect()).map(CascadeOutcome::Cusp)
}
