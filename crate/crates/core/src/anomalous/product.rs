use serde::Serialize;

use super::{jacobian_at_complete, AnomalousError, Result, SubgroupSpec};
use crate::cusplemmas::{dehn_pair_verdict, tau_block_rank, CuspBlock, PairVerdict, TauMode};
use crate::exactalg::IntMatrix;

/// How the four rows of a two-cusp product spec pair the cusps.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Wiring {
    /// Rows on `{1, 1'}` and on `{2, 2'}`.
    Straight,
    /// Rows on `{1, 2'}` and on `{2, 1'}`.
    Cross,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum ProductClass {
    /// One block drops rank: the component is a curve inside the stated
    /// containment, and the pairs of that cusp are related.
    OneDimensional {
        cusp: usize,
        relation: PairVerdict,
        containment: String,
    },
    /// Both blocks drop rank.
    TwoDimensional {
        relations: [PairVerdict; 2],
    },
    Isolated,
}

// Column indices of (a_i, b_i) and (a'_i, b'_i) for two cusps.
const fn cols(cusp: usize, primed: usize) -> [usize; 4] {
    [2 * cusp, 2 * cusp + 1, 4 + 2 * primed, 4 + 2 * primed + 1]
}

fn support(rows: &IntMatrix, r: usize) -> Vec<usize> {
    (0..rows.cols())
        .filter(|&c| !num_traits::Zero::is_zero(rows.get(r, c)))
        .collect()
}

/// Split the four rows into two blocks whose supports lie in the given
/// column sets, if possible.
fn split(rows: &IntMatrix, first: [usize; 4], second: [usize; 4]) -> Option<[Vec<usize>; 2]> {
    let mut blocks = [Vec::new(), Vec::new()];
    for r in 0..rows.rows() {
        let s = support(rows, r);
        if s.iter().all(|c| first.contains(c)) && blocks[0].len() < 2 {
            blocks[0].push(r);
        } else if s.iter().all(|c| second.contains(c)) {
            blocks[1].push(r);
        } else {
            return None;
        }
    }
    (blocks[0].len() == 2 && blocks[1].len() == 2).then_some(blocks)
}

fn block(rows: &IntMatrix, idx: &[usize], c: [usize; 4], mode: TauMode) -> CuspBlock {
    let r = |k: usize| -> [i64; 4] {
        let row = rows.row(idx[k]);
        c.map(|j| i64::try_from(&row[j]).expect("small entries"))
    };
    CuspBlock::new([r(0), r(1)], mode)
}

fn containment(cusp: usize, relation: PairVerdict) -> String {
    let (i, o) = (cusp + 1, 2 - cusp);
    let rest = format!("M{o}=M'{o}=L{o}=L'{o}=1");
    match relation {
        PairVerdict::SamePair => format!("M{i}=M'{i}, L{i}=L'{i}, {rest}"),
        _ => format!("M{i}=M'{i}^-1, L{i}=L'{i}^-1, {rest}"),
    }
}

/// Classify the component through `(z0, z0')` of `(X x X) cap H` for a
/// two-cusp product spec with four rows grouped into two cusp blocks.
///
/// `pairs[i]` and `primed[i]` are the filling pairs of cusp `i` and `i'`.
/// Straight blocks are read with one shape; cross blocks mix the two shapes
/// and are always isolated. The block ranks are cross-checked against the
/// rank of the full Jacobian.
pub fn product_anomaly_classify(
    spec: &SubgroupSpec,
    pairs: [(i64, i64); 2],
    primed: [(i64, i64); 2],
) -> Result<(Wiring, ProductClass)> {
    if spec.copies() != 2 || spec.n_cusps() != 2 || spec.row_count() != 4 {
        return Err(AnomalousError::Unsupported(
            "a two-cusp product spec with four rows".into(),
        ));
    }
    let rows = spec.rows();
    let (wiring, layout) = if let Some(b) = split(rows, cols(0, 0), cols(1, 1)) {
        (
            Wiring::Straight,
            [
                (b[0].clone(), cols(0, 0), 0, 0),
                (b[1].clone(), cols(1, 1), 1, 1),
            ],
        )
    } else if let Some(b) = split(rows, cols(0, 1), cols(1, 0)) {
        (
            Wiring::Cross,
            [
                (b[0].clone(), cols(0, 1), 0, 1),
                (b[1].clone(), cols(1, 0), 1, 0),
            ],
        )
    } else {
        return Err(AnomalousError::Wiring(spec.to_string()));
    };
    let mode = match wiring {
        Wiring::Straight => TauMode::OneTau,
        Wiring::Cross => TauMode::TwoTau,
    };
    let mut verdicts = Vec::with_capacity(2);
    let mut rank = 0;
    for (idx, c, cusp, primed_cusp) in &layout {
        let blk = block(rows, idx, *c, mode);
        rank += tau_block_rank(&blk);
        verdicts.push(dehn_pair_verdict(&blk, pairs[*cusp], primed[*primed_cusp])?);
    }
    let full = jacobian_at_complete(spec).generic_rank();
    if full != rank {
        return Err(AnomalousError::Wiring(format!(
            "block ranks sum to {rank} but the Jacobian has rank {full}"
        )));
    }
    let dropped: Vec<usize> = (0..2)
        .filter(|&k| {
            matches!(
                verdicts[k],
                PairVerdict::SamePair | PairVerdict::NegatedPair
            )
        })
        .collect();
    let class = match (wiring, dropped.as_slice()) {
        (Wiring::Cross, _) => ProductClass::Isolated,
        (_, []) => return Err(AnomalousError::NotAnomalous),
        (_, [k]) => ProductClass::OneDimensional {
            cusp: *k,
            relation: verdicts[*k],
            containment: containment(*k, verdicts[*k]),
        },
        _ => ProductClass::TwoDimensional {
            relations: [verdicts[0], verdicts[1]],
        },
    };
    Ok((wiring, class))
}
