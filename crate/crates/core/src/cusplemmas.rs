//! Rank classification of 2x4 integer cusp blocks and the Dehn-pair verdicts
//! built on it.
//!
//! A block with rows `(a_i, b_i, c_i, d_i)` gives the shape matrix
//! `[[a1 + b1 t, c1 + d1 t], [a2 + b2 t, c2 + d2 t]]` (one shape) or the same
//! with `t1` on the left column and `t2` on the right (two shapes). Shapes are
//! formal transcendentals; every minor has degree at most two, so this agrees
//! with any non-quadratic shape (one-shape case) or shapes with `1, t1, t2,
//! t1 t2` independent (two-shape case).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::exactalg::{IntMatrix, QPoly, QPolyMatrix, Rat};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CuspLemmaError {
    #[error("block must be a 2x4 integer matrix, got {rows}x{cols}")]
    Shape { rows: usize, cols: usize },
    #[error("block has rational rank {rank}, expected 2")]
    RankPreconditionViolated { rank: usize },
    #[error("linear constraint fails on row {row}: -q*a + p*b - q'*c + p'*d = {value}")]
    ConstraintViolated { row: usize, value: BigInt },
    #[error("pair ({p}, {q}) is not coprime")]
    NonCoprimePair { p: i64, q: i64 },
    #[error("entry bound {bound} exceeds the sweep budget of {max}")]
    BudgetExceeded { bound: u32, max: u32 },
    #[error("rank lemma contradicted: {0}")]
    LemmaViolation(String),
}

type Result<T> = std::result::Result<T, CuspLemmaError>;

/// Which shape template a block uses.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum TauMode {
    OneTau,
    TwoTau,
}

impl fmt::Display for TauMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TauMode::OneTau => "one-tau",
            TauMode::TwoTau => "two-tau",
        })
    }
}

/// A 2x4 integer block with rows `(a_i, b_i, c_i, d_i)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CuspBlock {
    m: IntMatrix,
    mode: TauMode,
    rank: usize,
}

/// Outcome of the block classification.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BlockForm {
    /// `(c_i, d_i) = m (a_i, b_i)` on both rows, `m` nonzero.
    Proportional(Rat),
    /// Right column pair is zero.
    LeftOnly,
    /// Left column pair is zero.
    RightOnly,
    /// The shape matrix has full rank.
    NoForm,
}

impl BlockForm {
    pub fn tag(&self) -> &'static str {
        match self {
            BlockForm::Proportional(_) => "proportional",
            BlockForm::LeftOnly => "left-only",
            BlockForm::RightOnly => "right-only",
            BlockForm::NoForm => "no-form",
        }
    }
}

impl fmt::Display for BlockForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockForm::Proportional(m) => write!(f, "proportional({m})"),
            other => f.write_str(other.tag()),
        }
    }
}

/// Relation between two filling pairs forced by a rank-deficient block.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum PairVerdict {
    /// `(p, q) = (p', q')`.
    SamePair,
    /// `(p, q) = -(p', q')`.
    NegatedPair,
    /// Two-shape block: the shape matrix always has rank 2.
    Impossible,
    /// One-shape block whose shape matrix has rank 2; no relation is forced.
    FullRank,
}

impl CuspBlock {
    pub fn new(rows: [[i64; 4]; 2], mode: TauMode) -> Self {
        let m = IntMatrix::from_rows(4, &[rows[0].to_vec(), rows[1].to_vec()]);
        let rank = m.rank();
        CuspBlock { m, mode, rank }
    }

    pub fn from_matrix(m: IntMatrix, mode: TauMode) -> Result<Self> {
        if m.rows() != 2 || m.cols() != 4 {
            return Err(CuspLemmaError::Shape {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let rank = m.rank();
        Ok(CuspBlock { m, mode, rank })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn mode(&self) -> TauMode {
        self.mode
    }

    /// Rank of the integer block over the rationals.
    pub fn rank_q(&self) -> usize {
        self.rank
    }

    fn entry(&self, r: usize, c: usize) -> Rat {
        Rat::from_integer(self.m.get(r, c).clone())
    }

    /// The 2x2 shape matrix.
    pub fn tau_matrix(&self) -> QPolyMatrix {
        let (nvars, left, right) = match self.mode {
            TauMode::OneTau => (1, 0, 0),
            TauMode::TwoTau => (2, 0, 1),
        };
        let rows = (0..2)
            .map(|r| {
                vec![
                    QPoly::affine(nvars, self.entry(r, 0), self.entry(r, 1), left),
                    QPoly::affine(nvars, self.entry(r, 2), self.entry(r, 3), right),
                ]
            })
            .collect();
        QPolyMatrix::from_rows(nvars, rows)
    }

    fn require_rank_two(&self) -> Result<()> {
        if self.rank != 2 {
            return Err(CuspLemmaError::RankPreconditionViolated { rank: self.rank });
        }
        Ok(())
    }

    fn pair_is_zero(&self, first: usize) -> bool {
        (0..2).all(|r| self.m.get(r, first).is_zero() && self.m.get(r, first + 1).is_zero())
    }

    /// The ratio `m` with `(c_i, d_i) = m (a_i, b_i)` on both rows, if any.
    fn proportionality(&self) -> Option<Rat> {
        let (r0, c0) = (0..2)
            .flat_map(|r| (0..2).map(move |c| (r, c)))
            .find(|&(r, c)| !self.m.get(r, c).is_zero())?;
        let m = self.entry(r0, c0 + 2) / self.entry(r0, c0);
        let holds = (0..2).all(|r| (0..2).all(|c| self.entry(r, c + 2) == &m * self.entry(r, c)));
        (holds && !m.is_zero()).then_some(m)
    }
}

/// Generic rank of the block's shape matrix.
pub fn tau_block_rank(block: &CuspBlock) -> usize {
    block.tau_matrix().generic_rank()
}

/// Which of the listed forms the integer block has, read off its entries
/// alone. Two-shape blocks only admit the one-sided forms.
pub fn syntactic_form(block: &CuspBlock) -> BlockForm {
    if block.pair_is_zero(2) {
        BlockForm::LeftOnly
    } else if block.pair_is_zero(0) {
        BlockForm::RightOnly
    } else if block.mode == TauMode::OneTau {
        block
            .proportionality()
            .map_or(BlockForm::NoForm, BlockForm::Proportional)
    } else {
        BlockForm::NoForm
    }
}

/// Classify a rank-2 block: `NoForm` when the shape matrix has rank 2,
/// otherwise the form its entries must take.
pub fn classify_block(block: &CuspBlock) -> Result<BlockForm> {
    block.require_rank_two()?;
    if tau_block_rank(block) == 2 {
        return Ok(BlockForm::NoForm);
    }
    match syntactic_form(block) {
        BlockForm::NoForm => Err(CuspLemmaError::LemmaViolation(format!(
            "{} block {:?} has shape rank 1 but no listed form",
            block.mode,
            block.m.row_vecs()
        ))),
        form => Ok(form),
    }
}

fn check_coprime(p: i64, q: i64) -> Result<()> {
    if p.gcd(&q) != 1 {
        return Err(CuspLemmaError::NonCoprimePair { p, q });
    }
    Ok(())
}

/// Row-wise value of `-q a + p b - q' c + p' d`.
pub fn constraint_residuals(block: &CuspBlock, pq: (i64, i64), pq2: (i64, i64)) -> [BigInt; 2] {
    let (p, q) = (BigInt::from(pq.0), BigInt::from(pq.1));
    let (p2, q2) = (BigInt::from(pq2.0), BigInt::from(pq2.1));
    let m = &block.m;
    let row =
        |r: usize| -(&q * m.get(r, 0)) + &p * m.get(r, 1) - &q2 * m.get(r, 2) + &p2 * m.get(r, 3);
    [row(0), row(1)]
}

/// Relation between `(p, q)` and `(p', q')` forced by a block satisfying
/// `-q a_i + p b_i - q' c_i + p' d_i = 0` on both rows.
///
/// In the one-shape case a rank-1 shape matrix is proportional with ratio
/// `m`, and the constraints give `(p, q) = -m (p', q')`; coprimality forces
/// `m = -1` (same pair) or `m = 1` (negated pair).
pub fn dehn_pair_verdict(
    block: &CuspBlock,
    pq: (i64, i64),
    pq2: (i64, i64),
) -> Result<PairVerdict> {
    check_coprime(pq.0, pq.1)?;
    check_coprime(pq2.0, pq2.1)?;
    block.require_rank_two()?;
    for (row, value) in constraint_residuals(block, pq, pq2).into_iter().enumerate() {
        if !value.is_zero() {
            return Err(CuspLemmaError::ConstraintViolated { row, value });
        }
    }
    let violation = |what: &str| {
        Err(CuspLemmaError::LemmaViolation(format!(
            "{} block {:?} with pairs {pq:?}, {pq2:?}: {what}",
            block.mode,
            block.m.row_vecs()
        )))
    };
    match block.mode {
        TauMode::TwoTau => {
            if tau_block_rank(block) == 2 {
                Ok(PairVerdict::Impossible)
            } else {
                violation("two-shape block of shape rank 1 satisfies the constraints")
            }
        }
        TauMode::OneTau => match classify_block(block)? {
            BlockForm::NoForm => Ok(PairVerdict::FullRank),
            BlockForm::Proportional(m) => {
                let unit = m.to_integer().to_i64().filter(|_| m.is_integer());
                match unit {
                    Some(-1) if pq == pq2 => Ok(PairVerdict::SamePair),
                    Some(1) if pq == (-pq2.0, -pq2.1) => Ok(PairVerdict::NegatedPair),
                    _ => violation(&format!("ratio {m} does not relate the pairs")),
                }
            }
            form => violation(&format!("form {form} is incompatible with coprime pairs")),
        },
    }
}

/// Largest entry bound the exhaustive sweep accepts.
pub const SWEEP_MAX_BOUND: u32 = 3;

/// Counts from an exhaustive block sweep.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct SweepReport {
    pub entry_bound: u32,
    pub candidates: u64,
    pub rank_two: u64,
    pub proportional: u64,
    pub left_only: u64,
    pub right_only: u64,
    pub no_form: u64,
    pub violations: u64,
    /// Up to ten offending blocks, for diagnosis.
    pub examples: Vec<[[i64; 4]; 2]>,
}

impl SweepReport {
    fn merge(mut self, other: SweepReport) -> SweepReport {
        self.candidates += other.candidates;
        self.rank_two += other.rank_two;
        self.proportional += other.proportional;
        self.left_only += other.left_only;
        self.right_only += other.right_only;
        self.no_form += other.no_form;
        self.violations += other.violations;
        self.examples.extend(other.examples);
        self.examples.sort();
        self.examples.truncate(10);
        self
    }
}

/// Coefficients of `1, t, t^2` (one shape) or `1, t1, t2, t1 t2` (two
/// shapes) in the shape-matrix determinant, computed directly.
fn determinant_coefficients(rows: &[[i64; 4]; 2], mode: TauMode) -> Vec<i64> {
    let [[a1, b1, c1, d1], [a2, b2, c2, d2]] = *rows;
    match mode {
        TauMode::OneTau => vec![
            a1 * c2 - a2 * c1,
            a1 * d2 + b1 * c2 - a2 * d1 - b2 * c1,
            b1 * d2 - b2 * d1,
        ],
        TauMode::TwoTau => vec![
            a1 * c2 - a2 * c1,
            b1 * c2 - b2 * c1,
            a1 * d2 - a2 * d1,
            b1 * d2 - b2 * d1,
        ],
    }
}

fn small_rank_is_two(rows: &[[i64; 4]; 2]) -> bool {
    (0..4).any(|i| (i + 1..4).any(|j| rows[0][i] * rows[1][j] != rows[0][j] * rows[1][i]))
}

fn sweep_one(rows: [[i64; 4]; 2], mode: TauMode, report: &mut SweepReport) {
    report.candidates += 1;
    if !small_rank_is_two(&rows) {
        return;
    }
    report.rank_two += 1;
    let block = CuspBlock::new(rows, mode);
    let rank = tau_block_rank(&block);
    let syntactic = syntactic_form(&block);
    let det_vanishes = determinant_coefficients(&rows, mode)
        .iter()
        .all(|&c| c == 0);
    let ok = match classify_block(&block) {
        Ok(form) => {
            match &form {
                BlockForm::Proportional(_) => report.proportional += 1,
                BlockForm::LeftOnly => report.left_only += 1,
                BlockForm::RightOnly => report.right_only += 1,
                BlockForm::NoForm => report.no_form += 1,
            }
            let consistent =
                (rank == 1) == (form != BlockForm::NoForm) && (rank == 1) == det_vanishes;
            // The listed forms must have rank 1 and match the entries.
            let matches = if rank == 1 {
                form == syntactic
            } else {
                syntactic == BlockForm::NoForm
            };
            consistent && matches
        }
        Err(_) => false,
    };
    if !ok {
        report.violations += 1;
        if report.examples.len() < 10 {
            report.examples.push(rows);
        }
    }
}

/// Enumerate every 2x4 integer block with entries in `[-bound, bound]`, and
/// check that the shape rank is 1 exactly for the listed forms. Each block
/// is checked three ways: the classifier, the entry pattern, and the
/// determinant coefficients expanded by hand.
pub fn exhaustive_lemma_sweep(entry_bound: u32, mode: TauMode) -> Result<SweepReport> {
    if entry_bound > SWEEP_MAX_BOUND {
        return Err(CuspLemmaError::BudgetExceeded {
            bound: entry_bound,
            max: SWEEP_MAX_BOUND,
        });
    }
    let b = entry_bound as i64;
    let width = (2 * b + 1) as u64;
    let total = width.pow(8);
    let outer = width.pow(2);
    let inner = total / outer;
    let digit = |mut code: u64| {
        let mut e = [0i64; 8];
        for slot in e.iter_mut() {
            *slot = (code % width) as i64 - b;
            code /= width;
        }
        e
    };
    let report = (0..outer)
        .into_par_iter()
        .map(|hi| {
            let mut rep = SweepReport {
                entry_bound,
                ..Default::default()
            };
            for lo in 0..inner {
                let e = digit(hi * inner + lo);
                sweep_one(
                    [[e[0], e[1], e[2], e[3]], [e[4], e[5], e[6], e[7]]],
                    mode,
                    &mut rep,
                );
            }
            rep
        })
        .reduce(
            || SweepReport {
                entry_bound,
                ..Default::default()
            },
            SweepReport::merge,
        );
    Ok(report)
}

/// Largest `|p| + |q|` the constrained sweep accepts.
pub const PAIR_SWEEP_MAX_SIZE: i64 = 12;

/// Counts from a seeded sweep over blocks satisfying the pair constraints.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct PairSweepReport {
    pub seed: u64,
    pub size_bound: i64,
    /// Ordered pair combinations `((p, q), (p', q'))`, each sampled at least
    /// once when `samples` is at least this large.
    pub combinations: u64,
    pub samples: u64,
    pub rank_two: u64,
    pub one_tau_rank_one: u64,
    pub same_pair: u64,
    pub negated_pair: u64,
    pub two_tau_checked: u64,
    pub violations: u64,
    pub examples: Vec<String>,
}

impl PairSweepReport {
    fn merge(mut self, other: PairSweepReport) -> PairSweepReport {
        self.samples += other.samples;
        self.rank_two += other.rank_two;
        self.one_tau_rank_one += other.one_tau_rank_one;
        self.same_pair += other.same_pair;
        self.negated_pair += other.negated_pair;
        self.two_tau_checked += other.two_tau_checked;
        self.violations += other.violations;
        self.examples.extend(other.examples);
        self.examples.sort();
        self.examples.truncate(10);
        self
    }
}

/// Coprime `(p, q)` with `1 <= |p| + |q| <= size`, in lexicographic order.
pub fn coprime_pairs(size: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for p in -size..=size {
        for q in -size..=size {
            if p.abs() + q.abs() <= size && p.gcd(&q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

fn constrained_block<R: Rng>(
    rng: &mut R,
    pq: (i64, i64),
    pq2: (i64, i64),
    structured: bool,
) -> [[i64; 4]; 2] {
    let sign = if pq == pq2 {
        Some(-1)
    } else if pq == (-pq2.0, -pq2.1) {
        Some(1)
    } else {
        None
    };
    let mut rows = [[0i64; 4]; 2];
    match sign {
        // (a, b, m a, m b) meets the constraint exactly when (p, q) = -m (p', q').
        Some(m) if structured => {
            for row in rows.iter_mut() {
                let (a, b) = (rng.random_range(-3..=3), rng.random_range(-3..=3));
                *row = [a, b, m * a, m * b];
            }
        }
        _ => {
            let w = IntMatrix::from_rows(4, &[vec![-pq.1, pq.0, -pq2.1, pq2.0]]);
            let kernel = crate::exactalg::kernel_basis(&w);
            for row in rows.iter_mut() {
                for k in &kernel {
                    let c = rng.random_range(-2i64..=2);
                    for (x, y) in row.iter_mut().zip(k) {
                        *x += c * y.to_i64().expect("small kernel");
                    }
                }
            }
        }
    }
    rows
}

fn pair_sweep_one<R: Rng>(
    rng: &mut R,
    pq: (i64, i64),
    pq2: (i64, i64),
    report: &mut PairSweepReport,
) {
    report.samples += 1;
    let structured = rng.random_bool(0.5);
    let rows = constrained_block(rng, pq, pq2, structured);
    if !small_rank_is_two(&rows) {
        return;
    }
    report.rank_two += 1;
    let mut fail = |what: String| {
        report.violations += 1;
        if report.examples.len() < 10 {
            report
                .examples
                .push(format!("{rows:?} {pq:?} {pq2:?}: {what}"));
        }
    };
    let one = CuspBlock::new(rows, TauMode::OneTau);
    let verdict = dehn_pair_verdict(&one, pq, pq2);
    if tau_block_rank(&one) == 1 {
        report.one_tau_rank_one += 1;
        let related = pq == pq2 || pq == (-pq2.0, -pq2.1);
        match verdict {
            Ok(PairVerdict::SamePair) if related => report.same_pair += 1,
            Ok(PairVerdict::NegatedPair) if related => report.negated_pair += 1,
            other => fail(format!("one-shape rank 1 gave {other:?}")),
        }
    } else if verdict != Ok(PairVerdict::FullRank) {
        fail(format!("one-shape rank 2 gave {verdict:?}"));
    }
    if [pq.0, pq.1, pq2.0, pq2.1].iter().all(|&x| x != 0) {
        report.two_tau_checked += 1;
        let two = CuspBlock::new(rows, TauMode::TwoTau);
        if tau_block_rank(&two) != 2
            || dehn_pair_verdict(&two, pq, pq2) != Ok(PairVerdict::Impossible)
        {
            fail("two-shape block of rank 1".into());
        }
    }
}

/// Seeded sweep over rank-2 blocks satisfying both pair constraints, for
/// coprime pairs with `|p| + |q|, |p'| + |q'| <= size_bound`.
///
/// Sample `i` uses combination `i mod combinations`. Its rows are random
/// combinations of an integer kernel basis of `(-q, p, -q', p')`, or, for half
/// the samples on related pairs, proportional rows `(a, b, m a, m b)` so that
/// shape-rank-1 blocks actually occur. One-shape rank-1 blocks must give
/// `(p, q) = +-(p', q')`; two-shape blocks with no zero pair entry must have
/// rank 2.
pub fn constrained_pair_sweep(seed: u64, samples: u64, size_bound: i64) -> Result<PairSweepReport> {
    if !(1..=PAIR_SWEEP_MAX_SIZE).contains(&size_bound) {
        return Err(CuspLemmaError::BudgetExceeded {
            bound: size_bound.max(0) as u32,
            max: PAIR_SWEEP_MAX_SIZE as u32,
        });
    }
    let pairs = coprime_pairs(size_bound);
    let combos = (pairs.len() * pairs.len()) as u64;
    let blank = || PairSweepReport {
        seed,
        size_bound,
        combinations: combos,
        ..Default::default()
    };
    let report = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let c = (i % combos) as usize;
            let mut rep = blank();
            pair_sweep_one(
                &mut rng,
                pairs[c / pairs.len()],
                pairs[c % pairs.len()],
                &mut rep,
            );
            rep
        })
        .reduce(blank, PairSweepReport::merge);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn one(rows: [[i64; 4]; 2]) -> CuspBlock {
        CuspBlock::new(rows, TauMode::OneTau)
    }

    fn two(rows: [[i64; 4]; 2]) -> CuspBlock {
        CuspBlock::new(rows, TauMode::TwoTau)
    }

    #[test]
    fn shape_ranks() {
        assert_eq!(tau_block_rank(&one([[1, 2, 1, 2], [3, 4, 3, 4]])), 1);
        assert_eq!(tau_block_rank(&one([[1, 0, 0, 1], [0, 1, 1, 0]])), 2);
        assert_eq!(tau_block_rank(&two([[1, 0, 0, 0], [0, 1, 0, 0]])), 1);
    }

    #[test]
    fn classifications() {
        assert_eq!(
            classify_block(&one([[1, 2, 2, 4], [0, 1, 0, 2]])).unwrap(),
            BlockForm::Proportional(rat(2))
        );
        assert_eq!(
            classify_block(&one([[0, 0, 1, 0], [0, 0, 0, 1]])).unwrap(),
            BlockForm::RightOnly
        );
        assert_eq!(
            classify_block(&two([[1, 0, 1, 0], [0, 1, 0, 1]])).unwrap(),
            BlockForm::NoForm
        );
        assert_eq!(
            classify_block(&one([[1, 0, 0, 0], [0, 1, 0, 0]])).unwrap(),
            BlockForm::LeftOnly
        );
    }

    #[test]
    fn rank_deficient_blocks_are_rejected() {
        let err = classify_block(&one([[1, 2, 3, 4], [2, 4, 6, 8]])).unwrap_err();
        assert!(matches!(
            err,
            CuspLemmaError::RankPreconditionViolated { rank: 1 }
        ));
    }

    #[test]
    fn pair_verdicts() {
        let b = one([[1, 0, 1, 0], [0, 1, 0, 1]]);
        assert_eq!(
            dehn_pair_verdict(&b, (2, 3), (-2, -3)).unwrap(),
            PairVerdict::NegatedPair
        );
        let b = one([[1, 0, -1, 0], [0, 1, 0, -1]]);
        assert_eq!(
            dehn_pair_verdict(&b, (5, 7), (5, 7)).unwrap(),
            PairVerdict::SamePair
        );
        let b = two([[1, 0, 1, 0], [0, 1, 0, 1]]);
        assert_eq!(
            dehn_pair_verdict(&b, (2, 3), (-2, -3)).unwrap(),
            PairVerdict::Impossible
        );
    }

    #[test]
    fn pair_verdict_errors() {
        let b = one([[1, 0, 1, 0], [0, 1, 0, 1]]);
        assert!(matches!(
            dehn_pair_verdict(&b, (2, 3), (2, 3)),
            Err(CuspLemmaError::ConstraintViolated { .. })
        ));
        assert!(matches!(
            dehn_pair_verdict(&b, (2, 4), (-2, -4)),
            Err(CuspLemmaError::NonCoprimePair { p: 2, q: 4 })
        ));
    }

    #[test]
    fn full_rank_one_shape_block() {
        // -q a + p b - q' c + p' d with rows (1,0,0,1),(0,1,1,0): -q + p' = 0, p - q' = 0.
        let b = one([[1, 0, 0, 1], [0, 1, 1, 0]]);
        assert_eq!(
            dehn_pair_verdict(&b, (2, 3), (3, 2)).unwrap(),
            PairVerdict::FullRank
        );
    }

    #[test]
    fn small_sweeps_are_clean() {
        let r = exhaustive_lemma_sweep(1, TauMode::OneTau).unwrap();
        assert_eq!(r.candidates, 6561);
        assert_eq!(r.violations, 0);
        assert_eq!(r.left_only, r.right_only);
        assert_eq!(
            r.rank_two,
            r.proportional + r.left_only + r.right_only + r.no_form
        );
        let r = exhaustive_lemma_sweep(1, TauMode::TwoTau).unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.proportional, 0);
    }

    #[test]
    fn constrained_pairs_small() {
        assert_eq!(coprime_pairs(1).len(), 4);
        assert_eq!(coprime_pairs(8).len(), 88);
        let r = constrained_pair_sweep(3, 2000, 4).unwrap();
        assert_eq!(r.violations, 0, "{:?}", r.examples);
        assert!(r.same_pair > 0 && r.negated_pair > 0 && r.two_tau_checked > 0);
        assert_eq!(r, constrained_pair_sweep(3, 2000, 4).unwrap());
    }

    #[test]
    fn sweep_budget() {
        assert!(matches!(
            exhaustive_lemma_sweep(4, TauMode::OneTau),
            Err(CuspLemmaError::BudgetExceeded { .. })
        ));
    }
}
