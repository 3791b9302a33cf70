//! Paired vector families `(v_i, w_i)` in `Q^n`, interchangeable bases, and
//! constructive extraction of a deficient index subset.
//!
//! Given `n` pairs such that every transversal `u_i in {v_i, w_i}` is
//! linearly dependent, there is a proper index subset `S` whose pairs span a
//! space of dimension at most `|S|`. The construction picks a maximum
//! independent partial transversal `U`, a maximum family `U'` of counter
//! vectors keeping `U + U'` independent, and then grows blocks `V_1, V_2, ...`
//! of `U` through nonzero expansion coefficients until the growth stops.
//!
//! Indices are 0-based throughout this module.

use num_traits::Zero;
use rand::Rng;

use crate::exactalg::{coordinates_in, rank_q, rat_row, Rat};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InterchangeError {
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("family size {n} exceeds the budget of {max}")]
    BudgetExceeded { n: usize, max: usize },
    #[error("an independent transversal exists: {0:?}")]
    HypothesisViolated(Vec<Choice>),
    #[error("a single pair has no proper nonempty index subset")]
    SingletonFamily,
    #[error("candidate is not in the span of the basis")]
    NotInSpan,
    #[error("basis vectors are linearly dependent")]
    NotABasis,
    #[error("index {index} out of range for {len} vectors")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("construction invariant failed: {0}")]
    Internal(String),
}

type Result<T> = std::result::Result<T, InterchangeError>;

/// Which member of a pair a transversal picks.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Choice {
    V,
    W,
}

impl Choice {
    pub fn counter(self) -> Choice {
        match self {
            Choice::V => Choice::W,
            Choice::W => Choice::V,
        }
    }
}

/// The pairs `(v_i, w_i)`, `i = 0..n`, all vectors of length `n`.
/// Zero vectors are allowed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairedVectorFamily {
    n: usize,
    pairs: Vec<(Vec<Rat>, Vec<Rat>)>,
}

impl PairedVectorFamily {
    pub fn new(pairs: Vec<(Vec<Rat>, Vec<Rat>)>) -> Result<Self> {
        let n = pairs.len();
        for (v, w) in &pairs {
            for x in [v, w] {
                if x.len() != n {
                    return Err(InterchangeError::DimensionMismatch {
                        expected: n,
                        got: x.len(),
                    });
                }
            }
        }
        Ok(PairedVectorFamily { n, pairs })
    }

    pub fn from_i64(pairs: &[(Vec<i64>, Vec<i64>)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(v, w)| (rat_row(v), rat_row(w)))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(Vec<Rat>, Vec<Rat>)] {
        &self.pairs
    }

    pub fn pick(&self, i: usize, c: Choice) -> &[Rat] {
        match c {
            Choice::V => &self.pairs[i].0,
            Choice::W => &self.pairs[i].1,
        }
    }

    /// All vectors `v_i, w_i` for `i` in `idx`.
    pub fn pair_vectors(&self, idx: &[usize]) -> Vec<Vec<Rat>> {
        idx.iter()
            .flat_map(|&i| [self.pairs[i].0.clone(), self.pairs[i].1.clone()])
            .collect()
    }

    /// Dimension of the span of the pairs indexed by `idx`.
    pub fn span_dim(&self, idx: &[usize]) -> usize {
        rank_q(&self.pair_vectors(idx))
    }
}

/// Incremental row echelon basis for independence tests.
#[derive(Clone, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Rat>)>,
}

impl Echelon {
    fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut x = v.to_vec();
        for (p, row) in &self.rows {
            if !x[*p].is_zero() {
                let f = x[*p].clone();
                for (xj, rj) in x.iter_mut().zip(row) {
                    if !rj.is_zero() {
                        *xj -= rj * &f;
                    }
                }
            }
        }
        x
    }

    /// Insert `v` if it is independent of the current rows.
    fn insert(&mut self, v: &[Rat]) -> bool {
        let mut x = self.reduce(v);
        let Some(p) = x.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = Rat::from_integer(1.into()) / &x[p];
        for c in x.iter_mut() {
            *c *= &inv;
        }
        self.rows.push((p, x));
        true
    }
}

/// Largest `n` for exhaustive transversal enumeration.
pub const TRANSVERSAL_MAX_N: usize = 20;
/// Largest `n` for the constructive extraction.
pub const DEFICIENT_MAX_N: usize = 12;
/// Largest `n` for the brute-force subset oracle.
pub const BRUTE_FORCE_MAX_N: usize = 8;

fn budget(n: usize, max: usize) -> Result<()> {
    if n > max {
        return Err(InterchangeError::BudgetExceeded { n, max });
    }
    Ok(())
}

/// A partial transversal as (index, choice) pairs in increasing index order.
pub type Transversal = Vec<(usize, Choice)>;

/// An independent full transversal, if one exists.
fn independent_transversal(fam: &PairedVectorFamily) -> Option<Vec<Choice>> {
    fn go(fam: &PairedVectorFamily, i: usize, ech: &Echelon, acc: &mut Vec<Choice>) -> bool {
        if i == fam.n {
            return true;
        }
        for c in [Choice::V, Choice::W] {
            let mut e = ech.clone();
            if e.insert(fam.pick(i, c)) {
                acc.push(c);
                if go(fam, i + 1, &e, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::new();
    go(fam, 0, &Echelon::default(), &mut acc).then_some(acc)
}

/// True iff every full transversal `(u_0, ..., u_{n-1})` is dependent.
pub fn all_transversals_dependent(fam: &PairedVectorFamily) -> Result<bool> {
    budget(fam.n, TRANSVERSAL_MAX_N)?;
    Ok(independent_transversal(fam).is_none())
}

/// True iff replacing `basis[index]` by `candidate` leaves a basis of the
/// same span, i.e. the expansion coefficient of `candidate` on
/// `basis[index]` is nonzero.
pub fn is_interchangeable(basis: &[Vec<Rat>], index: usize, candidate: &[Rat]) -> Result<bool> {
    if index >= basis.len() {
        return Err(InterchangeError::IndexOutOfRange {
            index,
            len: basis.len(),
        });
    }
    for b in basis {
        if b.len() != candidate.len() {
            return Err(InterchangeError::DimensionMismatch {
                expected: candidate.len(),
                got: b.len(),
            });
        }
    }
    if rank_q(basis) != basis.len() {
        return Err(InterchangeError::NotABasis);
    }
    let coords = coordinates_in(basis, candidate).ok_or(InterchangeError::NotInSpan)?;
    Ok(!coords[index].is_zero())
}

/// Replace, level by level, one vector of each block of a nested basis.
///
/// `levels[i]` extends the basis of the previous level; `picks[i] = (j,
/// x)` replaces `levels[i][j]` by `x`, which must lie in the span of levels
/// `0..=i` and be interchangeable with `levels[i][j]` there. Returns the
/// batch-replaced basis of the whole span.
pub fn chain_replace(
    levels: &[Vec<Vec<Rat>>],
    picks: &[(usize, Vec<Rat>)],
) -> Result<Vec<Vec<Rat>>> {
    if levels.len() != picks.len() {
        return Err(InterchangeError::Internal(
            "one pick per level required".into(),
        ));
    }
    let mut prefix: Vec<Vec<Rat>> = Vec::new();
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for (level, (j, x)) in levels.iter().zip(picks) {
        let offset = prefix.len();
        prefix.extend(level.iter().cloned());
        if !is_interchangeable(&prefix, offset + j, x)? {
            return Err(InterchangeError::Internal(format!(
                "pick {j} is not interchangeable at its level"
            )));
        }
        for (k, v) in level.iter().enumerate() {
            out.push(if k == *j { x.clone() } else { v.clone() });
        }
    }
    Ok(out)
}

/// How the maximum independent partial transversal is searched.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TransversalSearch {
    /// Exhaustive search; ties go to the lexicographically smallest index
    /// set, then to `v` over `w`.
    Exhaustive,
    /// Greedy scan in index order preferring `v`. Not guaranteed maximum,
    /// so the construction may fail its internal checks.
    Greedy,
}

fn tie_key(t: &Transversal) -> (Vec<usize>, Vec<Choice>) {
    (
        t.iter().map(|p| p.0).collect(),
        t.iter().map(|p| p.1).collect(),
    )
}

/// Maximum-cardinality independent partial transversal.
pub fn max_partial_transversal(fam: &PairedVectorFamily, search: TransversalSearch) -> Transversal {
    match search {
        TransversalSearch::Greedy => {
            let mut ech = Echelon::default();
            let mut t = Vec::new();
            for i in 0..fam.n {
                for c in [Choice::V, Choice::W] {
                    if ech.insert(fam.pick(i, c)) {
                        t.push((i, c));
                        break;
                    }
                }
            }
            t
        }
        TransversalSearch::Exhaustive => {
            let mut best: Option<Transversal> = None;
            let mut cur = Vec::new();
            max_transversal_dfs(fam, 0, &Echelon::default(), &mut cur, &mut best);
            best.unwrap_or_default()
        }
    }
}

fn max_transversal_dfs(
    fam: &PairedVectorFamily,
    i: usize,
    ech: &Echelon,
    cur: &mut Transversal,
    best: &mut Option<Transversal>,
) {
    let best_len = best.as_ref().map_or(0, Vec::len);
    if best.is_some() && cur.len() + (fam.n - i) < best_len {
        return;
    }
    if i == fam.n {
        let better = match best {
            None => true,
            Some(b) => cur.len() > b.len() || (cur.len() == b.len() && tie_key(cur) < tie_key(b)),
        };
        if better {
            *best = Some(cur.clone());
        }
        return;
    }
    for c in [Choice::V, Choice::W] {
        let mut e = ech.clone();
        if e.insert(fam.pick(i, c)) {
            cur.push((i, c));
            max_transversal_dfs(fam, i + 1, &e, cur, best);
            cur.pop();
        }
    }
    max_transversal_dfs(fam, i + 1, ech, cur, best);
}

/// Maximum set of indices of `u` whose counter vectors keep `u` plus the
/// counters independent; ties go to the lexicographically smallest set.
pub fn max_counter_set(fam: &PairedVectorFamily, u: &Transversal) -> Vec<usize> {
    let mut base = Echelon::default();
    for &(i, c) in u {
        let fresh = base.insert(fam.pick(i, c));
        debug_assert!(fresh, "transversal must be independent");
    }
    fn go(
        fam: &PairedVectorFamily,
        u: &Transversal,
        k: usize,
        ech: &Echelon,
        cur: &mut Vec<usize>,
        best: &mut Option<Vec<usize>>,
    ) {
        if let Some(b) = best {
            if cur.len() + (u.len() - k) < b.len() {
                return;
            }
        }
        if k == u.len() {
            let better = match best {
                None => true,
                Some(b) => cur.len() > b.len() || (cur.len() == b.len() && *cur < *b),
            };
            if better {
                *best = Some(cur.clone());
            }
            return;
        }
        let (i, c) = u[k];
        let mut e = ech.clone();
        if e.insert(fam.pick(i, c.counter())) {
            cur.push(i);
            go(fam, u, k + 1, &e, cur, best);
            cur.pop();
        }
        go(fam, u, k + 1, ech, cur, best);
    }
    let mut best = None;
    go(fam, u, 0, &base, &mut Vec::new(), &mut best);
    best.unwrap_or_default()
}

/// Trace of one run of the construction, for reporting and tests.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CascadeTrace {
    pub transversal: Transversal,
    pub counter_set: Vec<usize>,
    /// The successive blocks `V_1, V_2, ...` as index lists.
    pub blocks: Vec<Vec<usize>>,
    pub subset: Vec<usize>,
}

fn internal(msg: String) -> InterchangeError {
    InterchangeError::Internal(msg)
}

/// The construction from the existence proof, with no shortcuts.
pub fn cascade_deficient_subset(
    fam: &PairedVectorFamily,
    search: TransversalSearch,
) -> Result<CascadeTrace> {
    let n = fam.n;
    budget(n, DEFICIENT_MAX_N)?;
    if n == 1 {
        return Err(InterchangeError::SingletonFamily);
    }
    if let Some(t) = independent_transversal(fam) {
        return Err(InterchangeError::HypothesisViolated(t));
    }
    let u = max_partial_transversal(fam, search);
    let in_u: Vec<Option<Choice>> = {
        let mut m = vec![None; n];
        for &(i, c) in &u {
            m[i] = Some(c);
        }
        m
    };
    let counter = max_counter_set(fam, &u);
    let outside: Vec<usize> = (0..n).filter(|&i| in_u[i].is_none()).collect();

    let finish = |blocks: Vec<Vec<usize>>, subset: Vec<usize>| -> Result<CascadeTrace> {
        let dim = fam.span_dim(&subset);
        if subset.is_empty() || subset.len() >= n || dim > subset.len() {
            return Err(internal(format!(
                "subset {subset:?} has span dimension {dim}"
            )));
        }
        Ok(CascadeTrace {
            transversal: u.clone(),
            counter_set: counter.clone(),
            blocks,
            subset,
        })
    };

    if counter.len() == u.len() {
        // Every pair outside U is zero.
        if outside.iter().any(|&i| fam.span_dim(&[i]) != 0) {
            return Err(internal(
                "a pair outside U is nonzero although |U'| = |U|".into(),
            ));
        }
        let subset = if u.is_empty() { vec![0] } else { outside };
        return finish(Vec::new(), subset);
    }

    // Basis of span V_{H\K}: the chosen vectors of U off the counter set.
    let hk: Vec<usize> = u
        .iter()
        .map(|p| p.0)
        .filter(|i| !counter.contains(i))
        .collect();
    let basis: Vec<Vec<Rat>> = hk
        .iter()
        .map(|&i| fam.pick(i, in_u[i].unwrap()).to_vec())
        .collect();
    let expand = |x: &[Rat]| -> Result<Vec<Rat>> {
        coordinates_in(&basis, x).ok_or_else(|| internal("vector outside span V_{H\\K}".into()))
    };
    let touched = |vectors: &[Vec<Rat>], allowed: &[bool]| -> Result<Vec<usize>> {
        let mut hit = vec![false; hk.len()];
        for x in vectors {
            for (j, a) in expand(x)?.iter().enumerate() {
                if !a.is_zero() && allowed[j] {
                    hit[j] = true;
                }
            }
        }
        Ok((0..hk.len()).filter(|&j| hit[j]).collect())
    };

    let all_allowed = vec![true; hk.len()];
    let first = touched(&fam.pair_vectors(&outside), &all_allowed)?;
    if first.is_empty() {
        return finish(Vec::new(), outside);
    }
    let mut used = vec![false; hk.len()];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut current = first;
    loop {
        for &j in &current {
            used[j] = true;
        }
        blocks.push(current.iter().map(|&j| hk[j]).collect());
        let counters: Vec<Vec<Rat>> = current
            .iter()
            .map(|&j| fam.pick(hk[j], in_u[hk[j]].unwrap().counter()).to_vec())
            .collect();
        let free: Vec<bool> = used.iter().map(|u| !u).collect();
        let next = touched(&counters, &free)?;
        if next.is_empty() {
            break;
        }
        current = next;
    }
    let mut subset: Vec<usize> = blocks.iter().flatten().copied().collect();
    subset.sort_unstable();
    finish(blocks, subset)
}

/// A proper index subset `S` with `dim span{v_i, w_i : i in S} <= |S|`.
///
/// A single pair spanning at most one dimension is returned directly, as in
/// the zero-pair remark; otherwise the full construction runs. The result is
/// verified by an exact rank computation.
pub fn find_deficient_subset(fam: &PairedVectorFamily) -> Result<Vec<usize>> {
    budget(fam.n, DEFICIENT_MAX_N)?;
    if fam.n == 1 {
        return Err(InterchangeError::SingletonFamily);
    }
    if let Some(t) = independent_transversal(fam) {
        return Err(InterchangeError::HypothesisViolated(t));
    }
    if let Some(i) = (0..fam.n).find(|&i| fam.span_dim(&[i]) <= 1) {
        return Ok(vec![i]);
    }
    Ok(cascade_deficient_subset(fam, TransversalSearch::Exhaustive)?.subset)
}

/// Smallest proper subset (then lexicographically first) with deficient
/// span, by exhaustive search.
pub fn brute_force_deficient_subset(fam: &PairedVectorFamily) -> Result<Option<Vec<usize>>> {
    budget(fam.n, BRUTE_FORCE_MAX_N)?;
    let n = fam.n;
    for size in 1..n {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if fam.span_dim(&idx) <= size {
                return Ok(Some(idx));
            }
            // Next combination in lexicographic order.
            let Some(pos) = (0..size).rev().find(|&p| idx[p] < n - size + p) else {
                break;
            };
            idx[pos] += 1;
            for q in pos + 1..size {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    Ok(None)
}

fn subspace_vector<R: Rng>(rng: &mut R, basis: &[Vec<i64>], n: usize) -> Vec<i64> {
    if basis.is_empty() {
        return vec![0; n];
    }
    for _ in 0..20 {
        let mut v = vec![0i64; n];
        for b in basis {
            let c = rng.random_range(-1i64..=1);
            v.iter_mut().zip(b).for_each(|(x, y)| *x += c * y);
        }
        if v.iter().all(|x| x.abs() <= 2) {
            return v;
        }
    }
    basis[rng.random_range(0..basis.len())].clone()
}

/// A random family of `n` pairs in `Q^n`, entries in `[-2, 2]`, for which
/// every transversal is dependent by construction.
///
/// Either all pairs lie in one random subspace of dimension below `n`, or the
/// pairs of a random index subset `S` lie in a subspace of dimension below
/// `|S|` and the rest are unconstrained.
pub fn random_dependent_family<R: Rng>(rng: &mut R, n: usize) -> PairedVectorFamily {
    let random_basis = |k: usize, rng: &mut R| -> Vec<Vec<i64>> {
        (0..k)
            .map(|_| (0..n).map(|_| rng.random_range(-1i64..=1)).collect())
            .collect()
    };
    let whole = rng.random_bool(0.3);
    let members: Vec<bool> = if whole {
        vec![true; n]
    } else {
        loop {
            let m: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
            if m.iter().any(|&x| x) {
                break m;
            }
        }
    };
    let size = members.iter().filter(|&&x| x).count();
    let dim = rng.random_range(0..size);
    let basis = random_basis(dim, rng);
    let pairs: Vec<(Vec<i64>, Vec<i64>)> = members
        .iter()
        .map(|&inside| {
            if inside {
                (
                    subspace_vector(rng, &basis, n),
                    subspace_vector(rng, &basis, n),
                )
            } else {
                let mut free = || {
                    (0..n)
                        .map(|_| rng.random_range(-2i64..=2))
                        .collect::<Vec<_>>()
                };
                (free(), free())
            }
        })
        .collect();
    PairedVectorFamily::from_i64(&pairs).expect("square family")
}
