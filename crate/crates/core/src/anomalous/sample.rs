use rand::Rng;
use serde::Serialize;

use super::{anomaly_verdict, SubgroupSpec};

const ENTRY_BOUND: i64 = 2;
const ZERO_PROB: f64 = 0.6;
const REJECTION_TRIES: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum SampleKind {
    /// Random sparse rows that happened to be anomalous.
    Rejection,
    /// `M_i = L_i = 1` plus random rows, mixed by unimodular row operations.
    Planted,
}

fn entry<R: Rng>(rng: &mut R) -> i64 {
    if rng.random_bool(ZERO_PROB) {
        0
    } else {
        let x = rng.random_range(1..=ENTRY_BOUND);
        if rng.random_bool(0.5) {
            x
        } else {
            -x
        }
    }
}

/// `l` sparse random rows with entries in `[-2, 2]`, or `None` if they are
/// dependent.
pub fn random_spec<R: Rng>(rng: &mut R, n: usize, l: usize) -> Option<SubgroupSpec> {
    let rows: Vec<Vec<i64>> = (0..l)
        .map(|_| (0..2 * n).map(|_| entry(rng)).collect())
        .collect();
    SubgroupSpec::from_rows(n, 1, &rows).ok()
}

fn planted<R: Rng>(rng: &mut R, n: usize) -> SubgroupSpec {
    loop {
        let l = rng.random_range(2..=n);
        let i = rng.random_range(0..n);
        let mut rows: Vec<Vec<i64>> = vec![vec![0; 2 * n], vec![0; 2 * n]];
        rows[0][2 * i] = 1;
        rows[1][2 * i + 1] = 1;
        rows.extend((2..l).map(|_| (0..2 * n).map(|_| entry(rng)).collect::<Vec<_>>()));
        for _ in 0..rng.random_range(0..=2 * l) {
            let (a, b) = (rng.random_range(0..l), rng.random_range(0..l));
            if a == b {
                continue;
            }
            let s = if rng.random_bool(0.5) { 1 } else { -1 };
            let mixed: Vec<i64> = rows[a]
                .iter()
                .zip(&rows[b])
                .map(|(x, y)| x + s * y)
                .collect();
            if mixed.iter().all(|x| x.abs() <= ENTRY_BOUND) {
                rows[a] = mixed;
            }
        }
        rows.swap(0, rng.random_range(0..l));
        if let Ok(spec) = SubgroupSpec::from_rows(n, 1, &rows) {
            return spec;
        }
    }
}

/// A seeded anomalous single-copy spec on `n >= 2` cusps with entries in
/// `[-2, 2]` and between 2 and `2n - 1` rows. Rejection sampling is tried
/// first; a planted spec is the fallback.
pub fn random_anomalous_spec<R: Rng>(rng: &mut R, n: usize) -> (SubgroupSpec, SampleKind) {
    assert!(n >= 2, "anomalous single-copy specs need two cusps");
    for _ in 0..REJECTION_TRIES {
        let l = rng.random_range(2..2 * n);
        if let Some(spec) = random_spec(rng, n, l) {
            if anomaly_verdict(&spec).is_anomalous() {
                return (spec, SampleKind::Rejection);
            }
        }
    }
    (planted(rng, n), SampleKind::Planted)
}
