use std::collections::HashMap;

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::mp::refine_filling;
use super::{
    holonomy_sets_equal, solve_filling, Branch, DehnError, FillingCoefficient, FillingResult,
    NZPotential, Slope,
};

/// Largest per-cusp bound accepted by [`cosmetic_scan`].
pub const SCAN_MAX_BOUND: u64 = 60;
/// Largest number of fillings in one scan.
pub const SCAN_MAX_GRID: usize = 4_000_000;
/// Precision for re-solving candidate collisions.
pub const CONFIRM_BITS: u32 = 128;

/// Canonical coprime slopes (`q > 0` or `1/0`) with `lo <= |p| + |q| <= hi`.
pub fn canonical_slopes(lo: i64, hi: i64) -> Vec<Slope> {
    let mut out = Vec::new();
    for size in lo.max(1)..=hi {
        if size == 1 {
            out.push(Slope::with_dual(1, 0, 0, 1).unwrap());
            out.push(Slope::new(0, 1).unwrap());
            continue;
        }
        for q in 1..=size {
            let a = size - q;
            for p in if a == 0 { vec![0] } else { vec![a, -a] } {
                if p.gcd(&q) == 1 {
                    out.push(Slope::new(p, q).unwrap());
                }
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Collision {
    pub a: FillingCoefficient,
    pub b: FillingCoefficient,
    /// Both sides are the same filling.
    pub trivial: bool,
    /// Largest entrywise holonomy difference under the best matching.
    pub distance: f64,
    /// Re-solved at [`CONFIRM_BITS`] and still within tolerance.
    pub confirmed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollisionReport {
    pub bound: u64,
    pub tol: f64,
    pub fillings: usize,
    pub collisions: Vec<Collision>,
}

impl CollisionReport {
    pub fn nontrivial(&self) -> impl Iterator<Item = &Collision> {
        self.collisions.iter().filter(|c| !c.trivial && c.confirmed)
    }
}

fn set_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    // Smallest max-distance over matchings; n is tiny.
    fn go(a: &[Complex64], b: &[Complex64], used: &mut [bool]) -> f64 {
        let Some((x, rest)) = a.split_first() else {
            return 0.0;
        };
        let mut best = f64::INFINITY;
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                best = best.min((x - b[j]).norm().max(go(rest, b, used)));
                used[j] = false;
            }
        }
        best
    }
    go(a, b, &mut vec![false; b.len()])
}

fn confirm(pot: &NZPotential, a: &FillingResult, b: &FillingResult, tol: f64) -> bool {
    let hi =
        |r: &FillingResult| refine_filling(pot, &r.coefficient, Branch::Plus, &r.u, CONFIRM_BITS);
    match (hi(a), hi(b)) {
        (Ok(x), Ok(y)) => holonomy_sets_equal(&x.t_f64(), &y.t_f64(), tol),
        _ => false,
    }
}

/// Compare the holonomy sets of two fillings. Identical coefficients are
/// always a trivial collision.
pub fn collide(
    pot: &NZPotential,
    a: &FillingCoefficient,
    b: &FillingCoefficient,
    tol: f64,
) -> Result<Option<Collision>, DehnError> {
    let trivial = a.canonical() == b.canonical();
    let ra = solve_filling(pot, a)?;
    let rb = solve_filling(pot, b)?;
    let distance = set_distance(&ra.t, &rb.t);
    if !trivial && distance > tol {
        return Ok(None);
    }
    let confirmed = trivial || confirm(pot, &ra, &rb, tol);
    Ok(Some(Collision {
        a: a.clone(),
        b: b.clone(),
        trivial,
        distance,
        confirmed,
    }))
}

fn grid(slopes: &[Slope], n: usize) -> Vec<FillingCoefficient> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|pre: Vec<Slope>| {
                slopes.iter().map(move |s| {
                    let mut v = pre.clone();
                    v.push(*s);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(FillingCoefficient::new).collect()
}

/// Solve every filling with `ceil(B/2) <= |p_i| + |q_i| <= B` on each cusp and
/// report all pairs of distinct fillings whose holonomy sets agree to `tol`.
/// Candidates are bucketed on the smallest real part of the set, then compared
/// entrywise and confirmed by a multiprecision re-solve.
pub fn cosmetic_scan(
    pot: &NZPotential,
    bound: u64,
    tol: f64,
) -> Result<CollisionReport, DehnError> {
    if bound > SCAN_MAX_BOUND {
        return Err(DehnError::BudgetExceeded {
            bound,
            max: SCAN_MAX_BOUND,
        });
    }
    let b = bound as i64;
    let slopes = canonical_slopes((b + 1) / 2, b);
    let n = pot.n_cusps();
    let size = (slopes.len() as f64).powi(n as i32);
    if size > SCAN_MAX_GRID as f64 {
        return Err(DehnError::BudgetExceeded {
            bound,
            max: SCAN_MAX_BOUND,
        });
    }
    let coeffs = grid(&slopes, n);
    let results: Vec<FillingResult> = coeffs
        .par_iter()
        .map(|c| solve_filling(pot, c))
        .collect::<Result<_, _>>()?;

    let cell = 2.0 * tol;
    let key = |r: &FillingResult| {
        (r.t.iter().map(|z| z.re).fold(f64::INFINITY, f64::min) / cell).floor() as i64
    };
    let mut buckets: HashMap<i64, Vec<usize>> = HashMap::new();
    for (i, r) in results.iter().enumerate() {
        buckets.entry(key(r)).or_default().push(i);
    }
    let mut pairs: Vec<(usize, usize, f64)> = (0..results.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let k = key(&results[i]);
            let results = &results;
            let buckets = &buckets;
            (k - 1..=k + 1)
                .filter_map(move |kk| buckets.get(&kk))
                .flatten()
                .filter(move |&&j| j > i)
                .filter_map(move |&j| {
                    let d = set_distance(&results[i].t, &results[j].t);
                    (d <= tol).then_some((i, j, d))
                })
        })
        .collect();
    pairs.sort_by_key(|x| (x.0, x.1));
    let collisions = pairs
        .into_par_iter()
        .map(|(i, j, distance)| {
            let (a, b) = (&results[i], &results[j]);
            let trivial = a.coefficient.canonical() == b.coefficient.canonical();
            Collision {
                a: a.coefficient.clone(),
                b: b.coefficient.clone(),
                trivial,
                distance,
                confirmed: trivial || confirm(pot, a, b, tol),
            }
        })
        .collect();
    Ok(CollisionReport {
        bound,
        tol,
        fillings: results.len(),
        collisions,
    })
}
