use num_integer::Integer;
use rayon::prelude::*;

use super::poly::ZPoly;
use super::roots::mahler_f64;
use super::{weil_height, AlgebraicNumber, HeightError, Result, DEFAULT_PRECISION};

pub const NORTHCOTT_MAX_DEGREE: usize = 3;
/// Heights within this distance of the bound count as on it, so that bounds
/// such as `ln 2` rounded to a double still include their boundary points.
pub const NORTHCOTT_SLACK: f64 = 1e-12;

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn has_rational_root(c: &[i64]) -> bool {
    let d = c.len() - 1;
    if c[0] == 0 {
        return true;
    }
    let divs = |n: i64| (1..=n.abs()).filter(move |k| n % k == 0);
    for q in divs(c[d]) {
        for p0 in divs(c[0]) {
            for p in [p0, -p0] {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let (mut s, mut pp) = (0i128, 1i128);
                for (k, &ck) in c.iter().enumerate() {
                    s += ck as i128 * pp * (q as i128).pow((d - k) as u32);
                    pp *= p as i128;
                }
                if s == 0 {
                    return true;
                }
            }
        }
    }
    false
}

/// Primitive irreducible polynomials of degree `d` whose Mahler measure may
/// be at most `mbound`, for a fixed leading coefficient.
fn candidates(d: usize, lead: i64, mbound: f64) -> Vec<Vec<i64>> {
    let bound = |k: usize| (binom(d, k) * mbound).floor() as i64;
    let mut out = Vec::new();
    let mut c = vec![0i64; d + 1];
    c[d] = lead;
    fn rec(
        k: usize,
        d: usize,
        c: &mut Vec<i64>,
        bound: &dyn Fn(usize) -> i64,
        mbound: f64,
        out: &mut Vec<Vec<i64>>,
    ) {
        if k == d {
            let g = c.iter().fold(0i64, |g, x| g.gcd(x));
            if g != 1 {
                return;
            }
            let irreducible = if d == 1 { true } else { !has_rational_root(c) };
            if irreducible && mahler_f64(c) <= mbound * (1.0 + 1e-6) + 1e-9 {
                out.push(c.clone());
            }
            return;
        }
        // |a_0| <= M as well, since M >= |a_d prod a_i| = |a_0|.
        let b = if k == 0 {
            bound(0).min(mbound.floor() as i64)
        } else {
            bound(k)
        };
        for v in -b..=b {
            c[k] = v;
            rec(k + 1, d, c, bound, mbound, out);
        }
    }
    rec(0, d, &mut c, &bound, mbound, &mut out);
    out
}

/// Every algebraic number of degree at most `d_max` and height at most
/// `h_max`, sorted by degree, minimal polynomial and root index.
///
/// The minimal polynomial `f` of such a number has `M(f) <= e^{d h_max}`, so
/// `|a_k| <= binom(d, k) e^{d h_max}`. Candidates pass a double precision
/// Mahler measure screen with relative slack `1e-6` before the certified
/// height is compared against `h_max + NORTHCOTT_SLACK`.
pub fn northcott_enumerate(h_max: f64, d_max: usize) -> Result<Vec<AlgebraicNumber>> {
    if d_max > NORTHCOTT_MAX_DEGREE {
        return Err(HeightError::BudgetExceeded(format!(
            "degree {d_max} above {NORTHCOTT_MAX_DEGREE}"
        )));
    }
    if !(h_max.is_finite() && h_max <= 3f64.ln() + NORTHCOTT_SLACK) {
        return Err(HeightError::BudgetExceeded(format!(
            "height bound {h_max} above log 3"
        )));
    }
    if h_max < 0.0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for d in 1..=d_max {
        let mbound = (d as f64 * (h_max + NORTHCOTT_SLACK)).exp();
        let leads: Vec<i64> = (1..=mbound.floor() as i64).collect();
        let polys: Vec<Vec<i64>> = leads
            .par_iter()
            .flat_map_iter(|&l| candidates(d, l, mbound))
            .collect();
        let found: Vec<Vec<AlgebraicNumber>> = polys
            .par_iter()
            .map(|c| -> Result<Vec<AlgebraicNumber>> {
                let a = AlgebraicNumber::new(ZPoly::from_i64(c), 0, DEFAULT_PRECISION)?;
                let h = weil_height(&a)?;
                if h.lo() > h_max + NORTHCOTT_SLACK {
                    return Ok(Vec::new());
                }
                Ok((0..d)
                    .map(|k| AlgebraicNumber {
                        root_index: k,
                        ..a.clone()
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;
        out.extend(found.into_iter().flatten());
    }
    out.sort_by(|a, b| {
        (a.degree(), a.minpoly(), a.root_index()).cmp(&(b.degree(), b.minpoly(), b.root_index()))
    });
    out.dedup();
    Ok(out)
}
