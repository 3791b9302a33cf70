use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};
use serde::Serialize;

use super::{lll_reduce, LatticeError, Result, LLL_DELTA};

pub const MIN_PRECISION: u32 = 128;
pub const MAX_NUMBERS: usize = 8;

/// Exponents with `prod eta_i^{a_i} = 1` and the observed `|prod - 1|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultRelation {
    pub exponents: Vec<i64>,
    pub residual: f64,
}

fn to_big(x: &Float) -> BigInt {
    x.to_integer()
        .expect("finite")
        .to_string()
        .parse()
        .expect("integer")
}

fn residual(numbers: &[Complex], a: &[i64], prec: u32) -> Float {
    let mut p = Complex::with_val(prec, 1);
    for (z, &e) in numbers.iter().zip(a) {
        p *= Complex::with_val(prec, z.pow(e as i32));
    }
    p -= 1;
    Float::with_val(prec, p.abs_ref())
}

fn normalize(mut a: Vec<i64>) -> Vec<i64> {
    if a.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        a.iter_mut().for_each(|x| *x = -*x);
    }
    a
}

/// Search for integers `|a_i| <= coeff_bound`, not all zero, with
/// `sum a_i log eta_i` in `2 pi i Z` to within `2^(-prec/2)`, where `prec`
/// is the smallest precision among the inputs.
///
/// The lattice has one row `(e_i, 0, [C log|eta_i|], [C arg eta_i])` per
/// number and a row `(0, 1, 0, [2 pi C])` for the branch of the logarithm,
/// with `C = 2^(prec/2)`. Reduced vectors within the exponent bound are
/// checked by multiplying out at full precision, divided by their gcd when
/// the quotient is still a relation, and the one with the smallest max norm
/// is returned. `None` is evidence of independence up to the bound, not a
/// proof.
pub fn find_multiplicative_relation(
    numbers: &[Complex],
    coeff_bound: u64,
) -> Result<Option<MultRelation>> {
    if numbers.len() > MAX_NUMBERS {
        return Err(LatticeError::TooManyNumbers {
            count: numbers.len(),
            max: MAX_NUMBERS,
        });
    }
    let prec = numbers
        .iter()
        .map(|z| z.prec().0.min(z.prec().1))
        .min()
        .unwrap_or(MIN_PRECISION);
    if prec < MIN_PRECISION {
        return Err(LatticeError::PrecisionTooLow {
            bits: prec,
            min: MIN_PRECISION,
        });
    }
    if let Some(i) = numbers.iter().position(Complex::is_zero) {
        return Err(LatticeError::ZeroInput(i));
    }
    let r = numbers.len();
    if r == 0 {
        return Ok(None);
    }
    let half = prec / 2;
    let scale = Float::with_val(prec, 2).pow(half);
    let tol = Float::with_val(prec, 2).pow(-(half as i32));
    let mut rows = Vec::with_capacity(r + 1);
    for (i, z) in numbers.iter().enumerate() {
        let lnabs = Float::with_val(prec, z.abs_ref()).ln();
        let arg = Float::with_val(prec, z.arg_ref());
        let mut row: Vec<BigInt> = (0..=r).map(|j| BigInt::from((i == j) as i64)).collect();
        row.push(to_big(&(lnabs * &scale).round()));
        row.push(to_big(&(arg * &scale).round()));
        rows.push(row);
    }
    let mut branch = vec![BigInt::zero(); r + 3];
    branch[r] = BigInt::from(1);
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    branch[r + 2] = to_big(&(two_pi * &scale).round());
    rows.push(branch);
    let reduced = lll_reduce(rows, LLL_DELTA.0, LLL_DELTA.1)
        .ok_or_else(|| LatticeError::Reduction("dependent rows".into()))?;
    let mut best: Option<(i64, MultRelation)> = None;
    for v in &reduced {
        let Some(a) = v[..r]
            .iter()
            .map(|x| x.to_i64())
            .collect::<Option<Vec<i64>>>()
        else {
            continue;
        };
        let size = a.iter().map(|x| x.abs()).max().unwrap_or(0);
        if size == 0 || size as u64 > coeff_bound {
            continue;
        }
        let res = residual(numbers, &a, prec);
        if res > tol {
            continue;
        }
        let g = a.iter().fold(0i64, |g, x| g.gcd(x));
        let (a, res) = if g > 1 {
            let b: Vec<i64> = a.iter().map(|x| x / g).collect();
            let rb = residual(numbers, &b, prec);
            if rb <= tol {
                (b, rb)
            } else {
                (a, res)
            }
        } else {
            (a, res)
        };
        let a = normalize(a);
        let size = a.iter().map(|x| x.abs()).max().unwrap_or(0);
        let cand = MultRelation {
            exponents: a,
            residual: res.to_f64(),
        };
        let better = match &best {
            None => true,
            Some((s, b)) => size < *s || (size == *s && cand.exponents > b.exponents),
        };
        if better {
            best = Some((size, cand));
        }
    }
    Ok(best.map(|(_, m)| m))
}
