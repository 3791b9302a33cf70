use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rug::ops::Pow;
use rug::{Complex, Float};

use super::poly::{charpoly, companion, identity, mat_add, mat_mul, QMat, ZPoly};
use super::roots::{certified_roots, roots_adaptive, to_rug, Enclosure};
use super::{is_cyclotomic, AlgebraicNumber, HeightError, HeightValue, Result, MAX_PRECISION};
use crate::exactalg::Rat;

/// Precision is doubled until the propagated error drops below this.
const TARGET_ERROR: f64 = 1e-40;

fn ln_big(x: &BigInt) -> Float {
    Float::with_val(128, to_rug(x)).ln()
}

/// `[log max(1, m - r), log max(1, m + r)]` as midpoint and half width.
fn log_plus(m: &Float, r: &Float, prec: u32) -> (Float, Float) {
    let one = Float::with_val(prec, 1);
    let lo = Float::with_val(prec, m - r).max(&one).ln();
    let hi = Float::with_val(prec, m + r).max(&one).ln();
    let mid = Float::with_val(prec, &lo + &hi) / 2;
    let half = Float::with_val(prec, &hi - &lo) / 2;
    (mid, half)
}

fn finish(total: Float, err: Float, d: usize, prec: u32) -> HeightValue {
    let slack: Float = Float::with_val(prec, 2).pow(10 - prec as i32)
        * (Float::with_val(prec, total.abs_ref()) + d as u32 + 1);
    let value = (total / d as u32).to_f64();
    let err = ((err + slack) / d as u32).to_f64();
    let value = value.max(0.0);
    HeightValue {
        value,
        error_bound: err + 2.0 * value * f64::EPSILON,
    }
}

fn mahler_log(f: &ZPoly, roots: &[Enclosure], prec: u32) -> (Float, Float) {
    let mut total = Float::with_val(prec, to_rug(f.lead())).abs().ln();
    let mut err = Float::with_val(prec, 0);
    for e in roots {
        let (mid, half) = log_plus(&e.modulus(), &e.radius, prec);
        total += mid;
        err += half;
    }
    (total, err)
}

/// Absolute logarithmic Weil height.
///
/// Rationals use `log max(|p|, |q|)` and cyclotomic polynomials give exactly
/// zero. Otherwise each root disc contributes the interval of
/// `log max(1, |z|)` over the disc, so a root close to the unit circle
/// costs only its disc radius and never needs to be separated from it.
/// Precision doubles until the error is below `1e-40` or the cap is hit.
pub fn weil_height(a: &AlgebraicNumber) -> Result<HeightValue> {
    if let Some((p, q)) = a.as_rational() {
        let m = p.abs().max(q.abs());
        return Ok(if m.is_one() || p.is_zero() {
            HeightValue {
                value: 0.0,
                error_bound: 0.0,
            }
        } else {
            HeightValue::exact(ln_big(&m).to_f64())
        });
    }
    let f = a.minpoly();
    if is_cyclotomic(f) {
        return Ok(HeightValue {
            value: 0.0,
            error_bound: 0.0,
        });
    }
    let d = a.degree();
    let mut prec = a.precision_bits().max(64);
    loop {
        if let Some(roots) = certified_roots(f, prec) {
            let (total, err) = mahler_log(f, &roots, prec);
            if err.to_f64() / (d as f64) < TARGET_ERROR {
                return Ok(finish(total, err, d, prec));
            }
        }
        if prec >= MAX_PRECISION {
            return Err(HeightError::PrecisionExhausted { bits: prec });
        }
        prec = (2 * prec).min(MAX_PRECISION);
    }
}

fn rational_tuple_height(entries: &[(BigInt, BigInt)]) -> HeightValue {
    // Finite places: the p-adic max is p^(max_i v_p(q_i)); summed over p this
    // is log lcm(q_i). Primes are split off by trial division and any
    // leftover cofactor is taken as one lump.
    let mut l = entries.iter().fold(BigInt::one(), |l, (_, q)| l.lcm(q));
    let mut finite = Float::with_val(128, 0);
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while !l.is_one() && p <= limit && &p * &p <= l {
        let mut v = 0u32;
        while (&l % &p).is_zero() {
            l /= &p;
            v += 1;
        }
        if v > 0 {
            finite += ln_big(&p) * v;
        }
        p += 1;
    }
    if !l.is_one() {
        finite += ln_big(&l);
    }
    let biggest = entries
        .iter()
        .map(|(p, q)| Rat::new(p.abs(), q.clone()))
        .fold(Rat::one(), |m, x| if x > m { x } else { m });
    let infinite = ln_big(biggest.numer()) - ln_big(biggest.denom());
    let total = finite + infinite;
    HeightValue::exact(total.to_f64())
}

/// Height of the point `(a_1 : ... : a_n : 1)`, normalized by the degree of
/// a common field of degree `d`.
///
/// Supported presentations are all-rational tuples, computed place by place,
/// and tuples whose entries are all one number. Tuples of general elements
/// of one field go through [`NumberField::tuple_height`].
pub fn tuple_height(entries: &[AlgebraicNumber], d: usize) -> Result<HeightValue> {
    if d == 0 {
        return Err(HeightError::FieldMismatch("field degree 0".into()));
    }
    if let Some(a) = entries.iter().find(|a| !d.is_multiple_of(a.degree())) {
        return Err(HeightError::FieldMismatch(format!(
            "degree {} does not divide {d}",
            a.degree()
        )));
    }
    if entries.is_empty() {
        return Ok(HeightValue {
            value: 0.0,
            error_bound: 0.0,
        });
    }
    if let Some(rs) = entries
        .iter()
        .map(AlgebraicNumber::as_rational)
        .collect::<Option<Vec<_>>>()
    {
        return Ok(rational_tuple_height(&rs));
    }
    let first = &entries[0];
    if entries
        .iter()
        .all(|a| a.minpoly() == first.minpoly() && a.root_index() == first.root_index())
    {
        return weil_height(first);
    }
    Err(HeightError::FieldMismatch(
        "entries are not given in one field presentation".into(),
    ))
}

/// `Q(theta)` for an algebraic integer `theta`, with elements written as
/// integer combinations of powers of `theta`. Every element is then an
/// algebraic integer and only the archimedean places contribute to heights.
#[derive(Clone, Debug)]
pub struct NumberField {
    generator: AlgebraicNumber,
    conjugates: Vec<Enclosure>,
    prec: u32,
}

/// Coefficients of `1, theta, theta^2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement(pub Vec<BigInt>);

impl FieldElement {
    pub fn from_i64(c: &[i64]) -> Self {
        FieldElement(c.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl NumberField {
    pub fn new(generator: AlgebraicNumber) -> Result<Self> {
        if !generator.minpoly().lead().is_one() {
            return Err(HeightError::NotIntegral(generator.to_string()));
        }
        let (conjugates, prec) = roots_adaptive(
            generator.minpoly(),
            generator.precision_bits(),
            MAX_PRECISION,
        )
        .ok_or(HeightError::PrecisionExhausted {
            bits: MAX_PRECISION,
        })?;
        Ok(NumberField {
            generator,
            conjugates,
            prec,
        })
    }

    pub fn degree(&self) -> usize {
        self.generator.degree()
    }

    pub fn generator(&self) -> &AlgebraicNumber {
        &self.generator
    }

    fn check(&self, e: &FieldElement) -> Result<()> {
        if e.0.len() > self.degree() {
            return Err(HeightError::FieldMismatch(format!(
                "{} coefficients in a field of degree {}",
                e.0.len(),
                self.degree()
            )));
        }
        Ok(())
    }

    /// Image of `e` under the `k`-th embedding with an error radius.
    fn embed(&self, e: &FieldElement, k: usize) -> (Complex, Float) {
        let p = self.prec;
        let t = &self.conjugates[k];
        let m = t.modulus();
        let mr = Float::with_val(p, &m + &t.radius);
        let mut z = Complex::with_val(p, 0);
        let mut err = Float::with_val(p, 0);
        let mut pw = Complex::with_val(p, 1);
        let (mut mp, mut mrp) = (Float::with_val(p, 1), Float::with_val(p, 1));
        for c in &e.0 {
            let cf = Float::with_val(p, to_rug(c));
            z += Complex::with_val(p, &pw * &cf);
            err += Float::with_val(p, &mrp - &mp) * cf.abs();
            pw *= &t.center;
            mp *= &m;
            mrp *= &mr;
        }
        (z, err)
    }

    /// `e` as an algebraic number: its image under the generator's embedding,
    /// with minimal polynomial from the multiplication matrix of `e`.
    pub fn element(&self, e: &FieldElement) -> Result<AlgebraicNumber> {
        self.check(e)?;
        let c = companion(self.generator.minpoly());
        let n = c.len();
        let mut m: QMat = vec![vec![Rat::zero(); n]; n];
        let mut pw = identity(n);
        for k in &e.0 {
            let scaled: QMat = pw
                .iter()
                .map(|r| r.iter().map(|x| x * Rat::from_integer(k.clone())).collect())
                .collect();
            m = mat_add(&m, &scaled);
            pw = mat_mul(&pw, &c);
        }
        let (t, _) = self.embed(e, self.generator.root_index());
        AlgebraicNumber::locate(&charpoly(&m).to_primitive_z(), &t, self.prec)
    }

    /// `(1/d) sum_sigma log max(1, |sigma e_1|, ..., |sigma e_n|)` over the
    /// complex embeddings.
    pub fn tuple_height(&self, elems: &[FieldElement]) -> Result<HeightValue> {
        for e in elems {
            self.check(e)?;
        }
        let p = self.prec;
        let mut total = Float::with_val(p, 0);
        let mut err = Float::with_val(p, 0);
        for k in 0..self.degree() {
            let mut lo = Float::with_val(p, 1);
            let mut hi = Float::with_val(p, 1);
            for e in elems {
                let (z, r) = self.embed(e, k);
                let m = Float::with_val(p, z.abs_ref());
                lo = lo.max(&Float::with_val(p, &m - &r));
                hi = hi.max(&Float::with_val(p, &m + &r));
            }
            let (l, h) = (lo.ln(), hi.ln());
            total += Float::with_val(p, &l + &h) / 2;
            err += Float::with_val(p, &h - &l) / 2;
        }
        Ok(finish(total, err, self.degree(), p))
    }
}
