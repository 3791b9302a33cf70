//! Absolute logarithmic Weil heights of algebraic numbers.
//!
//! An algebraic number is a primitive irreducible integer polynomial plus the
//! index of one of its complex roots. Roots are ordered by real part, then
//! imaginary part. Heights come from the Mahler measure
//! `h(a) = (log |lead| + sum log max(1, |a_i|)) / d`, with an error bound
//! carried from certified root discs.

mod bmz;
mod height;
mod northcott;
pub mod poly;
pub mod roots;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rug::ops::Pow;
use rug::{Complex, Float};
use serde::Serialize;
use thiserror::Error;

pub use bmz::{bmz_product_report, BmzReport};
pub use height::{tuple_height, weil_height, FieldElement, NumberField};
pub use northcott::{northcott_enumerate, NORTHCOTT_MAX_DEGREE, NORTHCOTT_SLACK};
pub use poly::ZPoly;
pub use roots::Enclosure;

use poly::{charpoly, companion, identity, kron, mat_add, mat_mul, QMat};

pub const DEFAULT_PRECISION: u32 = 256;
/// Precision doubling stops here.
pub const MAX_PRECISION: u32 = 8192;
/// Irreducibility is verified up to this degree and trusted above it.
pub const IRREDUCIBILITY_CHECK_DEGREE: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeightError {
    #[error("polynomial {0} is constant")]
    Constant(String),
    #[error("polynomial {poly} has the factor {factor}")]
    Reducible { poly: String, factor: String },
    #[error("root index {index} out of range for degree {degree}")]
    RootIndex { index: usize, degree: usize },
    #[error("roots not certified at {bits} bits")]
    PrecisionExhausted { bits: u32 },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("{0} is not an algebraic integer")]
    NotIntegral(String),
}

pub type Result<T> = std::result::Result<T, HeightError>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeightValue {
    pub value: f64,
    pub error_bound: f64,
}

impl HeightValue {
    pub fn exact(value: f64) -> Self {
        HeightValue {
            value,
            error_bound: value.abs() * f64::EPSILON,
        }
    }

    pub fn lo(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn hi(&self) -> f64 {
        self.value + self.error_bound
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.15} +- {:.1e}", self.value, self.error_bound)
    }
}

/// A root of a primitive irreducible integer polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraicNumber {
    minpoly: ZPoly,
    root_index: usize,
    precision_bits: u32,
    trusted: bool,
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs().to_u64().expect("small coefficients");
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            out.push(k);
            if k * k != n {
                out.push(n / k);
            }
        }
        k += 1;
    }
    out.sort_unstable();
    out.into_iter().map(BigInt::from).collect()
}

fn rational_root(f: &ZPoly) -> Option<(BigInt, BigInt)> {
    let c = f.coeffs();
    let (a0, ad) = (&c[0], f.lead());
    if a0.is_zero() {
        return Some((BigInt::zero(), BigInt::one()));
    }
    let d = c.len() - 1;
    for q in divisors(ad) {
        for p in divisors(a0) {
            for p in [p.clone(), -p] {
                if !p.gcd(&q).is_one() {
                    continue;
                }
                // q^d f(p/q)
                let mut s = BigInt::zero();
                let mut pp = BigInt::one();
                for (k, ck) in c.iter().enumerate() {
                    s += ck * &pp * num_traits::pow(q.clone(), d - k);
                    pp *= &p;
                }
                if s.is_zero() {
                    return Some((p, q));
                }
            }
        }
    }
    None
}

/// A proper factor of `f`, found by a rational root test in low degree and
/// otherwise by rounding products of root subsets; every factor is confirmed
/// by exact division. `None` means irreducible.
fn proper_factor(f: &ZPoly, prec: u32) -> Result<Option<ZPoly>> {
    let d = f.degree().unwrap_or(0);
    if d <= 1 {
        return Ok(None);
    }
    let c = f.coeffs();
    let small = c.iter().all(|x| x.abs() < BigInt::from(1u64 << 40));
    if d <= 3 && small {
        return Ok(rational_root(f).map(|(p, q)| ZPoly::new(vec![-p, q])));
    }
    let sq = f.to_rat().squarefree_part().to_primitive_z();
    if sq.degree() != Some(d) {
        return Ok(Some(sq));
    }
    let (roots, p) =
        roots::roots_adaptive(f, prec, MAX_PRECISION).ok_or(HeightError::PrecisionExhausted {
            bits: MAX_PRECISION,
        })?;
    // lead * prod (x - a_i) over the roots of a factor h is an integer
    // multiple of h.
    let gf = Float::with_val(p, roots::to_rug(f.lead()));
    for k in 1..=d / 2 {
        for subset in combinations(d, k) {
            let mut prod = vec![Complex::with_val(p, 1)];
            for &i in &subset {
                let mut next = vec![Complex::with_val(p, 0); prod.len() + 1];
                for (j, c) in prod.iter().enumerate() {
                    next[j + 1] += c;
                    next[j] -= Complex::with_val(p, c * &roots[i].center);
                }
                prod = next;
            }
            {
                let mut cand = Vec::with_capacity(prod.len());
                let mut ok = true;
                for c in &prod {
                    let re = Float::with_val(p, c.real() * &gf);
                    let im = Float::with_val(p, c.imag() * &gf);
                    if im.abs() > 0.25 {
                        ok = false;
                        break;
                    }
                    let r = re.round();
                    match r.to_integer() {
                        Some(i) => cand.push(i.to_string().parse::<BigInt>().expect("integer")),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    let g = ZPoly::new(cand);
                    if g.degree() == Some(k) && g.divides(f) {
                        return Ok(Some(g.primitive()));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible factors of `f`, without multiplicity, each primitive.
pub fn factor(f: &ZPoly) -> Result<Vec<ZPoly>> {
    let f = f.to_rat().squarefree_part().to_primitive_z();
    let mut todo = vec![f];
    let mut out = Vec::new();
    while let Some(g) = todo.pop() {
        match g.degree() {
            None | Some(0) => continue,
            _ => {}
        }
        match proper_factor(&g, DEFAULT_PRECISION)? {
            Some(h) => {
                let q = g.to_rat().div_rem(&h.to_rat()).0.to_primitive_z();
                todo.push(h);
                todo.push(q);
            }
            None => out.push(g),
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn euler_phi(mut n: usize) -> usize {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// Whether `f` divides `x^k - 1` for some `k`. Uses `phi(k) >= sqrt(k / 2)`.
pub fn is_cyclotomic(f: &ZPoly) -> bool {
    let Some(d) = f.degree() else { return false };
    if d == 0 || !f.lead().is_one() || f.coeffs()[0].abs() != BigInt::one() {
        return false;
    }
    (1..=2 * d * d + 2)
        .filter(|&k| euler_phi(k) == d)
        .any(|k| f.divides(&ZPoly::x_pow_minus_one(k)))
}

impl AlgebraicNumber {
    /// The root with index `root_index` of `minpoly`, normalized to be
    /// primitive with positive leading coefficient.
    pub fn new(minpoly: ZPoly, root_index: usize, precision_bits: u32) -> Result<Self> {
        let f = minpoly.primitive();
        let d = match f.degree() {
            None | Some(0) => return Err(HeightError::Constant(f.to_string())),
            Some(d) => d,
        };
        if root_index >= d {
            return Err(HeightError::RootIndex {
                index: root_index,
                degree: d,
            });
        }
        let trusted = d > IRREDUCIBILITY_CHECK_DEGREE;
        if !trusted {
            if let Some(g) = proper_factor(&f, precision_bits)? {
                return Err(HeightError::Reducible {
                    poly: f.to_string(),
                    factor: g.to_string(),
                });
            }
        }
        Ok(AlgebraicNumber {
            minpoly: f,
            root_index,
            precision_bits,
            trusted,
        })
    }

    pub fn from_i64(coeffs: &[i64], root_index: usize) -> Result<Self> {
        Self::new(ZPoly::from_i64(coeffs), root_index, DEFAULT_PRECISION)
    }

    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(HeightError::ZeroInverse);
        }
        Self::new(ZPoly::new(vec![-num, den]), 0, DEFAULT_PRECISION)
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(n, 1).expect("linear polynomials are irreducible")
    }

    pub fn minpoly(&self) -> &ZPoly {
        &self.minpoly
    }

    pub fn root_index(&self) -> usize {
        self.root_index
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().expect("nonconstant")
    }

    /// Set when the degree is too large for the irreducibility check.
    pub fn irreducibility_trusted(&self) -> bool {
        self.trusted
    }

    pub fn with_precision(mut self, bits: u32) -> Self {
        self.precision_bits = bits;
        self
    }

    /// Rational value `p/q` for degree one.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        (self.degree() == 1).then(|| {
            (
                -self.minpoly.coeffs()[0].clone(),
                self.minpoly.coeffs()[1].clone(),
            )
        })
    }

    pub fn conjugates(&self) -> Result<Vec<Enclosure>> {
        roots::roots_adaptive(&self.minpoly, self.precision_bits, MAX_PRECISION)
            .map(|(r, _)| r)
            .ok_or(HeightError::PrecisionExhausted {
                bits: MAX_PRECISION,
            })
    }

    pub fn enclosure(&self) -> Result<Enclosure> {
        Ok(self.conjugates()?.swap_remove(self.root_index))
    }

    pub fn to_c64(&self) -> Result<num_complex::Complex64> {
        Ok(self.enclosure()?.to_c64())
    }

    /// The root of an irreducible factor of `candidates` nearest `target`.
    fn locate(candidates: &ZPoly, target: &Complex, prec: u32) -> Result<Self> {
        let mut best: Option<(Float, ZPoly, usize)> = None;
        for g in factor(candidates)? {
            let (rs, _) = roots::roots_adaptive(&g, prec, MAX_PRECISION).ok_or(
                HeightError::PrecisionExhausted {
                    bits: MAX_PRECISION,
                },
            )?;
            for (k, e) in rs.iter().enumerate() {
                let dist =
                    Float::with_val(prec, Complex::with_val(prec, &e.center - target).abs_ref());
                if best.as_ref().is_none_or(|(b, _, _)| dist < *b) {
                    best = Some((dist, g.clone(), k));
                }
            }
        }
        let (_, g, k) = best.ok_or_else(|| HeightError::Constant(candidates.to_string()))?;
        Self::new(g, k, prec)
    }

    fn value_mp(&self) -> Result<Complex> {
        Ok(self.enclosure()?.center)
    }

    pub fn neg(&self) -> Result<Self> {
        let t = -self.value_mp()?;
        Self::locate(&self.minpoly.negate_var(), &t, self.precision_bits)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.minpoly.coeffs()[0].is_zero() {
            return Err(HeightError::ZeroInverse);
        }
        let t = self.value_mp()?.recip();
        Self::locate(&self.minpoly.reversed(), &t, self.precision_bits)
    }

    /// `self^n`, with the minimal polynomial taken from the characteristic
    /// polynomial of the `n`-th power of the companion matrix.
    pub fn pow(&self, n: i32) -> Result<Self> {
        if n == 0 {
            return Ok(Self::integer(1).with_precision(self.precision_bits));
        }
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let c = companion(&self.minpoly);
        let mut m = identity(c.len());
        for _ in 0..n {
            m = mat_mul(&m, &c);
        }
        let t = self.value_mp()?.pow(n);
        Self::locate(&charpoly(&m).to_primitive_z(), &t, self.precision_bits)
    }

    fn combine(&self, other: &Self, op: fn(&QMat, &QMat) -> QMat, t: Complex) -> Result<Self> {
        let (a, b) = (companion(&self.minpoly), companion(&other.minpoly));
        let prec = self.precision_bits.max(other.precision_bits);
        Self::locate(&charpoly(&op(&a, &b)).to_primitive_z(), &t, prec)
    }

    /// The product, located among the roots of the charpoly of `A (x) B`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let t = self.value_mp()? * other.value_mp()?;
        self.combine(other, kron, t)
    }

    /// The sum, located among the roots of the charpoly of `A (x) I + I (x) B`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let t = self.value_mp()? + other.value_mp()?;
        fn sum(a: &QMat, b: &QMat) -> QMat {
            mat_add(&kron(a, &identity(b.len())), &kron(&identity(a.len()), b))
        }
        self.combine(other, sum, t)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((p, q)) = self.as_rational() {
            return if q.is_one() {
                write!(f, "{p}")
            } else {
                write!(f, "{p}/{q}")
            };
        }
        write!(f, "root {} of {}", self.root_index, self.minpoly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_validation() {
        let a = AlgebraicNumber::new(ZPoly::from_i64(&[2, 0, -4]), 1, 128).unwrap();
        assert_eq!(a.minpoly(), &ZPoly::from_i64(&[-1, 0, 2]));
        assert!(matches!(
            AlgebraicNumber::from_i64(&[-1, 0, 1], 0),
            Err(HeightError::Reducible { .. })
        ));
        assert!(matches!(
            AlgebraicNumber::from_i64(&[5], 0),
            Err(HeightError::Constant(_))
        ));
        assert!(matches!(
            AlgebraicNumber::from_i64(&[1, 0, 1], 2),
            Err(HeightError::RootIndex { .. })
        ));
        // (x^2 + 1)(x^2 - 2) needs the root-subset search.
        assert!(matches!(
            AlgebraicNumber::from_i64(&[-2, 0, -1, 0, 1], 0),
            Err(HeightError::Reducible { .. })
        ));
        assert!(AlgebraicNumber::from_i64(&[-2, 0, 0, 0, 1], 0).is_ok());
        // (x^2 + x + 1)(x^3 - x - 1)
        assert!(matches!(
            AlgebraicNumber::from_i64(&[-1, -2, -2, 0, 1, 1], 0),
            Err(HeightError::Reducible { .. })
        ));
    }

    #[test]
    fn cyclotomic_detection() {
        assert!(is_cyclotomic(&ZPoly::from_i64(&[1, 1, 1])));
        assert!(is_cyclotomic(&ZPoly::from_i64(&[1, 0, 1])));
        assert!(is_cyclotomic(&ZPoly::from_i64(&[1, -1, 1, -1, 1])));
        assert!(!is_cyclotomic(&ZPoly::from_i64(&[1, -1, 1, 1])));
        assert!(!is_cyclotomic(&ZPoly::from_i64(&[-1, -1, 1])));
    }

    #[test]
    fn arithmetic_minpolys() {
        let s2 = AlgebraicNumber::from_i64(&[-2, 0, 1], 1).unwrap();
        assert_eq!(s2.pow(2).unwrap(), AlgebraicNumber::integer(2));
        assert_eq!(s2.neg().unwrap().root_index(), 0);
        let half = s2.inv().unwrap();
        assert_eq!(half.minpoly(), &ZPoly::from_i64(&[-1, 0, 2]));
        assert!((half.to_c64().unwrap().re - 0.5f64.sqrt()).abs() < 1e-15);
        let s3 = AlgebraicNumber::from_i64(&[-3, 0, 1], 1).unwrap();
        let p = s2.mul(&s3).unwrap();
        assert_eq!(p.minpoly(), &ZPoly::from_i64(&[-6, 0, 1]));
        let s = s2.add(&s3).unwrap();
        assert_eq!(s.minpoly(), &ZPoly::from_i64(&[1, 0, -10, 0, 1]));
        assert!((s.to_c64().unwrap().re - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-14);
        assert_eq!(
            s2.add(&s2.neg().unwrap()).unwrap(),
            AlgebraicNumber::integer(0)
        );
    }

    #[test]
    fn factor_splits_products() {
        let f = ZPoly::from_i64(&[-2, 0, -1, 0, 1]);
        assert_eq!(
            factor(&f).unwrap(),
            vec![ZPoly::from_i64(&[-2, 0, 1]), ZPoly::from_i64(&[1, 0, 1])]
        );
    }
}
