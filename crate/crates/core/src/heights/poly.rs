//! Univariate integer and rational polynomials, coefficients low to high.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactalg::Rat;

/// Integer polynomial with no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ZPoly(Vec<BigInt>);

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        ZPoly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> &BigInt {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        ZPoly(self.0.iter().map(|c| c / &g).collect())
    }

    /// `f(-x)`.
    pub fn negate_var(&self) -> Self {
        ZPoly(
            self.0
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `x^d f(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.0.clone();
        c.reverse();
        ZPoly::new(c)
    }

    pub fn to_rat(&self) -> QPoly1 {
        QPoly1::new(
            self.0
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Exact divisibility over the integers.
    pub fn divides(&self, other: &ZPoly) -> bool {
        other.to_rat().rem(&self.to_rat()).is_zero()
    }

    /// `x^k - 1`.
    pub fn x_pow_minus_one(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] = -BigInt::one();
        c[k] = BigInt::one();
        ZPoly(c)
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let a = c.abs();
            let sep = if first { "" } else { " " };
            let body = match (k, a.is_one()) {
                (0, _) => a.to_string(),
                (1, true) => "x".to_string(),
                (1, false) => format!("{a}*x"),
                (_, true) => format!("x^{k}"),
                (_, false) => format!("{a}*x^{k}"),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sep}{sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Rational polynomial with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QPoly1(Vec<Rat>);

impl QPoly1 {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly1(c)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        QPoly1::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer(k.into()))
                .collect(),
        )
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &QPoly1) -> (QPoly1, QPoly1) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let mut q = vec![Rat::zero(); self.0.len().saturating_sub(dd)];
        let lead = d.0[dd].clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lead;
            for (j, c) in d.0.iter().enumerate() {
                r[k + j] -= &f * c;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (QPoly1::new(q), QPoly1::new(r))
    }

    pub fn rem(&self, d: &QPoly1) -> QPoly1 {
        self.div_rem(d).1
    }

    pub fn gcd(&self, other: &QPoly1) -> QPoly1 {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Clear denominators and return the primitive integer multiple.
    pub fn to_primitive_z(&self) -> ZPoly {
        let l = self.0.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        ZPoly::new(
            self.0
                .iter()
                .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
                .collect(),
        )
        .primitive()
    }

    /// `f / gcd(f, f')`, the product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> QPoly1 {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }
}

/// Square rational matrix, row major.
pub type QMat = Vec<Vec<Rat>>;

pub fn identity(n: usize) -> QMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    a[i].iter()
                        .zip(b)
                        .fold(Rat::zero(), |s, (x, row)| s + x * &row[j])
                })
                .collect()
        })
        .collect()
}

pub fn mat_add(a: &QMat, b: &QMat) -> QMat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn kron(a: &QMat, b: &QMat) -> QMat {
    let (n, m) = (a.len(), b.len());
    (0..n * m)
        .map(|i| {
            (0..n * m)
                .map(|j| &a[i / m][j / m] * &b[i % m][j % m])
                .collect()
        })
        .collect()
}

/// Companion matrix of `f`, whose eigenvalues are the roots of `f`.
pub fn companion(f: &ZPoly) -> QMat {
    let d = f.degree().expect("nonzero");
    let lead = Rat::from_integer(f.lead().clone());
    let mut m = vec![vec![Rat::zero(); d]; d];
    for i in 1..d {
        m[i][i - 1] = Rat::one();
    }
    for i in 0..d {
        m[i][d - 1] = -Rat::from_integer(f.coeffs()[i].clone()) / &lead;
    }
    m
}

/// Characteristic polynomial `det(x I - A)` by Faddeev-LeVerrier.
pub fn charpoly(a: &QMat) -> QPoly1 {
    let n = a.len();
    let mut c = vec![Rat::zero(); n + 1];
    c[n] = Rat::one();
    let mut m = vec![vec![Rat::zero(); n]; n];
    for k in 1..=n {
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m);
        let tr = (0..n).fold(Rat::zero(), |s, i| s + &am[i][i]);
        c[n - k] = -tr / Rat::from_integer(BigInt::from(k));
    }
    QPoly1::new(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_of_companion_recovers_monic_poly() {
        let f = ZPoly::from_i64(&[5, -3, 0, 1]);
        assert_eq!(charpoly(&companion(&f)).to_primitive_z(), f);
        let g = ZPoly::from_i64(&[1, 0, 4]);
        assert_eq!(charpoly(&companion(&g)).to_primitive_z(), g);
    }

    #[test]
    fn squarefree_part_of_a_power() {
        let f = ZPoly::from_i64(&[-2, 0, 1]).to_rat();
        let sq = QPoly1::new(vec![]);
        let _ = sq;
        let f3 = charpoly(&kron(
            &companion(&ZPoly::from_i64(&[-2, 0, 1])),
            &identity(3),
        ));
        assert_eq!(f3.squarefree_part().to_primitive_z(), f.to_primitive_z());
    }

    #[test]
    fn divisibility_and_display() {
        let f = ZPoly::from_i64(&[-1, 0, 1]);
        assert!(ZPoly::from_i64(&[1, 1]).divides(&f));
        assert!(!ZPoly::from_i64(&[2, 1]).divides(&f));
        assert_eq!(ZPoly::from_i64(&[-1, -1, 1]).to_string(), "x^2 - x - 1");
        assert_eq!(
            ZPoly::from_i64(&[0, -6, 0, 0]).primitive(),
            ZPoly::from_i64(&[0, 1])
        );
    }
}
