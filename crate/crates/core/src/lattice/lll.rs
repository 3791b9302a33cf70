//! Integral LLL: Gram-Schmidt data kept as integers `d_i` and `lambda_ij`,
//! so there is no rounding anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `n / d` for `d > 0`, halves rounded up.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * two))
}

struct State {
    b: Vec<Vec<BigInt>>,
    // 1-based: d[0] = 1, d[i] for basis vector i - 1.
    d: Vec<BigInt>,
    // lam[k][j] for j < k, 0-based vector indices.
    lam: Vec<Vec<BigInt>>,
}

impl State {
    fn red(&mut self, k: usize, l: usize) {
        let dl = &self.d[l + 1];
        if BigInt::from(2) * self.lam[k][l].abs() <= *dl {
            return;
        }
        let q = round_div(&self.lam[k][l], dl);
        let bl = self.b[l].clone();
        for (x, y) in self.b[k].iter_mut().zip(&bl) {
            *x -= &q * y;
        }
        self.lam[k][l] -= &q * dl;
        for i in 0..l {
            let t = &q * &self.lam[l][i];
            self.lam[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k, k - 1);
        for j in 0..k - 1 {
            let t = self.lam[k][j].clone();
            self.lam[k][j] = self.lam[k - 1][j].clone();
            self.lam[k - 1][j] = t;
        }
        let lam = self.lam[k][k - 1].clone();
        let (dk2, dk1, dk) = (
            self.d[k - 1].clone(),
            self.d[k].clone(),
            self.d[k + 1].clone(),
        );
        let bb = (&dk2 * &dk + &lam * &lam) / &dk1;
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&dk * &self.lam[i][k - 1] - &lam * &t) / &dk1;
            self.lam[i][k - 1] = (&bb * &t + &lam * &self.lam[i][k]) / &dk;
        }
        self.d[k] = bb;
    }
}

/// LLL-reduce linearly independent integer vectors with parameter
/// `delta = num / den`. Returns `None` if the vectors are dependent.
pub fn lll_reduce(basis: Vec<Vec<BigInt>>, num: u32, den: u32) -> Option<Vec<Vec<BigInt>>> {
    let n = basis.len();
    if n <= 1 {
        return (n == 0 || basis[0].iter().any(|x| !x.is_zero())).then_some(basis);
    }
    let mut s = State {
        d: vec![BigInt::from(1); n + 1],
        lam: vec![vec![BigInt::zero(); n]; n],
        b: basis,
    };
    s.d[1] = dot(&s.b[0], &s.b[0]);
    if s.d[1].is_zero() {
        return None;
    }
    let (p, q) = (BigInt::from(num), BigInt::from(den));
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&s.b[k], &s.b[j]);
                for i in 0..j {
                    u = (&s.d[i + 1] * &u - &s.lam[k][i] * &s.lam[j][i]) / &s.d[i];
                }
                if j < k {
                    s.lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return None;
                    }
                    s.d[k + 1] = u;
                }
            }
        }
        s.red(k, k - 1);
        let lam = &s.lam[k][k - 1];
        // d_k d_{k-2} < delta d_{k-1}^2 - lambda^2
        let lhs = &q * (&s.d[k + 1] * &s.d[k - 1] + lam * lam);
        let rhs = &p * &s.d[k] * &s.d[k];
        if lhs < rhs {
            s.swap(k, kmax);
            k = k.saturating_sub(1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                s.red(k, l);
            }
            k += 1;
        }
    }
    Some(s.b)
}
