//! Multiprecision refinement of filling solutions.
//!
//! Shapes and coefficients are read as exact binary values, so the refined
//! point solves the same truncated equations as the double-precision solver.

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use super::{Branch, DehnError, FillingCoefficient, NZPotential, SolveOptions};

/// A filling solution at `prec` bits.
#[derive(Clone, Debug)]
pub struct MpFilling {
    pub prec: u32,
    pub u: Vec<Complex>,
    pub v: Vec<Complex>,
    /// Normalized holonomies, modulus above 1.
    pub t: Vec<Complex>,
    pub residual: Float,
    pub newton_iters: usize,
}

impl MpFilling {
    pub fn t_f64(&self) -> Vec<Complex64> {
        self.t.iter().map(to_c64).collect()
    }
}

pub fn to_c64(z: &Complex) -> Complex64 {
    Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

fn mpc(prec: u32, z: Complex64) -> Complex {
    Complex::with_val(prec, (z.re, z.im))
}

fn abs(z: &Complex) -> Float {
    z.clone().abs().real().clone()
}

fn v_mp(pot: &NZPotential, u: &[Complex], prec: u32) -> Vec<Complex> {
    let top = pot.trunc_degree();
    let pw: Vec<Vec<Complex>> = u
        .iter()
        .map(|z| {
            (0..=top)
                .map(|k| Complex::with_val(prec, z.pow(k)))
                .collect()
        })
        .collect();
    let mut v: Vec<Complex> = pot
        .shapes()
        .iter()
        .zip(u)
        .map(|(t, z)| mpc(prec, *t) * z)
        .collect();
    for (alpha, m) in pot.coefficients() {
        for j in 0..u.len() {
            if alpha[j] == 0 {
                continue;
            }
            let mut term = mpc(prec, *m) * (alpha[j] / 2);
            for (k, &a) in alpha.iter().enumerate() {
                let e = if k == j { a - 1 } else { a };
                term *= &pw[k][e as usize];
            }
            v[j] += term;
        }
    }
    v
}

fn dv_mp(pot: &NZPotential, u: &[Complex], prec: u32) -> Vec<Vec<Complex>> {
    let n = u.len();
    let top = pot.trunc_degree();
    let pw: Vec<Vec<Complex>> = u
        .iter()
        .map(|z| {
            (0..=top)
                .map(|k| Complex::with_val(prec, z.pow(k)))
                .collect()
        })
        .collect();
    let mut jac: Vec<Vec<Complex>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    if j == k {
                        mpc(prec, pot.shapes()[j])
                    } else {
                        Complex::new(prec)
                    }
                })
                .collect()
        })
        .collect();
    for (alpha, m) in pot.coefficients() {
        for j in 0..n {
            if alpha[j] == 0 {
                continue;
            }
            let mut beta = alpha.clone();
            beta[j] -= 1;
            for k in 0..n {
                if beta[k] == 0 {
                    continue;
                }
                let c = (alpha[j] / 2) * beta[k];
                let mut gamma = beta.clone();
                gamma[k] -= 1;
                let mut term = mpc(prec, *m) * c;
                for (l, &g) in gamma.iter().enumerate() {
                    term *= &pw[l][g as usize];
                }
                jac[j][k] += term;
            }
        }
    }
    jac
}

/// Gaussian elimination with partial pivoting. `None` on a zero pivot.
fn solve_linear(mut a: Vec<Vec<Complex>>, mut b: Vec<Complex>) -> Option<Vec<Complex>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| abs(&a[i][c]).partial_cmp(&abs(&a[j][c])).unwrap())?;
        if a[p][c].is_zero() {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for i in c + 1..n {
            let f = Complex::with_val(a[i][c].prec().0, &a[i][c] / &a[c][c]);
            for k in c..n {
                let d = Complex::with_val(a[i][k].prec().0, &f * &a[c][k]);
                a[i][k] -= d;
            }
            let d = Complex::with_val(b[i].prec().0, &f * &b[c]);
            b[i] -= d;
        }
    }
    let mut x = vec![Complex::new(b[0].prec().0); n];
    for c in (0..n).rev() {
        let mut acc = b[c].clone();
        for k in c + 1..n {
            acc -= Complex::with_val(acc.prec().0, &a[c][k] * &x[k]);
        }
        x[c] = acc / &a[c][c];
    }
    Some(x)
}

/// Newton refinement from `start` (typically the double-precision solution)
/// until the residual drops below `2^(16 - prec)`.
pub fn refine_filling(
    pot: &NZPotential,
    c: &FillingCoefficient,
    branch: Branch,
    start: &[Complex64],
    prec: u32,
) -> Result<MpFilling, DehnError> {
    let n = pot.n_cusps();
    if c.slopes.len() != n || start.len() != n {
        return Err(DehnError::CuspCount {
            expected: n,
            got: c.slopes.len(),
        });
    }
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let rhs = match branch {
        Branch::Plus => Complex::with_val(prec, (Float::new(prec), two_pi)),
        Branch::Minus => Complex::with_val(prec, (Float::new(prec), -two_pi)),
    };
    let target = Float::with_val(prec, Float::i_exp(1, 16 - prec as i32));
    let residual = |u: &[Complex]| -> (Vec<Complex>, Float) {
        let v = v_mp(pot, u, prec);
        let f: Vec<Complex> = c
            .slopes
            .iter()
            .zip(u.iter().zip(&v))
            .map(|(sl, (ui, vi))| {
                Complex::with_val(prec, ui * sl.p) + Complex::with_val(prec, vi * sl.q) - &rhs
            })
            .collect();
        let norm = f
            .iter()
            .map(abs)
            .fold(Float::new(prec), |a, b| if b > a { b } else { a });
        (f, norm)
    };
    let mut u: Vec<Complex> = start.iter().map(|z| mpc(prec, *z)).collect();
    let (mut f, mut norm) = residual(&u);
    let max_iter = 64;
    let mut iters = 0;
    while norm > target {
        if iters == max_iter {
            return Err(DehnError::NewtonDiverged {
                iters,
                residual: norm.to_f64(),
            });
        }
        let dv = dv_mp(pot, &u, prec);
        let jac: Vec<Vec<Complex>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| {
                        let mut e = Complex::with_val(prec, &dv[i][k] * c.slopes[i].q);
                        if i == k {
                            e += c.slopes[i].p;
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        let neg: Vec<Complex> = f.iter().map(|z| Complex::with_val(prec, -z)).collect();
        let step = solve_linear(jac, neg).ok_or(DehnError::NewtonDiverged {
            iters,
            residual: norm.to_f64(),
        })?;
        for (ui, di) in u.iter_mut().zip(step) {
            *ui += di;
        }
        (f, norm) = residual(&u);
        if !norm.is_finite() {
            return Err(DehnError::NewtonDiverged {
                iters,
                residual: f64::INFINITY,
            });
        }
        iters += 1;
    }
    let v = v_mp(pot, &u, prec);
    let t = c
        .slopes
        .iter()
        .zip(u.iter().zip(&v))
        .map(|(sl, (ui, vi))| {
            let e = Complex::with_val(prec, ui * sl.r) + Complex::with_val(prec, vi * sl.s);
            let t = e.exp();
            if abs(&t) < 1 {
                t.recip()
            } else {
                t
            }
        })
        .collect();
    Ok(MpFilling {
        prec,
        u,
        v,
        t,
        residual: norm,
        newton_iters: iters,
    })
}

/// Double-precision solve followed by refinement to `prec` bits.
pub fn solve_filling_mp(
    pot: &NZPotential,
    c: &FillingCoefficient,
    branch: Branch,
    prec: u32,
) -> Result<MpFilling, DehnError> {
    let opts = SolveOptions {
        branch,
        ..SolveOptions::default()
    };
    let start = super::solve_filling_with(pot, c, &opts)?;
    refine_filling(pot, c, branch, &start.u, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn refinement_agrees_with_double_solution() {
        let mut m = BTreeMap::new();
        m.insert(vec![4, 0], Complex64::new(0.05, 0.01));
        m.insert(vec![2, 2], Complex64::new(-0.02, 0.03));
        let pot = NZPotential::new(
            vec![Complex64::new(0.2, 1.1), Complex64::new(-0.1, 0.8)],
            m,
            8,
        )
        .unwrap();
        let c = FillingCoefficient::from_pairs(&[(15, 4), (-11, 13)]).unwrap();
        let lo = super::super::solve_filling(&pot, &c).unwrap();
        let hi = solve_filling_mp(&pot, &c, Branch::Plus, 256).unwrap();
        assert!(hi.residual < Float::with_val(256, Float::i_exp(1, -230)));
        for (a, b) in lo.t.iter().zip(hi.t_f64()) {
            assert!((a - b).norm() < 1e-9 * a.norm());
        }
    }

    #[test]
    fn quadratic_meridian_is_exact() {
        let pot = NZPotential::quadratic(vec![Complex64::new(0.0, 1.0)]).unwrap();
        let c = FillingCoefficient::new(vec![super::super::Slope::with_dual(1, 0, 0, 1).unwrap()]);
        let r = solve_filling_mp(&pot, &c, Branch::Plus, 200).unwrap();
        let two_pi = Float::with_val(200, Constant::Pi) * 2u32;
        let want = two_pi.exp();
        let err = Float::with_val(200, r.t[0].real() - &want).abs() / &want;
        assert!(err < Float::with_val(200, Float::i_exp(1, -180)));
    }
}
