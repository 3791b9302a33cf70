use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use super::{DehnError, NZPotential};

/// A filling slope `p/q` on one cusp with a chosen dual pair `(r, s)`,
/// `-q r + p s = 1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
}

impl Slope {
    /// Coprime `(p, q)` with the dual pair from the extended gcd.
    pub fn new(p: i64, q: i64) -> Result<Self, DehnError> {
        let e = p.extended_gcd(&q);
        if e.gcd != 1 {
            return Err(DehnError::NotCoprime { p, q });
        }
        // p x + q y = 1, so s = x and r = -y.
        Ok(Slope {
            p,
            q,
            r: -e.y,
            s: e.x,
        })
    }

    pub fn with_dual(p: i64, q: i64, r: i64, s: i64) -> Result<Self, DehnError> {
        if p.gcd(&q) != 1 {
            return Err(DehnError::NotCoprime { p, q });
        }
        if -q * r + p * s != 1 {
            return Err(DehnError::BadDualPair { p, q, r, s });
        }
        Ok(Slope { p, q, r, s })
    }

    /// The other valid dual pair `(r + k p, s + k q)`.
    pub fn shifted(self, k: i64) -> Self {
        Slope {
            r: self.r + k * self.p,
            s: self.s + k * self.q,
            ..self
        }
    }

    /// Representative of `+-(p, q)` with `q > 0`, or `(1, 0)`.
    pub fn canonical(self) -> Self {
        if self.q < 0 || (self.q == 0 && self.p < 0) {
            Slope {
                p: -self.p,
                q: -self.q,
                r: -self.r,
                s: -self.s,
            }
        } else {
            self
        }
    }

    pub fn size(&self) -> i64 {
        self.p.abs() + self.q.abs()
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = DehnError;

    /// Parses `p/q`.
    fn from_str(s: &str) -> Result<Self, DehnError> {
        let bad = || DehnError::Parse(format!("expected p/q, got {s:?}"));
        let (a, b) = s.trim().split_once('/').ok_or_else(bad)?;
        let p = a.trim().parse().map_err(|_| bad())?;
        let q = b.trim().parse().map_err(|_| bad())?;
        Slope::new(p, q)
    }
}

/// One slope per cusp.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct FillingCoefficient {
    pub slopes: Vec<Slope>,
}

impl FillingCoefficient {
    pub fn new(slopes: Vec<Slope>) -> Self {
        FillingCoefficient { slopes }
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self, DehnError> {
        Ok(FillingCoefficient {
            slopes: pairs
                .iter()
                .map(|&(p, q)| Slope::new(p, q))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Parses `p/q[,p/q...]`.
    pub fn parse(s: &str) -> Result<Self, DehnError> {
        Ok(FillingCoefficient {
            slopes: s.split(',').map(str::parse).collect::<Result<_, _>>()?,
        })
    }

    pub fn canonical(&self) -> Self {
        FillingCoefficient {
            slopes: self.slopes.iter().map(|s| s.canonical()).collect(),
        }
    }
}

impl fmt::Display for FillingCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.slopes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Right-hand side of the log-form filling equation `p u + q v = +-2 pi i`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    pub fn rhs(self) -> Complex64 {
        match self {
            Branch::Plus => Complex64::new(0.0, 2.0 * PI),
            Branch::Minus => Complex64::new(0.0, -2.0 * PI),
        }
    }
}

/// Newton settings for the filling equations.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub branch: Branch,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            branch: Branch::Plus,
            tol: 1e-12,
            max_iter: 60,
        }
    }
}

/// Solution of the filling equations.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct FillingResult {
    pub coefficient: FillingCoefficient,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    /// Core holonomies normalized to modulus above 1.
    pub t: Vec<Complex64>,
    /// `exp(r u + s v)` before normalization.
    pub t_raw: Vec<Complex64>,
    pub residual: f64,
    pub newton_iters: usize,
}

fn residual_vec(
    pot: &NZPotential,
    c: &FillingCoefficient,
    u: &[Complex64],
    rhs: Complex64,
) -> Vec<Complex64> {
    let v = pot.v_unchecked(u);
    c.slopes
        .iter()
        .zip(u.iter().zip(&v))
        .map(|(sl, (ui, vi))| ui * sl.p as f64 + vi * sl.q as f64 - rhs)
        .collect()
}

fn max_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Holonomies from `(u, v)`: raw and normalized to modulus above 1.
pub fn holonomies(
    c: &FillingCoefficient,
    u: &[Complex64],
    v: &[Complex64],
) -> (Vec<Complex64>, Vec<Complex64>) {
    let raw: Vec<Complex64> = c
        .slopes
        .iter()
        .zip(u.iter().zip(v))
        .map(|(sl, (ui, vi))| (ui * sl.r as f64 + vi * sl.s as f64).exp())
        .collect();
    let norm = raw
        .iter()
        .map(|t| if t.norm() < 1.0 { t.inv() } else { *t })
        .collect();
    (raw, norm)
}

/// Initial guess `2 pi i / (p + q t)` per cusp, from the quadratic part.
pub fn initial_guess(pot: &NZPotential, c: &FillingCoefficient, branch: Branch) -> Vec<Complex64> {
    c.slopes
        .iter()
        .zip(pot.shapes())
        .map(|(sl, tau)| branch.rhs() / (tau * sl.q as f64 + sl.p as f64))
        .collect()
}

/// Solve `p_i u_i + q_i v_i(u) = 2 pi i` by Newton's method from the
/// quadratic-part solution.
pub fn solve_filling(
    pot: &NZPotential,
    c: &FillingCoefficient,
) -> Result<FillingResult, DehnError> {
    solve_filling_with(pot, c, &SolveOptions::default())
}

pub fn solve_filling_with(
    pot: &NZPotential,
    c: &FillingCoefficient,
    opts: &SolveOptions,
) -> Result<FillingResult, DehnError> {
    let n = pot.n_cusps();
    if c.slopes.len() != n {
        return Err(DehnError::CuspCount {
            expected: n,
            got: c.slopes.len(),
        });
    }
    let rhs = opts.branch.rhs();
    let mut u = initial_guess(pot, c, opts.branch);
    pot.check_trust(&u)?;
    let mut f = residual_vec(pot, c, &u, rhs);
    let mut iters = 0;
    while max_norm(&f) >= opts.tol {
        if iters == opts.max_iter {
            return Err(DehnError::NewtonDiverged {
                iters,
                residual: max_norm(&f),
            });
        }
        let dv = pot.dv_du(&u);
        let jac = DMatrix::from_fn(n, n, |i, k| {
            let diag = if i == k {
                Complex64::new(c.slopes[i].p as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            diag + dv[(i, k)] * c.slopes[i].q as f64
        });
        let step = jac
            .lu()
            .solve(&DVector::from_vec(f.iter().map(|z| -z).collect()))
            .ok_or(DehnError::NewtonDiverged {
                iters,
                residual: max_norm(&f),
            })?;
        for (ui, di) in u.iter_mut().zip(step.iter()) {
            *ui += di;
        }
        if !u.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(DehnError::NewtonDiverged {
                iters,
                residual: f64::INFINITY,
            });
        }
        f = residual_vec(pot, c, &u, rhs);
        iters += 1;
    }
    pot.check_trust(&u)?;
    let v = pot.v_unchecked(&u);
    let (t_raw, t) = holonomies(c, &u, &v);
    Ok(FillingResult {
        coefficient: c.clone(),
        u,
        v,
        t,
        t_raw,
        residual: max_norm(&f),
        newton_iters: iters,
    })
}

/// Exact solution for a pure quadratic potential: `u = 2 pi i / (p + q t)`,
/// `log T = (r + s t) u`, normalized to modulus above 1.
pub fn closed_form_quadratic(tau: Complex64, slope: Slope, branch: Branch) -> Complex64 {
    let u = branch.rhs() / (tau * slope.q as f64 + slope.p as f64);
    let t = ((tau * slope.s as f64 + slope.r as f64) * u).exp();
    if t.norm() < 1.0 {
        t.inv()
    } else {
        t
    }
}

/// The holonomies `{t_1, ..., t_n}` of a solution.
pub fn core_holonomy_set(result: &FillingResult) -> Vec<Complex64> {
    result.t.clone()
}

/// Multiset equality of holonomy sets up to `tol` in each entry.
pub fn holonomy_sets_equal(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    fn go(a: &[Complex64], b: &[Complex64], used: &mut Vec<bool>, tol: f64) -> bool {
        let Some((x, rest)) = a.split_first() else {
            return true;
        };
        for j in 0..b.len() {
            if !used[j] && (x - b[j]).norm() <= tol {
                used[j] = true;
                if go(rest, b, used, tol) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(a, b, &mut vec![false; b.len()], tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn dual_pair_identity() {
        for (p, q) in [(5, 3), (-2, 7), (1, 0), (0, 1), (-1, -4)] {
            let s = Slope::new(p, q).unwrap();
            assert_eq!(-s.q * s.r + s.p * s.s, 1);
            let t = s.shifted(3);
            assert_eq!(-t.q * t.r + t.p * t.s, 1);
        }
        assert!(Slope::new(4, 6).is_err());
        assert!(Slope::with_dual(1, 0, 0, 2).is_err());
    }

    #[test]
    fn parse_slopes() {
        let c = FillingCoefficient::parse("5/3,-1/2").unwrap();
        assert_eq!(c.slopes.len(), 2);
        assert_eq!((c.slopes[1].p, c.slopes[1].q), (-1, 2));
        assert!(FillingCoefficient::parse("5").is_err());
        assert!(FillingCoefficient::parse("2/4").is_err());
    }

    #[test]
    fn meridian_filling_of_square_torus() {
        let pot = NZPotential::quadratic(vec![Complex64::new(0.0, 1.0)]).unwrap();
        let c = FillingCoefficient::new(vec![Slope::with_dual(1, 0, 0, 1).unwrap()]);
        let res = solve_filling(&pot, &c).unwrap();
        assert!((res.u[0] - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-12);
        assert!((res.v[0] - Complex64::new(-2.0 * PI, 0.0)).norm() < 1e-12);
        let expect = (2.0 * PI).exp();
        assert!((res.t[0] - Complex64::new(expect, 0.0)).norm() < 1e-9 * expect);
    }

    #[test]
    fn newton_handles_higher_terms() {
        let mut m = BTreeMap::new();
        m.insert(vec![4], Complex64::new(0.05, 0.02));
        m.insert(vec![6], Complex64::new(-0.003, 0.001));
        let pot = NZPotential::new(vec![Complex64::new(0.1, 1.3)], m, 8).unwrap();
        let c = FillingCoefficient::from_pairs(&[(17, 9)]).unwrap();
        let res = solve_filling(&pot, &c).unwrap();
        assert!(res.residual < 1e-12);
        assert!(res.t[0].norm() > 1.0);
        assert!(res.newton_iters > 0);
    }

    #[test]
    fn small_slopes_leave_trust_radius() {
        let mut m = BTreeMap::new();
        m.insert(vec![4], Complex64::new(0.05, 0.0));
        let pot = NZPotential::new(vec![Complex64::new(0.0, 1.0)], m, 8).unwrap();
        let c = FillingCoefficient::from_pairs(&[(1, 1)]).unwrap();
        assert!(matches!(
            solve_filling(&pot, &c),
            Err(DehnError::OutOfTrustRadius { .. })
        ));
    }

    #[test]
    fn set_equality_ignores_order() {
        let a = [Complex64::new(1.0, 2.0), Complex64::new(3.0, 0.0)];
        let b = [Complex64::new(3.0, 1e-10), Complex64::new(1.0, 2.0)];
        assert!(holonomy_sets_equal(&a, &b, 1e-8));
        assert!(!holonomy_sets_equal(&a, &b[..1], 1e-8));
    }
}
