use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::DehnError;

/// Default radius inside which the truncated series is trusted.
pub const DEFAULT_TRUST_RADIUS: f64 = 0.5;
/// Default truncation degree.
pub const DEFAULT_TRUNCATION: u32 = 8;

/// Truncated Neumann-Zagier potential
/// `Phi(u) = sum_i t_i u_i^2 + sum_a m_a u^a`, with `t_i` the cusp shapes and
/// every exponent `a` even in each slot with `4 <= |a| <= trunc_degree`.
/// The conjugate coordinates are `v_i = (1/2) dPhi/du_i`.
#[derive(Clone, PartialEq, Debug)]
pub struct NZPotential {
    shapes: Vec<Complex64>,
    coefficients: BTreeMap<Vec<u32>, Complex64>,
    trunc_degree: u32,
    trust_radius: f64,
}

/// Check one exponent vector against the potential's structural rules.
pub(crate) fn check_exponent(alpha: &[u32], n: usize, trunc: u32) -> Result<(), DehnError> {
    if alpha.len() != n {
        return Err(DehnError::InvalidPotential(format!(
            "exponent {alpha:?} has length {}, expected {n}",
            alpha.len()
        )));
    }
    if alpha.iter().any(|a| a % 2 == 1) {
        return Err(DehnError::InvalidPotential(format!(
            "exponent {alpha:?} has an odd entry"
        )));
    }
    let deg: u32 = alpha.iter().sum();
    match deg {
        0 => Err(DehnError::InvalidPotential(
            "constant term is not allowed".into(),
        )),
        2 => Err(DehnError::InvalidPotential(format!(
            "quadratic exponent {alpha:?}: the quadratic part is given by the shapes"
        ))),
        d if d > trunc => Err(DehnError::InvalidPotential(format!(
            "exponent {alpha:?} has degree {d} above truncation {trunc}"
        ))),
        _ => Ok(()),
    }
}

impl NZPotential {
    /// Validate and build. The trust radius defaults to
    /// [`DEFAULT_TRUST_RADIUS`], or infinity when there are no higher terms.
    pub fn new(
        shapes: Vec<Complex64>,
        coefficients: BTreeMap<Vec<u32>, Complex64>,
        trunc_degree: u32,
    ) -> Result<Self, DehnError> {
        let n = shapes.len();
        if n == 0 {
            return Err(DehnError::InvalidPotential(
                "at least one cusp is required".into(),
            ));
        }
        if trunc_degree < 4 || trunc_degree % 2 == 1 {
            return Err(DehnError::InvalidPotential(format!(
                "truncation degree {trunc_degree} must be even and at least 4"
            )));
        }
        for (i, t) in shapes.iter().enumerate() {
            if t.im == 0.0 || !t.re.is_finite() || !t.im.is_finite() {
                return Err(DehnError::InvalidPotential(format!(
                    "shape {} = {t} is not a non-real number",
                    i + 1
                )));
            }
        }
        for (alpha, m) in &coefficients {
            check_exponent(alpha, n, trunc_degree)?;
            if !m.re.is_finite() || !m.im.is_finite() {
                return Err(DehnError::InvalidPotential(format!(
                    "coefficient of {alpha:?} is not finite"
                )));
            }
        }
        let trust_radius = if coefficients.is_empty() {
            f64::INFINITY
        } else {
            DEFAULT_TRUST_RADIUS
        };
        Ok(NZPotential {
            shapes,
            coefficients,
            trunc_degree,
            trust_radius,
        })
    }

    /// Pure quadratic potential `sum_i t_i u_i^2`.
    pub fn quadratic(shapes: Vec<Complex64>) -> Result<Self, DehnError> {
        Self::new(shapes, BTreeMap::new(), DEFAULT_TRUNCATION)
    }

    pub fn with_trust_radius(mut self, r: f64) -> Result<Self, DehnError> {
        if r.is_nan() || r <= 0.0 {
            return Err(DehnError::InvalidPotential(format!(
                "trust radius {r} must be positive"
            )));
        }
        self.trust_radius = r;
        Ok(self)
    }

    pub fn n_cusps(&self) -> usize {
        self.shapes.len()
    }

    pub fn shapes(&self) -> &[Complex64] {
        &self.shapes
    }

    pub fn coefficients(&self) -> &BTreeMap<Vec<u32>, Complex64> {
        &self.coefficients
    }

    pub fn trunc_degree(&self) -> u32 {
        self.trunc_degree
    }

    pub fn trust_radius(&self) -> f64 {
        self.trust_radius
    }

    pub fn is_quadratic(&self) -> bool {
        self.coefficients
            .values()
            .all(|m| *m == Complex64::new(0.0, 0.0))
    }

    pub(crate) fn check_trust(&self, u: &[Complex64]) -> Result<(), DehnError> {
        assert_eq!(u.len(), self.n_cusps(), "point has wrong dimension");
        let norm = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(norm <= self.trust_radius) {
            return Err(DehnError::OutOfTrustRadius {
                norm,
                radius: self.trust_radius,
            });
        }
        Ok(())
    }

    fn powers(&self, u: &[Complex64]) -> Vec<Vec<Complex64>> {
        let top = self.trunc_degree as usize;
        u.iter()
            .map(|&z| {
                let mut p = Vec::with_capacity(top + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=top {
                    p.push(acc);
                    acc *= z;
                }
                p
            })
            .collect()
    }

    fn monomial(pw: &[Vec<Complex64>], alpha: &[u32]) -> Complex64 {
        alpha
            .iter()
            .enumerate()
            .fold(Complex64::new(1.0, 0.0), |acc, (i, &a)| {
                acc * pw[i][a as usize]
            })
    }

    /// `Phi(u)` at truncation order. No trust-radius check.
    pub fn phi(&self, u: &[Complex64]) -> Complex64 {
        let pw = self.powers(u);
        let quad: Complex64 = self.shapes.iter().zip(u).map(|(t, z)| t * z * z).sum();
        quad + self
            .coefficients
            .iter()
            .map(|(a, m)| m * Self::monomial(&pw, a))
            .sum::<Complex64>()
    }

    /// `v(u)` at truncation order. No trust-radius check.
    pub fn v_unchecked(&self, u: &[Complex64]) -> Vec<Complex64> {
        let pw = self.powers(u);
        let mut v: Vec<Complex64> = self.shapes.iter().zip(u).map(|(t, z)| t * z).collect();
        let mut beta = vec![0u32; u.len()];
        for (alpha, m) in &self.coefficients {
            for j in 0..u.len() {
                if alpha[j] == 0 {
                    continue;
                }
                beta.copy_from_slice(alpha);
                beta[j] -= 1;
                v[j] += m * Self::monomial(&pw, &beta) * (0.5 * alpha[j] as f64);
            }
        }
        v
    }

    /// `v(u)`, rejecting points outside the trust radius.
    pub fn v_of_u(&self, u: &[Complex64]) -> Result<Vec<Complex64>, DehnError> {
        self.check_trust(u)?;
        Ok(self.v_unchecked(u))
    }

    /// Jacobian `dv_j / du_k` at truncation order.
    pub fn dv_du(&self, u: &[Complex64]) -> DMatrix<Complex64> {
        let n = u.len();
        let pw = self.powers(u);
        let mut jac = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for j in 0..n {
            jac[(j, j)] = self.shapes[j];
        }
        let mut beta = vec![0u32; n];
        for (alpha, m) in &self.coefficients {
            for j in 0..n {
                if alpha[j] == 0 {
                    continue;
                }
                for k in 0..n {
                    beta.copy_from_slice(alpha);
                    beta[j] -= 1;
                    if beta[k] == 0 {
                        continue;
                    }
                    let c = 0.5 * alpha[j] as f64 * beta[k] as f64;
                    beta[k] -= 1;
                    jac[(j, k)] += m * Self::monomial(&pw, &beta) * c;
                }
            }
        }
        jac
    }

    /// Bound on the first omitted Taylor degree of `v` at radius `r`,
    /// assuming the next coefficients obey the same geometric decay as the
    /// stored top-degree ones.
    pub fn tail_estimate(&self, r: f64) -> f64 {
        let top = self.trunc_degree;
        let top_max = self
            .coefficients
            .iter()
            .filter(|(a, _)| a.iter().sum::<u32>() == top)
            .map(|(_, m)| m.norm())
            .fold(0.0, f64::max);
        let prev_max = self
            .coefficients
            .iter()
            .filter(|(a, _)| a.iter().sum::<u32>() == top - 2)
            .map(|(_, m)| m.norm())
            .fold(0.0, f64::max);
        if top_max == 0.0 {
            return 0.0;
        }
        let ratio = if prev_max > 0.0 {
            top_max / prev_max
        } else {
            1.0
        };
        let next = top_max * ratio;
        let count = self.monomials_of_degree(top + 2) as f64;
        0.5 * (top + 2) as f64 * count * next * r.powi(top as i32 + 1)
    }

    fn monomials_of_degree(&self, d: u32) -> u64 {
        // Even exponents summing to d: compositions of d/2 into n parts.
        let k = (d / 2) as u64;
        let n = self.n_cusps() as u64;
        binomial(k + n - 1, n - 1)
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// True iff no stored coefficient mixes the two cusps with a nonzero value.
pub fn sgi_check(pot: &NZPotential) -> Result<bool, DehnError> {
    if pot.n_cusps() != 2 {
        return Err(DehnError::CuspCount {
            expected: 2,
            got: pot.n_cusps(),
        });
    }
    Ok(pot
        .coefficients
        .iter()
        .all(|(a, m)| !(a[0] > 0 && a[1] > 0) || *m == Complex64::new(0.0, 0.0)))
}

/// Tolerance for the collapse recurrence on complex coefficients.
pub const COLLAPSE_TOL: f64 = 1e-12;

/// True iff `(i+2)(i+1) m[i+2, k-i-2] = (k-i)(k-i-1) m[i, k-i]` for all even
/// `k <= trunc` and even `i <= k-2`, i.e. the higher part of the potential
/// is a series in `u_1 - u_2` (restricted to even-even monomials).
pub fn difference_collapse_check(pot: &NZPotential) -> Result<bool, DehnError> {
    if pot.n_cusps() != 2 {
        return Err(DehnError::CuspCount {
            expected: 2,
            got: pot.n_cusps(),
        });
    }
    let coef = |i: u32, j: u32| {
        pot.coefficients
            .get(&vec![i, j])
            .copied()
            .unwrap_or_default()
    };
    for k in (4..=pot.trunc_degree).step_by(2) {
        for i in (0..=k - 2).step_by(2) {
            let lhs = coef(i + 2, k - i - 2) * ((i + 2) * (i + 1)) as f64;
            let rhs = coef(i, k - i) * ((k - i) * (k - i - 1)) as f64;
            let scale = 1.0f64.max(lhs.norm()).max(rhs.norm());
            if (lhs - rhs).norm() > COLLAPSE_TOL * scale {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_cusp(coeffs: &[([u32; 2], Complex64)]) -> NZPotential {
        let map = coeffs.iter().map(|(a, m)| (a.to_vec(), *m)).collect();
        NZPotential::new(vec![c(0.3, 1.1), c(-0.2, 0.9)], map, 8).unwrap()
    }

    #[test]
    fn v_vanishes_at_origin() {
        let p = two_cusp(&[([2, 2], c(0.05, -0.02)), ([4, 0], c(0.01, 0.0))]);
        assert_eq!(
            p.v_of_u(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap(),
            vec![c(0.0, 0.0); 2]
        );
    }

    #[test]
    fn pure_quadratic_v_is_linear() {
        let p = NZPotential::quadratic(vec![c(0.0, 1.0)]).unwrap();
        let x = c(0.3, -0.7);
        assert_eq!(p.v_of_u(&[x]).unwrap(), vec![c(0.0, 1.0) * x]);
    }

    #[test]
    fn mixed_term_derivative_by_hand() {
        let m = c(0.07, 0.03);
        let p = two_cusp(&[([2, 2], m)]);
        let u = [c(0.2, 0.1), c(-0.15, 0.05)];
        let v = p.v_of_u(&u).unwrap();
        let expect1 = p.shapes()[0] * u[0] + m * u[0] * u[1] * u[1];
        let expect2 = p.shapes()[1] * u[1] + m * u[0] * u[0] * u[1];
        assert!((v[0] - expect1).norm() < 1e-15);
        assert!((v[1] - expect2).norm() < 1e-15);
    }

    #[test]
    fn trust_radius_enforced() {
        let p = two_cusp(&[([4, 0], c(0.01, 0.0))]);
        assert!(matches!(
            p.v_of_u(&[c(0.6, 0.0), c(0.0, 0.0)]),
            Err(DehnError::OutOfTrustRadius { .. })
        ));
    }

    #[test]
    fn structural_validation() {
        let bad = |alpha: Vec<u32>| {
            let mut m = BTreeMap::new();
            m.insert(alpha, c(1.0, 0.0));
            NZPotential::new(vec![c(0.0, 1.0), c(0.0, 2.0)], m, 8)
        };
        assert!(bad(vec![3, 1]).is_err());
        assert!(bad(vec![0, 0]).is_err());
        assert!(bad(vec![2, 0]).is_err());
        assert!(bad(vec![10, 0]).is_err());
        assert!(bad(vec![4]).is_err());
        assert!(NZPotential::quadratic(vec![c(1.0, 0.0)]).is_err());
        assert!(NZPotential::new(vec![c(0.0, 1.0)], BTreeMap::new(), 5).is_err());
    }

    #[test]
    fn sgi_examples() {
        assert!(sgi_check(&two_cusp(&[([4, 0], c(1.0, 0.0)), ([0, 4], c(2.0, 0.0))])).unwrap());
        assert!(!sgi_check(&two_cusp(&[([2, 2], c(0.1, 0.0))])).unwrap());
        assert!(sgi_check(&two_cusp(&[])).unwrap());
        assert!(sgi_check(&two_cusp(&[([2, 2], c(0.0, 0.0))])).unwrap());
    }

    #[test]
    fn collapse_examples() {
        let p = NZPotential::new(
            vec![c(0.0, 1.0), c(0.0, 2.0)],
            [([4, 0], 1.0), ([2, 2], 6.0), ([0, 4], 1.0)]
                .iter()
                .map(|(a, m)| (a.to_vec(), c(*m, 0.0)))
                .collect(),
            4,
        )
        .unwrap();
        assert!(difference_collapse_check(&p).unwrap());
        assert!(!difference_collapse_check(&two_cusp(&[([2, 2], c(1.0, 0.0))])).unwrap());
        assert!(difference_collapse_check(&two_cusp(&[])).unwrap());
    }

    #[test]
    fn predicates_need_two_cusps() {
        let p = NZPotential::quadratic(vec![c(0.0, 1.0)]).unwrap();
        assert!(sgi_check(&p).is_err());
        assert!(difference_collapse_check(&p).is_err());
    }
}
