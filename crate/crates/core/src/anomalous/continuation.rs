use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{AnomalousError, CascadeOutcome, Result, SubgroupSpec};
use crate::nzdehn::{DehnError, NZPotential};

/// Bound on `|u_i|` and `|v_i|` for a traced point to count as lying in
/// `M_i = L_i = 1`.
pub const CONTINUATION_TOL: f64 = 1e-9;

const RESIDUAL_TOL: f64 = 1e-13;
const MAX_ITER: usize = 200;
const STEP_MIN: f64 = 0.02;
const STEP_MAX: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuationReport {
    pub holds: bool,
    /// Dimension of the Jacobian kernel at the complete structure.
    pub kernel_dim: usize,
    pub samples: usize,
    /// Largest `max(|u_i|, |v_i|)` over the traced points.
    pub worst: f64,
    /// Smallest `|u|` over the traced points, to show they left the origin.
    pub min_norm: f64,
}

struct System {
    a: DMatrix<Complex64>,
    b: DMatrix<Complex64>,
}

impl System {
    fn new(spec: &SubgroupSpec) -> Self {
        let rows = spec.rows();
        let n = spec.n_cusps();
        let get = |r: usize, c: usize| {
            Complex64::new(rows.get(r, c).to_f64().expect("small entries"), 0.0)
        };
        let a = DMatrix::from_fn(rows.rows(), n, |r, j| get(r, 2 * j));
        let b = DMatrix::from_fn(rows.rows(), n, |r, j| get(r, 2 * j + 1));
        System { a, b }
    }

    fn f(&self, pot: &NZPotential, u: &DVector<Complex64>) -> DVector<Complex64> {
        let v = DVector::from_vec(pot.v_unchecked(u.as_slice()));
        &self.a * u + &self.b * v
    }

    fn jac(&self, pot: &NZPotential, u: &DVector<Complex64>) -> DMatrix<Complex64> {
        &self.a + &self.b * pot.dv_du(u.as_slice())
    }
}

fn padded_svd(m: &DMatrix<Complex64>) -> nalgebra::SVD<Complex64, nalgebra::Dyn, nalgebra::Dyn> {
    let n = m.ncols();
    let rows = m.nrows().max(n);
    let mut p = DMatrix::from_element(rows, n, Complex64::new(0.0, 0.0));
    p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    p.svd(true, true)
}

fn norm_inf(x: &DVector<Complex64>) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Gauss-Newton with minimum-norm steps onto the zero set of the system.
fn project(
    sys: &System,
    pot: &NZPotential,
    mut u: DVector<Complex64>,
) -> std::result::Result<DVector<Complex64>, DehnError> {
    let mut f = sys.f(pot, &u);
    for iters in 0..MAX_ITER {
        if norm_inf(&f) < RESIDUAL_TOL {
            return Ok(u);
        }
        let j = sys.jac(pot, &u);
        let svd = padded_svd(&j);
        let smax = svd.singular_values.max();
        let eps = 1e-10 * smax.max(1.0);
        // Pad the residual to match the padded Jacobian.
        let mut fp =
            DVector::from_element(svd.u.as_ref().unwrap().nrows(), Complex64::new(0.0, 0.0));
        fp.rows_mut(0, f.len()).copy_from(&f);
        let step = svd.solve(&fp, eps).map_err(|_| DehnError::NewtonDiverged {
            iters,
            residual: norm_inf(&f),
        })?;
        u -= step;
        f = sys.f(pot, &u);
        if !f.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(DehnError::NewtonDiverged {
                iters,
                residual: f64::INFINITY,
            });
        }
    }
    Err(DehnError::NewtonDiverged {
        iters: MAX_ITER,
        residual: norm_inf(&f),
    })
}

/// Numerically trace the solution set of `sum_j a_j u_j + b_j v_j(u) = 0`
/// through `u = 0` and check that it lies in `u_i = v_i = 0` for the cusp of
/// the verdict.
///
/// Each sample starts from a random kernel direction of the Jacobian at the
/// origin, scaled to a small radius, and is projected back onto the zero
/// set by Gauss-Newton. An isolated verdict holds vacuously with no samples.
pub fn continuation_check(
    spec: &SubgroupSpec,
    pot: &NZPotential,
    outcome: CascadeOutcome,
    samples: usize,
    seed: u64,
) -> Result<ContinuationReport> {
    if spec.copies() != 1 {
        return Err(AnomalousError::Unsupported("a single-copy spec".into()));
    }
    let n = spec.n_cusps();
    if pot.n_cusps() != n {
        return Err(DehnError::CuspCount {
            expected: n,
            got: pot.n_cusps(),
        }
        .into());
    }
    let i = match outcome {
        CascadeOutcome::Isolated => {
            return Ok(ContinuationReport {
                holds: true,
                kernel_dim: 0,
                samples: 0,
                worst: 0.0,
                min_norm: 0.0,
            })
        }
        CascadeOutcome::Cusp(i) if i < n => i,
        CascadeOutcome::Cusp(i) => {
            return Err(AnomalousError::Unsupported(format!(
                "cusp index {i} below {n}"
            )))
        }
    };
    let sys = System::new(spec);
    let zero = DVector::from_element(n, Complex64::new(0.0, 0.0));
    let svd = padded_svd(&sys.jac(pot, &zero));
    let smax = svd.singular_values.max().max(1.0);
    let v_t = svd.v_t.as_ref().expect("requested");
    let kernel: Vec<DVector<Complex64>> = (0..n)
        .filter(|&k| svd.singular_values[k] < 1e-8 * smax)
        .map(|k| v_t.row(k).transpose().map(|z| z.conj()))
        .collect();
    if kernel.is_empty() {
        return Ok(ContinuationReport {
            holds: true,
            kernel_dim: 0,
            samples: 0,
            worst: 0.0,
            min_norm: 0.0,
        });
    }
    let points: Vec<DVector<Complex64>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let mut dir = zero.clone();
            for kv in &kernel {
                let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                dir += kv * c;
            }
            let scale = rng.random_range(STEP_MIN..STEP_MAX) / dir.norm().max(f64::MIN_POSITIVE);
            project(&sys, pot, dir * Complex64::new(scale, 0.0))
        })
        .collect::<std::result::Result<_, _>>()?;
    let mut worst = 0.0f64;
    let mut min_norm = f64::INFINITY;
    for u in &points {
        let v = pot.v_unchecked(u.as_slice());
        worst = worst.max(u[i].norm()).max(v[i].norm());
        min_norm = min_norm.min(norm_inf(u));
    }
    Ok(ContinuationReport {
        holds: worst < CONTINUATION_TOL,
        kernel_dim: kernel.len(),
        samples,
        worst,
        min_norm,
    })
}
