use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{lll_reduce, norm, LatticeBasis, LatticeError, Result, LLL_DELTA};
use crate::exactalg::{kernel_basis, IntMatrix};

/// Committed output of [`SiegelCalibration::measure`].
pub const SIEGEL_CALIBRATION_JSON: &str = include_str!("../../data/siegel_calibration.json");

/// `n - r` short independent integer vectors annihilating the `r` rows of
/// `forms`, and the ratio `prod |b_i| / prod |v_j|` of their lengths to the
/// lengths of the rows.
///
/// The integer kernel comes from a Hermite basis, is LLL-reduced with
/// `delta = 0.99` and sorted by length.
pub fn siegel_basis(forms: &IntMatrix) -> Result<(LatticeBasis, f64)> {
    let (r, n) = (forms.rows(), forms.cols());
    let rank = forms.rank();
    if rank < r {
        return Err(LatticeError::DegenerateForms { rank, rows: r });
    }
    if r >= n {
        return Err(LatticeError::NoKernel { rows: r, cols: n });
    }
    let kernel = kernel_basis(forms);
    let reduced = lll_reduce(kernel, LLL_DELTA.0, LLL_DELTA.1)
        .ok_or_else(|| LatticeError::Reduction("kernel basis is dependent".into()))?;
    let basis = LatticeBasis::new(reduced);
    let num: f64 = basis.norms.iter().product();
    let den: f64 = (0..r).map(|j| norm(forms.row(j))).product();
    Ok((basis, num / den))
}

/// Largest Siegel ratio over seeded random single forms in 4 or 5
/// variables with entries in `[-entry_bound, entry_bound]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiegelCalibration {
    pub seed: u64,
    pub forms: usize,
    pub entry_bound: i64,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// `max_ratio` rounded up to two decimals.
    pub threshold: f64,
    /// Proven cap `(1 / (delta - 1/4))^{k(k-1)/4}` for kernels of rank
    /// `k <= 4`, since the kernel determinant is at most `|v|`.
    pub lll_bound: f64,
}

impl SiegelCalibration {
    pub fn random_form<R: Rng>(rng: &mut R, entry_bound: i64) -> IntMatrix {
        let n = rng.random_range(4..=5);
        loop {
            let row: Vec<i64> = (0..n)
                .map(|_| rng.random_range(-entry_bound..=entry_bound))
                .collect();
            if row.iter().any(|&x| x != 0) {
                return IntMatrix::from_rows(n, &[row]);
            }
        }
    }

    /// Ratios of `count` seeded forms.
    pub fn ratios(seed: u64, count: usize, entry_bound: i64) -> Result<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| siegel_basis(&Self::random_form(&mut rng, entry_bound)).map(|(_, r)| r))
            .collect()
    }

    pub fn measure(seed: u64, count: usize, entry_bound: i64) -> Result<Self> {
        let rs = Self::ratios(seed, count, entry_bound)?;
        let max_ratio = rs.iter().cloned().fold(0.0, f64::max);
        let mean_ratio = rs.iter().sum::<f64>() / rs.len().max(1) as f64;
        Ok(SiegelCalibration {
            seed,
            forms: count,
            entry_bound,
            max_ratio,
            mean_ratio,
            threshold: (max_ratio * 100.0).ceil() / 100.0,
            lll_bound: Self::lll_bound(4),
        })
    }

    pub fn lll_bound(k: usize) -> f64 {
        let delta = LLL_DELTA.0 as f64 / LLL_DELTA.1 as f64;
        (1.0 / (delta - 0.25)).powf((k * (k - 1)) as f64 / 4.0)
    }

    pub fn committed() -> Self {
        serde_json::from_str(SIEGEL_CALIBRATION_JSON).expect("valid calibration file")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn run(rows: &[Vec<i64>]) -> (LatticeBasis, f64) {
        siegel_basis(&IntMatrix::from_rows(rows[0].len(), rows)).unwrap()
    }

    #[test]
    fn four_variable_form() {
        let forms = IntMatrix::from_rows(4, &[vec![-3, 5, -3, 5]]);
        let (b, ratio) = siegel_basis(&forms).unwrap();
        assert_eq!(b.len(), 3);
        assert!(b.vectors.contains(&big(&[1, 0, -1, 0])));
        assert!(b.vectors.contains(&big(&[0, 1, 0, -1])));
        assert!(ratio <= 1.5, "{ratio}");
        for v in &b.vectors {
            assert!(forms.apply(v).iter().all(Zero::is_zero));
        }
        assert!(b.norms.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn coordinate_kernels() {
        assert_eq!(
            run(&[vec![1, 0, 0], vec![0, 1, 0]]).0.vectors,
            vec![big(&[0, 0, 1])]
        );
        assert_eq!(run(&[vec![1, 1]]).0.vectors, vec![big(&[1, -1])]);
    }

    #[test]
    fn degenerate_and_full_rank_forms() {
        let m = IntMatrix::from_rows(3, &[vec![1, 2, 3], vec![2, 4, 6]]);
        assert_eq!(
            siegel_basis(&m),
            Err(LatticeError::DegenerateForms { rank: 1, rows: 2 })
        );
        assert_eq!(
            siegel_basis(&IntMatrix::identity(2)),
            Err(LatticeError::NoKernel { rows: 2, cols: 2 })
        );
    }

    #[test]
    fn committed_calibration_is_consistent() {
        let c = SiegelCalibration::committed();
        assert!(c.max_ratio <= c.threshold && c.threshold < c.max_ratio + 0.01);
        assert!(c.threshold <= c.lll_bound);
        let head = SiegelCalibration::ratios(c.seed, 200, c.entry_bound).unwrap();
        assert!(head.iter().all(|r| *r <= c.max_ratio));
    }

    // About two minutes in an optimized build.
    #[test]
    #[ignore]
    fn committed_calibration_is_reproducible() {
        let c = SiegelCalibration::committed();
        let again = SiegelCalibration::measure(c.seed, c.forms, c.entry_bound).unwrap();
        assert_eq!(again, c);
    }
}
