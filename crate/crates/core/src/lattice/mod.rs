//! Small integer kernels of linear forms and integer relations among
//! logarithms, both by exact LLL reduction.

mod lll;
mod relation;
mod siegel;

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

pub use lll::lll_reduce;
pub use relation::{find_multiplicative_relation, MultRelation, MAX_NUMBERS, MIN_PRECISION};
pub use siegel::{siegel_basis, SiegelCalibration, SIEGEL_CALIBRATION_JSON};

/// LLL parameter `delta = 99/100`.
pub const LLL_DELTA: (u32, u32) = (99, 100);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("forms have rank {rank}, fewer than their {rows} rows")]
    DegenerateForms { rank: usize, rows: usize },
    #[error("{rows} independent forms in {cols} variables leave no kernel")]
    NoKernel { rows: usize, cols: usize },
    #[error("precision {bits} below {min} bits")]
    PrecisionTooLow { bits: u32, min: u32 },
    #[error("{count} numbers, at most {max} supported")]
    TooManyNumbers { count: usize, max: usize },
    #[error("number {0} is zero")]
    ZeroInput(usize),
    #[error("reduction failed: {0}")]
    Reduction(String),
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// Integer vectors sorted by Euclidean length, shortest first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeBasis {
    #[serde(serialize_with = "ser_vecs")]
    pub vectors: Vec<Vec<BigInt>>,
    pub norms: Vec<f64>,
}

fn ser_vecs<S: serde::Serializer>(v: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        seq.serialize_element(&row.iter().map(ToString::to_string).collect::<Vec<_>>())?;
    }
    seq.end()
}

pub(crate) fn norm(v: &[BigInt]) -> f64 {
    v.iter()
        .map(|x| x.to_f64().unwrap_or(f64::INFINITY).powi(2))
        .sum::<f64>()
        .sqrt()
}

impl LatticeBasis {
    pub fn new(mut vectors: Vec<Vec<BigInt>>) -> Self {
        for v in &mut vectors {
            if v.iter()
                .find(|x| !num_traits::Zero::is_zero(*x))
                .is_some_and(num_traits::Signed::is_negative)
            {
                v.iter_mut().for_each(|x| *x = -x.clone());
            }
        }
        let sq = |v: &Vec<BigInt>| v.iter().map(|x| x * x).sum::<BigInt>();
        vectors.sort_by(|a, b| sq(a).cmp(&sq(b)).then_with(|| b.cmp(a)));
        let norms = vectors.iter().map(|v| norm(v)).collect();
        LatticeBasis { vectors, norms }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

impl fmt::Display for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, n) in self.vectors.iter().zip(&self.norms) {
            let s: Vec<String> = v.iter().map(ToString::to_string).collect();
            writeln!(f, "({})  |b| = {n:.6}", s.join(", "))?;
        }
        Ok(())
    }
}
