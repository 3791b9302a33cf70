//! Algebraic subgroups of the holonomy torus and anomalous components
//! through the complete structure.
//!
//! A subgroup is given by integer rows over the columns
//! `(a_1, b_1, ..., a_n, b_n[, a'_1, b'_1, ..., a'_n, b'_n])`, one row per
//! equation `M_1^{a_1} L_1^{b_1} ... = 1`. In logarithmic coordinates the
//! equations become `sum_j a_j u_j + b_j v_j(u) = 0` with
//! `v_j = t_j u_j + ...`, so the Jacobian at `u = 0` has entries
//! `a_j + b_j t_j` in the formal shapes `t_j`.
//!
//! Cusp indices are 0-based.

mod cascade;
mod continuation;
mod product;
mod sample;
mod spec;

pub use cascade::{containment_cascade, CascadeOutcome};
pub use continuation::{continuation_check, ContinuationReport, CONTINUATION_TOL};
pub use product::{product_anomaly_classify, ProductClass, Wiring};
pub use sample::{random_anomalous_spec, random_spec, SampleKind};
pub use spec::{
    anomaly_verdict, jacobian_at_complete, jacobian_with_permutation, AnomalyVerdict, SubgroupSpec,
};

use crate::cusplemmas::CuspLemmaError;
use crate::interchange::InterchangeError;
use crate::nzdehn::DehnError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnomalousError {
    #[error("expected {expected} columns, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("copies must be 1 or 2, got {0}")]
    Copies(usize),
    #[error("rows are linearly dependent (rank {rank} of {rows})")]
    RowsDependent { rank: usize, rows: usize },
    #[error("operation needs {0}")]
    Unsupported(String),
    #[error("bad permutation {0:?}")]
    Permutation(Vec<usize>),
    #[error("containment cascade ended without a cusp: {0}")]
    CascadeExhausted(String),
    #[error("the component through the complete structure is isolated")]
    NotAnomalous,
    #[error("rows are not grouped into two cusp blocks: {0}")]
    Wiring(String),
    #[error(transparent)]
    Lemma(#[from] CuspLemmaError),
    #[error(transparent)]
    Interchange(#[from] InterchangeError),
    #[error(transparent)]
    Dehn(#[from] DehnError),
}

pub type Result<T> = std::result::Result<T, AnomalousError>;
