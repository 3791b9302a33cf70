//! Computational toolkit for Dehn fillings of cusped hyperbolic 3-manifolds:
//! exact rank lemmas for cusp-shape matrices, anomalous-subvariety detection
//! at the complete structure, Weil heights, Siegel bases and multiplicative
//! relations, and Neumann-Zagier filling holonomies.

pub mod anomalous;
pub mod cusplemmas;
pub mod exactalg;
pub mod heights;
pub mod interchange;
pub mod lattice;
pub mod nzdehn;

pub use anomalous::{AnomalyVerdict, CascadeOutcome, SubgroupSpec};
pub use cusplemmas::{BlockForm, CuspBlock, PairVerdict, TauMode};
pub use exactalg::{kernel_basis, rank_q, IntMatrix, QPoly, QPolyMatrix, Rat};
pub use heights::{AlgebraicNumber, HeightValue};
pub use interchange::PairedVectorFamily;
pub use lattice::{LatticeBasis, MultRelation};
pub use nzdehn::{FillingCoefficient, FillingResult, NZPotential};

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    CuspLemma(#[from] cusplemmas::CuspLemmaError),
    #[error(transparent)]
    Interchange(#[from] interchange::InterchangeError),
    #[error(transparent)]
    Anomalous(#[from] anomalous::AnomalousError),
    #[error(transparent)]
    Height(#[from] heights::HeightError),
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error(transparent)]
    Dehn(#[from] nzdehn::DehnError),
}
