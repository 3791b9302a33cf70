//! Truncated Neumann-Zagier potentials and Dehn filling holonomies.
//!
//! A potential `Phi(u)` with quadratic part `sum t_i u_i^2` determines the
//! longitude logarithms `v_i = (1/2) dPhi/du_i`. Filling cusp `i` along
//! `p_i/q_i` imposes `p_i u_i + q_i v_i = 2 pi i`, and the core geodesic has
//! holonomy `t_i = exp(r_i u_i + s_i v_i)` for any `(r_i, s_i)` with
//! `-q_i r_i + p_i s_i = 1`.

mod file;
pub mod mp;
mod potential;
mod scan;
mod solve;
mod synth;

pub use file::{manifold_to_json, parse_manifold, read_manifold};
pub use potential::{
    difference_collapse_check, sgi_check, NZPotential, COLLAPSE_TOL, DEFAULT_TRUNCATION,
    DEFAULT_TRUST_RADIUS,
};
pub use scan::{
    canonical_slopes, collide, cosmetic_scan, Collision, CollisionReport, CONFIRM_BITS,
    SCAN_MAX_BOUND, SCAN_MAX_GRID,
};
pub use solve::{
    closed_form_quadratic, core_holonomy_set, holonomies, holonomy_sets_equal, initial_guess,
    solve_filling, solve_filling_with, Branch, FillingCoefficient, FillingResult, Slope,
    SolveOptions,
};
pub use synth::{default_shape, synth_potential, ShapeSpec, SynthConfig, SYNTH_COEFF_RADIUS};

/// Tolerance for comparing holonomy sets.
pub const SET_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DehnError {
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("point of norm {norm:.4} is outside the trust radius {radius}")]
    OutOfTrustRadius { norm: f64, radius: f64 },
    #[error("expected {expected} cusps, got {got}")]
    CuspCount { expected: usize, got: usize },
    #[error("Newton iteration failed after {iters} steps (residual {residual:e})")]
    NewtonDiverged { iters: usize, residual: f64 },
    #[error("slope {p}/{q} is not coprime")]
    NotCoprime { p: i64, q: i64 },
    #[error("({r}, {s}) is not dual to {p}/{q}: -q r + p s must be 1")]
    BadDualPair { p: i64, q: i64, r: i64, s: i64 },
    #[error("scan bound {bound} exceeds the budget {max}")]
    BudgetExceeded { bound: u64, max: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("manifold file, line {line} column {column}: {msg}")]
    ManifoldFile {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("i/o error: {0}")]
    Io(String),
}
