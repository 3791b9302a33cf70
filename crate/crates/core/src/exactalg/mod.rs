//! Exact arithmetic substrate: big rationals, multivariate polynomials over
//! the rationals, fraction-free generic rank, and integer kernel lattices.
//!
//! Cusp shapes enter every rank computation as formal transcendentals
//! `t0, t1, ...`. The rank statements used downstream only involve minors
//! whose monomials in the shapes have bounded degree:
//!
//! - 2x2 one-shape blocks: monomials `1, t, t^2` (needs `t` non-quadratic).
//! - 2x2 two-shape blocks: monomials `1, t1, t2, t1*t2`.
//! - n-cusp Jacobians with `l` rows: square-free monomials in at most `l`
//!   distinct shapes, each shape of degree at most one per monomial.
//!
//! Whenever those monomials are linearly independent over the rationals for
//! the actual shapes, the rank over the rational function field equals the
//! rank at the actual shapes. No floating point is used here.

mod matrix;
mod poly;
mod zlattice;

pub use matrix::{coordinates_in, rank_q, rref, QPolyMatrix};
pub use poly::QPoly;
pub use zlattice::{hermite_rows, kernel_basis, IntMatrix};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Reduced big rational with positive denominator.
pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n / d` as a reduced rational. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Lift an integer row to rationals.
pub fn rat_row(row: &[i64]) -> Vec<Rat> {
    row.iter().map(|&x| rat(x)).collect()
}
