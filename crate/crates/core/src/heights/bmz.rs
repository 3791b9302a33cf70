use num_integer::Integer;
use serde::Serialize;

use super::{weil_height, AlgebraicNumber, HeightError, HeightValue, Result};

/// Observed left-hand side `h(eta_1) ... h(eta_r)` of the lower bound for
/// multiplicatively independent numbers, with the degree `d~` of the field
/// they generate. The constants of the bound are unknown and not reported.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BmzReport {
    pub heights: Vec<HeightValue>,
    pub product: f64,
    pub product_error: f64,
    /// `lcm` and product of the degrees bracket `d~`.
    pub degree_bounds: (usize, usize),
    /// `d~` when supplied or forced by the bounds.
    pub field_degree: Option<usize>,
    /// Some entry is zero or a root of unity.
    pub degenerate: bool,
}

/// Heights, their product and the field degree data for `numbers`.
/// `field_degree` is `[Q(eta_1, ..., eta_r) : Q]` if the caller knows it.
pub fn bmz_product_report(
    numbers: &[AlgebraicNumber],
    field_degree: Option<usize>,
) -> Result<BmzReport> {
    let heights = numbers
        .iter()
        .map(weil_height)
        .collect::<Result<Vec<_>>>()?;
    let degrees: Vec<usize> = numbers.iter().map(AlgebraicNumber::degree).collect();
    let lo = degrees.iter().fold(1, |l, d| l.lcm(d));
    let hi = degrees.iter().product::<usize>();
    if let Some(d) = field_degree {
        if d % lo != 0 || d > hi {
            return Err(HeightError::FieldMismatch(format!(
                "field degree {d} outside the multiples of {lo} up to {hi}"
            )));
        }
    }
    let degenerate = heights
        .iter()
        .any(|h| h.value == 0.0 && h.error_bound == 0.0);
    let (mut product, mut upper) = (1.0f64, 1.0f64);
    for h in &heights {
        product *= h.value;
        upper *= h.hi();
    }
    let product_error = if degenerate {
        0.0
    } else {
        (upper - product).abs() + product * f64::EPSILON * 4.0
    };
    Ok(BmzReport {
        heights,
        product: if degenerate { 0.0 } else { product },
        product_error,
        degree_bounds: (lo, hi),
        field_degree: field_degree.or((lo == hi).then_some(lo)),
        degenerate,
    })
}
