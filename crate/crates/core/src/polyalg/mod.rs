//! Exact polynomial algebra: sparse bivariate polynomials, homogeneous forms,
//! resultants, gcds, linear algebra over Q and truncated power series.

pub mod gcd;
pub mod linalg;
pub mod multipoly;
pub mod parse;
pub mod resultant;
pub mod series;

pub use multipoly::{HomogPoly3, MultiPoly};
pub use parse::{parse_map_text, parse_pair, parse_poly};
pub use resultant::resultant;
pub use series::{Coeff, TruncSeries, TruncSeries2};

/// Top-degree homogeneous part of a nonzero polynomial.
pub fn homogeneous_top(p: &MultiPoly) -> crate::error::Result<MultiPoly> {
    p.homogeneous_top()
}
