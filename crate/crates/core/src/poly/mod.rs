//! Dense univariate and sparse multivariate polynomials over any [`Ring`](crate::Ring).

mod multi;
mod uni;

pub use multi::{homogenize, HomPoly, MPoly, Monomial};
pub use uni::UniPoly;
