//! Exact and certified arithmetic for effective algebraic-independence
//! measures of values of the exponential function at algebraic points.
//!
//! The crate builds every object of the classical auxiliary-function proof
//! (Hermite interpolation bases, the homogeneous family `Q_{n,l}`, Macaulay
//! resultants, Weil heights), evaluates the resulting lower bound for
//! `|P(e^{a_1}, ..., e^{a_t})|` in certified log-space, and audits the
//! inequalities of the proof at the actual parameters.
//!
//! Core algorithms are generic over the [`Ring`]/[`Field`] scalar traits;
//! the aliases below name the instantiations used throughout.

pub mod ball;
pub mod bounds;
pub mod error;
pub mod heights;
pub mod interpolation;
pub mod linalg;
pub mod logmag;
pub mod numberfield;
pub mod poly;
pub mod polysys;
pub mod resultant;
pub mod scalar;

pub use ball::{Ball, BallComplex, Dyadic};
pub use error::{Error, Result};
pub use logmag::LogMagnitude;
pub use numberfield::{AlgebraicNumber, NumberField};
pub use scalar::{ExactDiv, Field, Ring};

/// Exact rationals.
pub type Rat = num_rational::BigRational;
/// Exact integers.
pub type Int = num_bigint::BigInt;

/// Dense univariate polynomial over `Q`.
pub type RatPoly = poly::UniPoly<Rat>;
/// Dense univariate polynomial over a number field.
pub type KPoly = poly::UniPoly<AlgebraicNumber>;
/// Dense univariate polynomial over `f64` (uncertified).
pub type F64Poly = poly::UniPoly<f64>;
/// Sparse homogeneous polynomial over `Q`.
pub type RatForm = poly::HomPoly<Rat>;
/// Sparse homogeneous polynomial over a number field.
pub type KForm = poly::HomPoly<AlgebraicNumber>;
/// Square matrix over `Q`.
pub type RatMatrix = linalg::Matrix<Rat>;
/// Square matrix over a number field.
pub type KMatrix = linalg::Matrix<AlgebraicNumber>;
/// Hermite basis over a number field.
pub type KHermiteBasis = interpolation::HermiteBasis<AlgebraicNumber>;
/// Hermite basis over `Q`.
pub type RatHermiteBasis = interpolation::HermiteBasis<Rat>;
