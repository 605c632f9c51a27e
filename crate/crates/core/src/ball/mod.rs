//! Certified arbitrary-precision enclosures.
//!
//! [`Ball`] is a real midpoint-radius interval over [`Dyadic`] numbers and
//! [`BallComplex`] a rectangular complex enclosure built from two of them.
//! Every operation returns an enclosure of the exact result for every
//! choice of inputs inside the operand enclosures.

mod complex;
mod dyadic;
mod real;

pub use complex::BallComplex;
pub use dyadic::Dyadic;
pub use real::Ball;
