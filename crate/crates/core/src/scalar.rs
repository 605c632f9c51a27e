//! Scalar traits shared by the polynomial, linear-algebra and interpolation code.
//!
//! Everything above this module is written against [`Ring`] and [`Field`]
//! rather than a concrete number type. The exact instances are
//! [`BigInt`], [`BigRational`] and [`AlgebraicNumber`](crate::AlgebraicNumber);
//! `f32`/`f64` are provided for quick, uncertified experiments, and
//! [`BallComplex`](crate::BallComplex) is a ring so that polynomials can be
//! evaluated on enclosures.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Commutative ring with identity.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    fn from_bigint(n: &BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    /// Whether `==` and `is_zero` are exact decisions for this type.
    fn is_exact() -> bool {
        true
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// A ring in which `a.div_exact(b)` is defined whenever `b` divides `a`.
///
/// Fraction-free elimination only ever divides by a previous pivot that is
/// known to divide the numerator.
pub trait ExactDiv: Ring {
    fn div_exact(&self, other: &Self) -> Self;
}

pub trait Field: ExactDiv + Div<Output = Self> {
    fn try_inv(&self) -> Option<Self>;
}

impl Ring for BigInt {
    fn from_bigint(n: &BigInt) -> Self {
        n.clone()
    }
}

impl ExactDiv for BigInt {
    fn div_exact(&self, other: &Self) -> Self {
        let (q, r) = self.div_rem(other);
        debug_assert!(r.is_zero(), "inexact integer division");
        q
    }
}

impl Ring for BigRational {
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
}

impl ExactDiv for BigRational {
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
}

impl Field for BigRational {
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Ring for $t {
            fn from_bigint(n: &BigInt) -> Self {
                n.to_f64().unwrap_or(f64::NAN) as $t
            }
            fn is_exact() -> bool {
                false
            }
        }
        impl ExactDiv for $t {
            fn div_exact(&self, other: &Self) -> Self {
                self / other
            }
        }
        impl Field for $t {
            fn try_inv(&self) -> Option<Self> {
                if *self == 0.0 {
                    None
                } else {
                    Some(1.0 / self)
                }
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

/// Falling factorial `k (k-1) ... (k-j+1)`.
pub fn falling_factorial(k: u64, j: u64) -> BigInt {
    if j > k {
        return BigInt::zero();
    }
    (0..j).fold(BigInt::one(), |acc, i| acc * BigInt::from(k - i))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Canonical `"p/q"` (or `"p"` for integers) form.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(5, 0), BigInt::from(1));
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial(2, 3), BigInt::from(0));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 2), BigInt::from(21));
        assert_eq!(binomial(49, 2), BigInt::from(1176));
        assert_eq!(binomial(3, 5), BigInt::from(0));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("7"), Some(rat_int(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(&rat(4, -6)), "-2/3");
        assert_eq!(format_rational(&rat_int(5)), "5");
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(rat(2, 3).pow_u(5), rat(32, 243));
        assert_eq!(3.0f64.pow_u(4), 81.0);
    }
}
