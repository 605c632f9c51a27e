use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Ball, Dyadic};
use crate::error::Result;
use crate::scalar::Ring;

/// Rectangular complex enclosure `re + i im`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallComplex {
    pub re: Ball,
    pub im: Ball,
}

impl BallComplex {
    pub fn new(re: Ball, im: Ball) -> Self {
        Self { re, im }
    }

    pub fn real(re: Ball) -> Self {
        Self {
            re,
            im: Ball::zero(),
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Self::real(Ball::from_rational(q, prec))
    }

    pub fn from_i64(n: i64) -> Self {
        Self::real(Ball::from_i64(n))
    }

    pub fn is_real_exact_im(&self) -> bool {
        self.im.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.re.contains_rational(q) && self.im.contains_zero()
    }

    /// Larger of the two component radii.
    pub fn radius(&self) -> Dyadic {
        Dyadic::max(self.re.rad(), self.im.rad())
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> Ball {
        self.re.sqr() + self.im.sqr()
    }

    /// Enclosure of `|z|`.
    pub fn abs(&self, prec: u32) -> Ball {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        // the square root exists: the norm ball contains only values >= 0 up to rounding
        self.norm_sqr()
            .sqrt(prec)
            .unwrap_or_else(|_| Ball::with_radius(Dyadic::zero(), self.abs_upper(), prec))
    }

    /// Upper bound of `|z|` (via `|re| + |im|` refined by the true norm when cheap).
    pub fn abs_upper(&self) -> Dyadic {
        if self.im.is_zero() {
            return self.re.abs_upper();
        }
        let n = self.norm_sqr();
        let (_, hi) = n.upper().sqrt_bounds(40);
        hi
    }

    /// Lower bound of `|z|`.
    pub fn abs_lower(&self) -> Dyadic {
        if self.im.is_zero() {
            return self.re.abs_lower();
        }
        let lr = self.re.abs_lower();
        let li = self.im.abs_lower();
        let n = lr.mul(&lr).add(&li.mul(&li));
        let (lo, _) = n.sqrt_bounds(40);
        lo
    }

    pub fn scale(&self, b: &Ball) -> Self {
        Self {
            re: &self.re * b,
            im: &self.im * b,
        }
    }

    pub fn div(&self, other: &Self, prec: u32) -> Result<Self> {
        if other.im.is_zero() {
            let inv = other.re.recip(prec)?;
            return Ok(self.scale(&inv));
        }
        let inv = other.norm_sqr().recip(prec)?;
        Ok((self.clone() * other.conj()).scale(&inv))
    }

    pub fn exp(&self, prec: u32) -> Result<Self> {
        let r = self.re.exp(prec)?;
        if self.im.is_zero() {
            return Ok(Self::real(r));
        }
        let (s, c) = self.im.sin_cos(prec)?;
        Ok(Self {
            re: &r * &c,
            im: &r * &s,
        })
    }

    pub fn set_prec(self, prec: u32) -> Self {
        Self {
            re: self.re.set_prec(prec),
            im: if self.im.is_zero() {
                self.im
            } else {
                self.im.set_prec(prec)
            },
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Zero for BallComplex {
    fn zero() -> Self {
        Self::real(Ball::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for BallComplex {
    fn one() -> Self {
        Self::real(Ball::one())
    }
}

impl Add for BallComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for BallComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for BallComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self::real(self.re * rhs.re);
        }
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Self { re, im }
    }
}

impl Neg for BallComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Ring for BallComplex {
    fn from_bigint(n: &BigInt) -> Self {
        Self::real(Ball::from_int(n))
    }
    fn is_exact() -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn euler_identity() {
        let i_pi = BallComplex::new(Ball::zero(), Ball::pi(200));
        let z = i_pi.exp(200).unwrap();
        assert!(z.contains_rational(&rat(-1, 1)));
        assert!(z.radius() < Dyadic::pow2(-150));
    }

    #[test]
    fn modulus_and_division() {
        let z = BallComplex::new(Ball::from_i64(3), Ball::from_i64(4));
        let a = z.abs(100);
        assert!(a.contains_rational(&rat(5, 1)));
        let q = z.div(&z, 100).unwrap();
        assert!(q.contains_rational(&rat(1, 1)));
        assert!(z.abs_upper() >= Dyadic::from_i64(5));
        assert!(z.abs_lower() <= Dyadic::from_i64(5));
    }
}
