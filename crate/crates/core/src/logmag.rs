//! Signed magnitudes carried through a certified enclosure of `ln |x|`.
//!
//! The dyadic exponent of a [`Ball`] is an `i64`, so `ln |x|` itself can be
//! as large as `2^(2^62)`; numbers such as `exp(-6^108)` or `T^(NT)` with
//! `T` of tens of thousands of digits are therefore held at a single
//! logarithmic level, and second-level logarithms are only computed on demand
//! through [`LogMagnitude::ln_ln`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::ball::{Ball, Dyadic};
use crate::error::{Error, Result};
use crate::scalar::format_rational;

/// Exact tags larger than this many bits (numerator plus denominator) are dropped.
pub const EXACT_TAG_BITS: u64 = 1 << 22;

#[derive(Clone, PartialEq)]
pub struct LogMagnitude {
    sign: i8,
    ln_abs: Option<Ball>,
    exact: Option<BigRational>,
}

impl fmt::Debug for LogMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.ln_abs, &self.exact) {
            (None, _) => write!(f, "LogMagnitude(0)"),
            (Some(l), Some(q)) if rational_bits(q) < 256 => {
                write!(f, "LogMagnitude({}, ln|x| ~ {})", format_rational(q), l.to_f64())
            }
            (Some(l), _) => write!(f, "LogMagnitude(sign {}, ln|x| ~ {})", self.sign, l.to_sci_string(8)),
        }
    }
}

fn rational_bits(q: &BigRational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

fn keep(q: BigRational) -> Option<BigRational> {
    (rational_bits(&q) <= EXACT_TAG_BITS).then_some(q)
}

impl LogMagnitude {
    pub fn zero() -> Self {
        Self {
            sign: 0,
            ln_abs: None,
            exact: Some(BigRational::zero()),
        }
    }

    pub fn one() -> Self {
        Self {
            sign: 1,
            ln_abs: Some(Ball::zero()),
            exact: Some(BigRational::one()),
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let a = q.abs();
        let ln = if a.is_one() {
            Ball::zero()
        } else {
            ln_of_positive_rational(&a, prec)
        };
        Self {
            sign: if q.is_negative() { -1 } else { 1 },
            ln_abs: Some(ln),
            exact: keep(q.clone()),
        }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()), prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(n), prec)
    }

    /// The positive number `exp(ln)`.
    pub fn from_ln(ln: Ball) -> Self {
        Self {
            sign: 1,
            ln_abs: Some(ln),
            exact: None,
        }
    }

    /// Converts an enclosure whose sign is certified (or which is exactly 0).
    pub fn from_ball(b: &Ball, prec: u32) -> Result<Self> {
        if b.is_zero() {
            return Ok(Self::zero());
        }
        if b.contains_zero() {
            return Err(Error::Precision("sign of the value is not certified".into()));
        }
        let sign = if b.is_positive() { 1 } else { -1 };
        let exact = b.is_exact().then(|| b.mid().to_rational()).and_then(keep);
        Ok(Self {
            sign,
            ln_abs: Some(b.abs().ln(prec)?),
            exact,
        })
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }

    /// Enclosure of `ln |x|`, `None` at zero.
    pub fn ln_abs(&self) -> Option<&Ball> {
        self.ln_abs.as_ref()
    }

    /// `ln |x|`, panicking at zero.
    pub fn ln(&self) -> &Ball {
        self.ln_abs.as_ref().expect("logarithm of zero")
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn without_exact(mut self) -> Self {
        if self.sign != 0 {
            self.exact = None;
        }
        self
    }

    pub fn neg(&self) -> Self {
        Self {
            sign: -self.sign,
            ln_abs: self.ln_abs.clone(),
            exact: self.exact.as_ref().map(|q| -q),
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            sign: self.sign.abs(),
            ln_abs: self.ln_abs.clone(),
            exact: self.exact.as_ref().map(Signed::abs),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) if rational_bits(a) + rational_bits(b) <= EXACT_TAG_BITS => Some(a * b),
            _ => None,
        };
        Self {
            sign: self.sign * other.sign,
            ln_abs: Some(self.ln() + other.ln()),
            exact,
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self {
            sign: self.sign,
            ln_abs: Some(-self.ln().clone()),
            exact: self.exact.as_ref().map(BigRational::recip),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// `x^n` for an integer exponent (negative allowed for nonzero `x`).
    pub fn pow_int(&self, n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Ok(Self::one());
        }
        if self.is_zero() {
            return if n.is_positive() { Ok(Self::zero()) } else { Err(Error::DivisionByZero) };
        }
        let odd = n.bits() > 0 && (n % 2u32) != BigInt::zero();
        let sign = if self.sign < 0 && odd { -1 } else { 1 };
        let exact = self.exact.as_ref().and_then(|q| {
            let e = n.abs().to_u64()?;
            if rational_bits(q).checked_mul(e)? > EXACT_TAG_BITS {
                return None;
            }
            let p = BigRational::new(q.numer().pow(e as u32), q.denom().pow(e as u32));
            Some(if n.is_negative() { p.recip() } else { p })
        });
        Ok(Self {
            sign,
            ln_abs: Some(self.ln() * &Ball::from_int(n)),
            exact,
        })
    }

    pub fn pow_u(&self, n: u64) -> Self {
        self.pow_int(&BigInt::from(n)).expect("nonnegative exponent")
    }

    /// `|x|^r` for a real exponent enclosure; the result is positive.
    pub fn pow_ball(&self, r: &Ball) -> Result<Self> {
        if self.is_zero() {
            return if r.is_positive() { Ok(Self::zero()) } else { Err(Error::Domain("0 to a non-positive power".into())) };
        }
        Ok(Self::from_ln(self.ln() * r))
    }

    /// Positive `d`-th root; exact when the tag is a perfect `d`-th power.
    pub fn root(&self, d: u64, prec: u32) -> Result<Self> {
        if self.sign < 0 {
            return Err(Error::Domain("root of a negative magnitude".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let exact = self.exact.as_ref().and_then(|q| {
            let d32 = u32::try_from(d).ok()?;
            let n = q.numer().nth_root(d32);
            let m = q.denom().nth_root(d32);
            (n.pow(d32) == *q.numer() && m.pow(d32) == *q.denom()).then(|| BigRational::new(n, m))
        });
        Ok(Self {
            sign: 1,
            ln_abs: Some(self.ln().div_u64(d, prec)),
            exact,
        })
    }

    /// `x + y` (both signs allowed). Cancellation must be certified.
    pub fn add(&self, other: &Self, prec: u32) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return Ok(Self::from_rational(&(a + b), prec.max(self.ln().prec()).max(other.ln().prec())));
        }
        let (big, small) = match self.ln().cmp_certified(other.ln()) {
            Some(Ordering::Less) => (other, self),
            Some(_) => (self, other),
            None if self.sign == other.sign => {
                let (a, b) = if self.ln().mid() >= other.ln().mid() { (self, other) } else { (other, self) };
                (a, b)
            }
            None => return Err(Error::Precision("cancellation in a signed sum is not certified".into())),
        };
        let diff = small.ln().clone() - big.ln().clone();
        let lower_exp = diff.upper();
        let prec = prec.max(big.ln().prec()).max(16);
        let correction = if lower_exp < Dyadic::from_i64(-(prec as i64) - 64) {
            // ln(1 +- eps) with eps below 2^-(prec + 64)
            Ball::with_radius(Dyadic::zero(), Dyadic::pow2(-(prec as i64) - 60), prec)
        } else {
            let e = diff.exp(prec + 16)?;
            let inner = if big.sign == small.sign { Ball::one() + e } else { Ball::one() - e };
            inner.ln(prec + 16)?
        };
        Ok(Self {
            sign: big.sign,
            ln_abs: Some(big.ln().clone() + correction),
            exact: None,
        })
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Result<Self> {
        self.add(&other.neg(), prec)
    }

    /// Certified comparison; `None` when the enclosures do not separate.
    pub fn cmp_certified(&self, other: &Self) -> Option<Ordering> {
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return Some(a.cmp(b));
        }
        if self.sign != other.sign {
            return Some(self.sign.cmp(&other.sign));
        }
        if self.sign == 0 {
            return Some(Ordering::Equal);
        }
        let c = self.ln().cmp_certified(other.ln())?;
        Some(if self.sign > 0 { c } else { c.reverse() })
    }

    pub fn certainly_le(&self, other: &Self) -> bool {
        matches!(self.cmp_certified(other), Some(Ordering::Less | Ordering::Equal))
    }

    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.cmp_certified(other) == Some(Ordering::Less)
    }

    pub fn certainly_ge(&self, other: &Self) -> bool {
        other.certainly_le(self)
    }

    /// Certified `|x| >= 1` (with `ln |x| >= 0`).
    pub fn certainly_at_least_one(&self) -> bool {
        match &self.exact {
            Some(q) => q >= &BigRational::one(),
            None => self.sign > 0 && !self.ln().lower().is_negative(),
        }
    }

    /// Enclosure of `log10 |x|`.
    pub fn log10(&self, prec: u32) -> Option<Ball> {
        let l = self.ln_abs.as_ref()?;
        let p = prec.max(l.prec()).max(32);
        l.div(&Ball::ln10(p + 16), p).ok()
    }

    /// Enclosure of `ln ln |x|`, defined when `ln |x|` is certified positive.
    pub fn ln_ln(&self, prec: u32) -> Result<Ball> {
        self.ln_abs
            .as_ref()
            .ok_or_else(|| Error::Domain("logarithm of zero".into()))?
            .ln(prec)
    }

    /// The value itself when its logarithm is moderate.
    pub fn to_ball(&self, prec: u32) -> Result<Ball> {
        if self.is_zero() {
            return Ok(Ball::zero());
        }
        if let Some(q) = &self.exact {
            return Ok(Ball::from_rational(q, prec));
        }
        let b = self.ln().exp(prec)?;
        Ok(if self.sign < 0 { -b } else { b })
    }

    /// Decimal rendering of `log10 |x|` (signed by the magnitude, not by `x`).
    pub fn log10_string(&self, digits: usize) -> String {
        match self.log10(64 + 4 * digits as u32) {
            None => "-inf".into(),
            Some(b) => decimal_string(&b, digits),
        }
    }

    /// `{"log10": .., "exact": ..}` as used in reports.
    pub fn to_report(&self) -> Value {
        let exact = self
            .exact
            .as_ref()
            .filter(|q| rational_bits(q) <= 4096)
            .map(format_rational);
        json!({"log10": self.log10_string(12), "sign": self.sign, "exact": exact})
    }
}

/// `ln q` for a positive rational of any size.
pub fn ln_of_positive_rational(q: &BigRational, prec: u32) -> Ball {
    let p = prec.max(32) + 16;
    let num = Ball::from_int(q.numer()).ln(p).expect("positive");
    if q.denom().is_one() {
        return num.set_prec(prec.max(32));
    }
    let den = Ball::from_int(q.denom()).ln(p).expect("positive");
    (num - den).set_prec(prec.max(32))
}

/// Fixed notation for moderate values, scientific otherwise.
pub fn decimal_string(b: &Ball, digits: usize) -> String {
    let x = b.to_f64();
    if x == 0.0 {
        return "0".into();
    }
    if x.is_finite() && x.abs() >= 1e-4 && x.abs() < 1e15 {
        let int_digits = (x.abs().log10().floor() as i64 + 1).max(1) as usize;
        let frac = digits.saturating_sub(int_digits).max(1);
        format!("{:.*}", frac, x)
    } else {
        b.to_sci_string(digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use proptest::prelude::*;

    #[test]
    fn exact_round_trip() {
        let a = LogMagnitude::from_rational(&rat(12, 1), 128);
        assert!(a.ln().contains(&Ball::from_i64(12).ln(128).unwrap()) || a.ln().overlaps(&Ball::from_i64(12).ln(128).unwrap()));
        let b = a.mul(&LogMagnitude::from_rational(&rat(1, 3), 128));
        assert_eq!(b.exact(), Some(&rat_int(4)));
        assert!(b.ln().overlaps(&Ball::from_i64(4).ln(128).unwrap()));
        assert_eq!(b.root(2, 128).unwrap().exact(), Some(&rat_int(2)));
        assert_eq!(LogMagnitude::from_i64(2, 64).root(2, 64).unwrap().exact(), None);
    }

    #[test]
    fn astronomically_small() {
        // exp(-6^108) against exp(-18 ln 3 - 6^108)
        let big = Ball::from_int(&BigInt::from(6).pow(108u32));
        let a = LogMagnitude::from_ln(-big.clone());
        let b = LogMagnitude::from_ln(-big - Ball::from_i64(18) * Ball::from_i64(3).ln(400).unwrap());
        assert_eq!(a.cmp_certified(&b), Some(Ordering::Greater));
        let s = b.log10_string(4);
        assert!(s.starts_with("-4.76") && s.ends_with("e83"), "{s}");
    }

    #[test]
    fn sums_and_signs() {
        let a = LogMagnitude::from_i64(5, 128).without_exact();
        let b = LogMagnitude::from_i64(-3, 128).without_exact();
        let s = a.add(&b, 128).unwrap();
        assert!(s.ln().overlaps(&Ball::from_i64(2).ln(128).unwrap()));
        assert_eq!(s.sign(), 1);
        let z = a.add(&a.neg(), 128);
        assert!(z.is_err());
        assert_eq!(LogMagnitude::from_i64(5, 64).add(&LogMagnitude::from_i64(-5, 64), 64).unwrap().sign(), 0);
    }

    #[test]
    fn report_shape() {
        let v = LogMagnitude::from_i64(1000, 64).to_report();
        assert_eq!(v["exact"], "1000");
        assert!(v["log10"].as_str().unwrap().starts_with("3.0000"));
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(a in 1i64..10_000, b in 1i64..10_000, c in 1i64..10_000) {
            let (x, y, z) = (
                LogMagnitude::from_i64(a, 96).without_exact(),
                LogMagnitude::from_i64(b, 96).without_exact(),
                LogMagnitude::from_i64(c, 96).without_exact(),
            );
            let l = x.mul(&y).mul(&z);
            let r = x.mul(&y.mul(&z));
            prop_assert!(l.ln().overlaps(r.ln()));
            let exact = Ball::from_int(&(BigInt::from(a) * b * c)).ln(96).unwrap();
            prop_assert!(l.ln().overlaps(&exact));
        }

        #[test]
        fn comparisons_are_stable_under_refinement(a in 1i64..1000, b in 1i64..1000) {
            let lo = LogMagnitude::from_i64(a, 40).without_exact();
            let hi = LogMagnitude::from_i64(b, 40).without_exact();
            if let Some(o) = lo.cmp_certified(&hi) {
                let lo2 = LogMagnitude::from_i64(a, 200).without_exact();
                let hi2 = LogMagnitude::from_i64(b, 200).without_exact();
                prop_assert_eq!(lo2.cmp_certified(&hi2), Some(o));
            }
        }
    }
}
