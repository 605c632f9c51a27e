use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `man * 2^exp`, normalized so that `man` is odd (or zero with `exp == 0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.man, self.exp)
    }
}

/// Bit length of `|n|`.
pub(crate) fn bit_len(n: &BigInt) -> u64 {
    n.magnitude().bits()
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Self::zero();
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Self { man, exp }
        } else {
            Self {
                man: man >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn from_i64(n: i64) -> Self {
        Self::new(BigInt::from(n), 0)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::new(n, 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Self {
            man: BigInt::one(),
            exp: e,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.man.sign()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    /// Smallest `k` with `|self| < 2^k`; `i64::MIN` for zero.
    pub fn magnitude_log2_ceil(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + bit_len(&self.man) as i64
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            man: -&self.man,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << ((self.exp - e) as u64);
        let b = &other.man << ((other.exp - e) as u64);
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self {
            man: &self.man * &other.man,
            exp: self.exp + other.exp,
        }
    }

    pub fn max(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn min(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Truncates to at most `prec` significant bits toward zero.
    /// Returns the truncated value and the exponent `e` with `|error| < 2^e`
    /// (`None` when exact).
    pub fn truncate(&self, prec: u32) -> (Self, Option<i64>) {
        let bits = bit_len(&self.man);
        if prec == 0 || bits <= prec as u64 {
            return (self.clone(), None);
        }
        let s = bits - prec as u64;
        let mag = self.man.magnitude() >> s;
        let man = match self.man.sign() {
            Sign::Minus => -BigInt::from(mag),
            _ => BigInt::from(mag),
        };
        let e = self.exp + s as i64;
        (Self::new(man, e), Some(e))
    }

    /// Rounds a nonnegative value up to at most `prec` significant bits.
    pub fn round_up(&self, prec: u32) -> Self {
        debug_assert!(!self.is_negative());
        let bits = bit_len(&self.man);
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        let mag = (self.man.magnitude() >> s) + 1u32;
        Self::new(BigInt::from(mag), self.exp + s as i64)
    }

    /// Rounds a nonnegative value down to at most `prec` significant bits.
    pub fn round_down(&self, prec: u32) -> Self {
        debug_assert!(!self.is_negative());
        self.truncate(prec).0
    }

    /// Upper bound for `self / other`, both positive.
    pub fn div_up(&self, other: &Self, prec: u32) -> Self {
        debug_assert!(!self.is_negative() && other.man.is_positive());
        if self.is_zero() {
            return Self::zero();
        }
        let k = prec as i64 + bit_len(&other.man) as i64 - bit_len(&self.man) as i64 + 2;
        let k = k.max(0) as u64;
        let num = &self.man << k;
        let (q, r) = num.div_rem(&other.man);
        let q = if r.is_zero() { q } else { q + 1 };
        Self::new(q, self.exp - other.exp - k as i64)
    }

    /// Truncated quotient with `|error| < 2^e` for the returned `e`.
    pub fn div_trunc(&self, other: &Self, prec: u32) -> (Self, i64) {
        assert!(!other.is_zero(), "dyadic division by zero");
        let k = prec as i64 + bit_len(&other.man) as i64 - bit_len(&self.man) as i64 + 2;
        let k = k.max(0) as u64;
        let num = &self.man << k;
        let q = &num / &other.man;
        let e = self.exp - other.exp - k as i64;
        (Self::new(q, e), e)
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << (self.exp as u64)
        } else {
            self.man.div_floor(&(BigInt::one() << ((-self.exp) as u64)))
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    /// Nearest integer (ties away from zero).
    pub fn round_to_integer(&self) -> BigInt {
        let half = Dyadic::pow2(-1);
        if self.is_negative() {
            -(self.neg().add(&half).floor())
        } else {
            self.add(&half).floor()
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << (self.exp as u64))
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    /// `floor(q * 2^k) * 2^-k` with `k` chosen for `prec` significant bits.
    pub fn from_rational_trunc(q: &BigRational, prec: u32) -> (Self, Option<i64>) {
        if q.is_zero() {
            return (Self::zero(), None);
        }
        if q.denom().is_one() {
            return Self::from_bigint(q.numer().clone()).truncate(prec);
        }
        let d = q.denom();
        if d.magnitude().count_ones() == 1 {
            let tz = d.trailing_zeros().unwrap() as i64;
            return Self::new(q.numer().clone(), -tz).truncate(prec);
        }
        let k = prec as i64 + bit_len(d) as i64 - bit_len(q.numer()) as i64 + 2;
        let (man, e) = if k >= 0 {
            let num = q.numer() << (k as u64);
            (&num / d, -k)
        } else {
            let den = d << ((-k) as u64);
            (q.numer() / &den, -k)
        };
        (Self::new(man, e), Some(e))
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = bit_len(&self.man) as i64;
        let shift = (bits - 60).max(0);
        let m = (&self.man >> (shift as u64)).to_f64().unwrap_or(0.0);
        let e = self.exp + shift;
        if e > 2000 {
            return if m > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if e < -2200 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }

    /// Lower and upper bounds of `sqrt(self)` with about `prec` significant bits.
    pub fn sqrt_bounds(&self, prec: u32) -> (Self, Self) {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return (Self::zero(), Self::zero());
        }
        let bits = bit_len(&self.man) as i64;
        let mut shift = (2 * prec as i64 + 4 - bits).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.man << (shift as u64);
        let e = (self.exp - shift) / 2;
        let r = m.sqrt();
        let exact = &r * &r == m;
        let lo = Self::new(r.clone(), e);
        let hi = if exact { lo.clone() } else { Self::new(r + 1, e) };
        (lo, hi)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.man.sign();
        let sb = other.man.sign();
        if sa != sb {
            let rank = |s: Sign| match s {
                Sign::Minus => 0,
                Sign::NoSign => 1,
                Sign::Plus => 2,
            };
            return rank(sa).cmp(&rank(sb));
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        // same sign, both nonzero: compare magnitudes first by bit position
        let ta = self.magnitude_log2_ceil();
        let tb = other.magnitude_log2_ceil();
        let mag = if ta != tb {
            ta.cmp(&tb)
        } else {
            let e = self.exp.min(other.exp);
            let a = self.man.magnitude() << ((self.exp - e) as u64);
            let b = other.man.magnitude() << ((other.exp - e) as u64);
            a.cmp(&b)
        };
        if sa == Sign::Minus {
            mag.reverse()
        } else {
            mag
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn normalization_and_order() {
        let a = Dyadic::new(BigInt::from(12), 0);
        assert_eq!(a, Dyadic::new(BigInt::from(3), 2));
        assert!(Dyadic::from_i64(-5) < Dyadic::from_i64(-4));
        assert!(Dyadic::pow2(-100) > Dyadic::zero());
        assert!(Dyadic::pow2(10) > Dyadic::from_i64(1023));
        assert!(Dyadic::from_i64(-1) < Dyadic::pow2(-3000));
    }

    #[test]
    fn floor_ceil_round() {
        let x = Dyadic::new(BigInt::from(-7), -1); // -3.5
        assert_eq!(x.floor(), BigInt::from(-4));
        assert_eq!(x.ceil(), BigInt::from(-3));
        assert_eq!(x.round_to_integer(), BigInt::from(-4));
        assert_eq!(Dyadic::new(BigInt::from(5), -2).round_to_integer(), BigInt::from(1));
    }

    #[test]
    fn rational_truncation_is_within_error() {
        let q = rat(1, 3);
        let (d, e) = Dyadic::from_rational_trunc(&q, 64);
        let err = (q - d.to_rational()).abs();
        assert!(err < Dyadic::pow2(e.unwrap()).to_rational());
    }

    #[test]
    fn sqrt_brackets() {
        let (lo, hi) = Dyadic::from_i64(2).sqrt_bounds(80);
        assert!(lo.mul(&lo) <= Dyadic::from_i64(2));
        assert!(hi.mul(&hi) >= Dyadic::from_i64(2));
        let (lo, hi) = Dyadic::from_i64(9).sqrt_bounds(10);
        assert_eq!(lo, Dyadic::from_i64(3));
        assert_eq!(hi, Dyadic::from_i64(3));
    }

    #[test]
    fn div_up_bounds() {
        let q = Dyadic::from_i64(1).div_up(&Dyadic::from_i64(3), 40);
        assert!(q.to_rational() >= rat(1, 3));
        assert!(q.to_rational() - rat(1, 3) < rat(1, 1 << 38));
    }
}
