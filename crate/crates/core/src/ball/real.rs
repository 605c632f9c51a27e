use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::dyadic::{bit_len, Dyadic};
use crate::error::{Error, Result};
use crate::scalar::Ring;

/// Significant bits kept in radii.
const RAD_BITS: u32 = 30;

fn rad_up(d: Dyadic) -> Dyadic {
    d.round_up(RAD_BITS)
}

fn err_term(e: Option<i64>) -> Dyadic {
    e.map(Dyadic::pow2).unwrap_or_else(Dyadic::zero)
}

/// Real midpoint-radius enclosure `[mid - rad, mid + rad]`.
///
/// `prec == 0` marks an exact value: operations between exact balls
/// do not round.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl Ball {
    pub fn exact(mid: Dyadic) -> Self {
        Self {
            mid,
            rad: Dyadic::zero(),
            prec: 0,
        }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::exact(Dyadic::from_i64(n))
    }

    pub fn from_int(n: &BigInt) -> Self {
        Self::exact(Dyadic::from_bigint(n.clone()))
    }

    /// Exact when the rational is dyadic and fits in `prec` bits.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let (mid, e) = Dyadic::from_rational_trunc(q, prec);
        match e {
            None => Self::exact(mid),
            Some(e) => Self {
                mid,
                rad: Dyadic::pow2(e),
                prec,
            },
        }
    }

    /// Smallest ball containing `[lo, hi]`, midpoint rounded to `prec` bits.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        let mid = lo.add(hi).shl(-1);
        let half = hi.sub(lo).shl(-1);
        let (mid, e) = mid.truncate(prec);
        Self {
            mid,
            rad: rad_up(half.add(&err_term(e))),
            prec,
        }
    }

    pub fn with_radius(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        Self {
            mid,
            rad: rad_up(rad.abs()),
            prec,
        }
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    /// Upper bound of `|x|` over the ball.
    pub fn abs_upper(&self) -> Dyadic {
        self.mid.abs().add(&self.rad)
    }

    /// Lower bound of `|x|` over the ball (zero when the ball straddles zero).
    pub fn abs_lower(&self) -> Dyadic {
        let l = self.mid.abs().sub(&self.rad);
        if l.is_negative() {
            Dyadic::zero()
        } else {
            l
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn is_positive(&self) -> bool {
        self.lower() > Dyadic::zero()
    }

    pub fn is_negative(&self) -> bool {
        self.upper() < Dyadic::zero()
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        let lo = self.lower().to_rational();
        let hi = self.upper().to_rational();
        &lo <= q && q <= &hi
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    /// Certified comparison; `None` when the enclosures overlap.
    pub fn cmp_certified(&self, other: &Self) -> Option<Ordering> {
        if self.upper() < other.lower() {
            Some(Ordering::Less)
        } else if self.lower() > other.upper() {
            Some(Ordering::Greater)
        } else if self.is_exact() && other.is_exact() && self.mid == other.mid {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Whether every point is `<=` every point of `other`.
    pub fn certainly_le(&self, other: &Self) -> bool {
        self.upper() <= other.lower()
    }

    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.upper() < other.lower()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn set_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.round()
    }

    fn round(self) -> Self {
        if self.prec == 0 {
            return self;
        }
        let (mid, e) = self.mid.truncate(self.prec);
        Self {
            mid,
            rad: rad_up(self.rad.add(&err_term(e))),
            prec: self.prec,
        }
    }

    pub fn add_error(&self, err: &Dyadic) -> Self {
        Self {
            mid: self.mid.clone(),
            rad: rad_up(self.rad.add(&err.abs())),
            prec: self.prec,
        }
    }

    pub fn hull(&self, other: &Self) -> Self {
        let lo = Dyadic::min(&self.lower(), &other.lower());
        let hi = Dyadic::max(&self.upper(), &other.upper());
        Self::from_endpoints(&lo, &hi, self.prec.max(other.prec))
    }

    pub fn shl(&self, k: i64) -> Self {
        Self {
            mid: self.mid.shl(k),
            rad: self.rad.shl(k),
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        if self.mid.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn sqr(&self) -> Self {
        self.clone() * self.clone()
    }

    fn add_impl(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        // a summand far below the working precision only widens the radius
        if prec > 0 && !self.mid.is_zero() && !other.mid.is_zero() {
            let ta = self.mid.magnitude_log2_ceil();
            let tb = other.mid.magnitude_log2_ceil();
            let slack = prec as i64 + 4;
            if tb < ta - slack {
                return Self {
                    mid: self.mid.clone(),
                    rad: rad_up(self.rad.add(&other.rad).add(&Dyadic::pow2(tb))),
                    prec,
                }
                .round();
            }
            if ta < tb - slack {
                return other.add_impl(self);
            }
        }
        Self {
            mid: self.mid.add(&other.mid),
            rad: rad_up(self.rad.add(&other.rad)),
            prec,
        }
        .round()
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        let mid = self.mid.mul(&other.mid);
        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            Dyadic::zero()
        } else {
            let am = self.mid.abs().round_up(RAD_BITS);
            let bm = other.mid.abs().round_up(RAD_BITS);
            am.mul(&other.rad)
                .add(&bm.mul(&self.rad))
                .add(&self.rad.mul(&other.rad))
        };
        Self {
            mid,
            rad: rad_up(rad),
            prec,
        }
        .round()
    }

    /// `1 / self`; fails when the ball contains zero.
    pub fn recip(&self, prec: u32) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let prec = prec.max(self.prec).max(2);
        let (q, e) = Dyadic::one().div_trunc(&self.mid, prec);
        let mut rad = Dyadic::pow2(e);
        if !self.rad.is_zero() {
            let m = self.mid.abs().round_down(RAD_BITS);
            let gap = m.sub(&self.rad);
            let gap = if gap.is_negative() || gap.is_zero() {
                // the rounded midpoint lost too much; fall back to the exact one
                self.mid.abs().sub(&self.rad)
            } else {
                gap
            };
            let denom = m.mul(&gap).round_down(RAD_BITS);
            let denom = if denom.is_zero() {
                self.mid.abs().mul(&self.mid.abs().sub(&self.rad))
            } else {
                denom
            };
            rad = rad.add(&self.rad.div_up(&denom, RAD_BITS));
        }
        Ok(Self {
            mid: q,
            rad: rad_up(rad),
            prec,
        }
        .round())
    }

    pub fn div(&self, other: &Self, prec: u32) -> Result<Self> {
        if other.is_exact() && self.is_exact() && other.mid == Dyadic::one() {
            return Ok(self.clone());
        }
        Ok(self.clone().set_prec_at_least(prec) * other.recip(prec)?)
    }

    fn set_prec_at_least(mut self, prec: u32) -> Self {
        if self.prec < prec {
            self.prec = prec;
        }
        self.round()
    }

    /// Division by a positive machine integer.
    pub fn div_u64(&self, n: u64, prec: u32) -> Self {
        assert!(n > 0);
        let prec = prec.max(self.prec).max(2);
        let d = Dyadic::from_i64(n as i64);
        let (q, e) = self.mid.div_trunc(&d, prec);
        let rad = self.rad.div_up(&d, RAD_BITS).add(&Dyadic::pow2(e));
        Self {
            mid: q,
            rad: rad_up(rad),
            prec,
        }
        .round()
    }

    pub fn pow_u(&self, e: u64) -> Self {
        Ring::pow_u(self, e)
    }

    pub fn sqrt(&self, prec: u32) -> Result<Self> {
        if self.upper().is_negative() {
            return Err(Error::Domain("square root of a negative ball".into()));
        }
        let lo = self.lower();
        let lo = if lo.is_negative() { Dyadic::zero() } else { lo };
        let wp = prec.max(self.prec) + 8;
        let (l, _) = lo.sqrt_bounds(wp);
        let (_, h) = self.upper().sqrt_bounds(wp);
        Ok(Self::from_endpoints(&l, &h, prec.max(self.prec)))
    }

    /// `exp(self)` enclosure.
    pub fn exp(&self, prec: u32) -> Result<Self> {
        let prec = prec.max(self.prec).max(16);
        if self.is_exact() {
            return exp_point(&self.mid, prec);
        }
        let lo = exp_point(&self.lower(), prec)?;
        let hi = exp_point(&self.upper(), prec)?;
        Ok(Self::from_endpoints(&lo.lower(), &hi.upper(), prec))
    }

    /// Natural logarithm; the ball must be strictly positive.
    pub fn ln(&self, prec: u32) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::Domain("logarithm of a ball not certified positive".into()));
        }
        let prec = prec.max(self.prec).max(16);
        if self.is_exact() {
            return ln_point(&self.mid, prec);
        }
        let lo = ln_point(&self.lower(), prec)?;
        let hi = ln_point(&self.upper(), prec)?;
        Ok(Self::from_endpoints(&lo.lower(), &hi.upper(), prec))
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(&self, prec: u32) -> Result<(Self, Self)> {
        let prec = prec.max(self.prec).max(16);
        let (s, c) = sin_cos_point(&self.mid, prec)?;
        // both are 1-Lipschitz
        Ok((s.add_error(&self.rad), c.add_error(&self.rad)))
    }

    pub fn ln2(prec: u32) -> Self {
        cached_constant(Constant::Ln2, prec)
    }

    pub fn pi(prec: u32) -> Self {
        cached_constant(Constant::Pi, prec)
    }

    pub fn ln10(prec: u32) -> Self {
        cached_constant(Constant::Ln10, prec)
    }

    /// Euler's number.
    pub fn e(prec: u32) -> Self {
        cached_constant(Constant::E, prec)
    }

    /// Scientific-notation string of the midpoint with `digits` significant
    /// digits; works for magnitudes far outside the `f64` range.
    pub fn to_sci_string(&self, digits: usize) -> String {
        dyadic_to_sci(&self.mid, digits)
    }
}

impl Zero for Ball {
    fn zero() -> Self {
        Self::exact(Dyadic::zero())
    }
    fn is_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }
}

impl One for Ball {
    fn one() -> Self {
        Self::exact(Dyadic::one())
    }
}

impl Add for Ball {
    type Output = Ball;
    fn add(self, rhs: Ball) -> Ball {
        self.add_impl(&rhs)
    }
}

impl Sub for Ball {
    type Output = Ball;
    fn sub(self, rhs: Ball) -> Ball {
        self.add_impl(&-rhs)
    }
}

impl Mul for Ball {
    type Output = Ball;
    fn mul(self, rhs: Ball) -> Ball {
        self.mul_impl(&rhs)
    }
}

impl<'a> Mul<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn mul(self, rhs: &Ball) -> Ball {
        self.mul_impl(rhs)
    }
}

impl<'a> Add<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn add(self, rhs: &Ball) -> Ball {
        self.add_impl(rhs)
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball {
            mid: self.mid.neg(),
            rad: self.rad,
            prec: self.prec,
        }
    }
}

impl Ring for Ball {
    fn from_bigint(n: &BigInt) -> Self {
        Ball::from_int(n)
    }
    fn is_exact() -> bool {
        false
    }
}

// ---------------------------------------------------------------------------
// elementary functions on exact points

fn guard(prec: u32) -> u32 {
    prec + 24 + (64 - (prec as u64).leading_zeros())
}

fn exp_point(x: &Dyadic, prec: u32) -> Result<Ball> {
    if x.is_zero() {
        return Ok(Ball::one());
    }
    if x.magnitude_log2_ceil() > 62 {
        return Err(Error::Overflow("exponential argument beyond 2^62".into()));
    }
    let wp0 = guard(prec);
    // x = k ln2 + r
    let approx = Ball::exact(x.clone()).div(&Ball::ln2(64), 64)?;
    let k = approx.mid().round_to_integer();
    let kbits = bit_len(&k) as u32;
    let wp = wp0 + kbits;
    let r = if k.is_zero() {
        Ball::exact(x.clone()).set_prec(wp)
    } else {
        Ball::exact(x.clone()).set_prec(wp) - Ball::ln2(wp) * Ball::from_int(&k)
    };
    let s: u32 = ((wp as f64).sqrt() / 2.0).ceil() as u32 + 1;
    let r = r.shl(-(s as i64));
    let wp = wp + s;
    // |r| <= 2^-s (ln2/2 + tiny) < 2^-s
    let rho = r.abs_upper();
    let mut n = 1u64;
    let mut term_bound = rho.clone();
    // find n with rho^(n+1)/(n+1)! < 2^-wp
    let target = Dyadic::pow2(-(wp as i64));
    while term_bound >= target {
        n += 1;
        term_bound = term_bound.mul(&rho).div_up(&Dyadic::from_i64(n as i64), RAD_BITS);
    }
    let mut acc = Ball::one().set_prec(wp);
    for i in (1..=n).rev() {
        acc = Ball::one() + (&acc * &r).div_u64(i, wp);
    }
    // tail: sum_{i>n} rho^i/i! <= 2 rho^(n+1)/(n+1)! since rho < 1/2
    let tail = term_bound.shl(1);
    let mut acc = acc.add_error(&tail);
    for _ in 0..s {
        acc = acc.sqr();
    }
    let result = acc.shl(i64::try_from(&k).map_err(|_| Error::Overflow("exponent".into()))?);
    Ok(result.set_prec(prec))
}

fn ln_point(x: &Dyadic, prec: u32) -> Result<Ball> {
    if x.is_negative() || x.is_zero() {
        return Err(Error::Domain("logarithm of a nonpositive number".into()));
    }
    if *x == Dyadic::one() {
        return Ok(Ball::zero());
    }
    // x = z 2^e, z in [2/3, 4/3)
    let mut e = x.magnitude_log2_ceil() - 1;
    let z0 = x.shl(-e);
    let four_thirds = BigRational::new(BigInt::from(4), BigInt::from(3));
    let z = if z0.to_rational() >= four_thirds {
        e += 1;
        x.shl(-e)
    } else {
        z0
    };
    let ebits = 64 - (e.unsigned_abs()).leading_zeros();
    let wp = guard(prec) + ebits;
    let zb = Ball::exact(z).set_prec(wp);
    let y = (zb.clone() - Ball::one()).div(&(zb + Ball::one()), wp)?;
    let y2 = y.sqr();
    let rho2 = y2.abs_upper();
    let target = Dyadic::pow2(-(wp as i64) - 2);
    // terms y^(2k+1)/(2k+1), k = 0..n
    let mut n = 0u64;
    let mut pw = y.abs_upper();
    while pw >= target {
        n += 1;
        pw = pw.mul(&rho2).round_up(RAD_BITS);
    }
    let mut acc = Ball::zero().set_prec(wp);
    for k in (0..=n).rev() {
        acc = Ball::one().div_u64(2 * k + 1, wp) + &acc * &y2;
    }
    acc = &acc * &y;
    // tail <= |y|^(2n+3) / (1 - y^2), y^2 <= 1/25
    let tail = pw.mul(&rho2).mul(&Dyadic::new(BigInt::from(25), -4));
    let atanh = acc.add_error(&tail);
    let ln_z = atanh.shl(1);
    let result = if e == 0 {
        ln_z
    } else {
        ln_z + Ball::ln2(wp) * Ball::from_i64(e)
    };
    Ok(result.set_prec(prec))
}

fn sin_cos_point(x: &Dyadic, prec: u32) -> Result<(Ball, Ball)> {
    if x.is_zero() {
        return Ok((Ball::zero(), Ball::one()));
    }
    if x.magnitude_log2_ceil() > 62 {
        return Err(Error::Overflow("trigonometric argument beyond 2^62".into()));
    }
    let wp0 = guard(prec);
    let two_pi_approx = Ball::pi(64).shl(1);
    let k = Ball::exact(x.clone()).div(&two_pi_approx, 64)?.mid().round_to_integer();
    let kbits = bit_len(&k) as u32;
    let s: u32 = 8;
    let wp = wp0 + kbits + 2 * s;
    let r = if k.is_zero() {
        Ball::exact(x.clone()).set_prec(wp)
    } else {
        Ball::exact(x.clone()).set_prec(wp) - Ball::pi(wp).shl(1) * Ball::from_int(&k)
    };
    let r = r.shl(-(s as i64));
    let rho = r.abs_upper();
    let target = Dyadic::pow2(-(wp as i64));
    let r2 = r.sqr();
    // sin: sum (-1)^k r^(2k+1)/(2k+1)!, cos: sum (-1)^k r^(2k)/(2k)!
    let mut n = 1u64;
    let mut tb = rho.clone();
    while tb >= target {
        n += 1;
        tb = tb.mul(&rho).div_up(&Dyadic::from_i64(n as i64), RAD_BITS);
    }
    let m = n / 2 + 1;
    let mut sin_acc = Ball::zero().set_prec(wp);
    let mut cos_acc = Ball::zero().set_prec(wp);
    for k in (0..=m).rev() {
        // (2k+1)(2k+2) and (2k+1)(2k) style Horner steps
        sin_acc = Ball::one() - (&sin_acc * &r2).div_u64((2 * k + 2) * (2 * k + 3), wp);
        cos_acc = Ball::one() - (&cos_acc * &r2).div_u64((2 * k + 1) * (2 * k + 2), wp);
    }
    let tail = tb.shl(1);
    let mut sn = (&sin_acc * &r).add_error(&tail);
    let mut cs = cos_acc.add_error(&tail);
    for _ in 0..s {
        let s2 = (&sn * &cs).shl(1);
        let c2 = Ball::one() - sn.sqr().shl(1);
        sn = s2;
        cs = c2;
    }
    Ok((sn.set_prec(prec), cs.set_prec(prec)))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Constant {
    Ln2,
    Pi,
    Ln10,
    E,
}

fn constant_cache() -> &'static Mutex<HashMap<(Constant, u32), Ball>> {
    static CACHE: OnceLock<Mutex<HashMap<(Constant, u32), Ball>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached_constant(which: Constant, prec: u32) -> Ball {
    // round the request up so nearby precisions share an entry
    let bucket = prec.max(64).next_multiple_of(64);
    if let Some(b) = constant_cache().lock().unwrap().get(&(which, bucket)) {
        return b.clone().set_prec(prec.max(1));
    }
    let value = match which {
        Constant::Ln2 => fixed_point_ln2(bucket),
        Constant::Pi => fixed_point_pi(bucket),
        Constant::Ln10 => ln_point(&Dyadic::from_i64(10), bucket).expect("ln 10"),
        Constant::E => exp_point(&Dyadic::one(), bucket).expect("e"),
    };
    constant_cache()
        .lock()
        .unwrap()
        .insert((which, bucket), value.clone());
    value.set_prec(prec.max(1))
}

/// `sum_{k} 1 / ((2k+1) m^(2k+1))` scaled by `2^bits`, truncated termwise.
/// Returns (sum, number of terms); the accumulated truncation error is
/// below `2.2 * terms + 1.3` units.
fn fixed_point_atanh_inv(m: u64, bits: u64, alternating: bool) -> (BigInt, u64) {
    let one = BigInt::one() << bits;
    let m_big = BigInt::from(m);
    let m2 = &m_big * &m_big;
    let mut power = &one / &m_big; // 2^bits / m^(2k+1)
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if alternating && k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        power = &power / &m2;
        k += 1;
    }
    (sum, k)
}

fn fixed_point_ln2(prec: u32) -> Ball {
    let bits = prec as u64 + 32;
    // ln 2 = 2 atanh(1/3)
    let (s, terms) = fixed_point_atanh_inv(3, bits, false);
    let mid = Dyadic::new(s << 1u32, -(bits as i64));
    let err = Dyadic::new(BigInt::from(5 * (terms + 1)), -(bits as i64));
    Ball::with_radius(mid, err, prec).set_prec(prec)
}

fn fixed_point_pi(prec: u32) -> Ball {
    let bits = prec as u64 + 32;
    // pi = 16 atan(1/5) - 4 atan(1/239)
    let (a, ta) = fixed_point_atanh_inv(5, bits, true);
    let (b, tb) = fixed_point_atanh_inv(239, bits, true);
    let mid = Dyadic::new(a * 16 - b * 4, -(bits as i64));
    let err = Dyadic::new(BigInt::from(48 * (ta + 1) + 12 * (tb + 1)), -(bits as i64));
    Ball::with_radius(mid, err, prec).set_prec(prec)
}

/// Decimal scientific rendering of a dyadic, e.g. `-4.7634e83`.
pub(crate) fn dyadic_to_sci(x: &Dyadic, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let neg = x.is_negative();
    let a = x.abs();
    let f = a.to_f64();
    let (mantissa, exp10) = if f.is_finite() && f > 1e-300 && f < 1e300 {
        let e = f.log10().floor() as i64;
        (f / 10f64.powi(e as i32), e)
    } else {
        // huge or tiny: work through logarithms
        let work = 64 + digits as u32 * 4;
        let ln = ln_point(&a, work + 64).expect("positive");
        let ln10 = Ball::ln10(work + 64);
        let l10 = ln.div(&ln10, work + 64).expect("ln10 > 0");
        let e = l10.mid().floor();
        let frac = l10 - Ball::from_int(&e);
        let m = (frac * ln10).exp(work).expect("bounded").to_f64();
        let e = i64::try_from(&e).unwrap_or(i64::MAX);
        (m, e)
    };
    let (mut m, mut e) = (mantissa, exp10);
    let scale = 10f64.powi(digits as i32 - 1);
    m = (m * scale).round() / scale;
    if m >= 10.0 {
        m /= 10.0;
        e += 1;
    }
    if m < 1.0 {
        m *= 10.0;
        e -= 1;
    }
    let body = format!("{:.*}e{}", digits - 1, m, e);
    if neg {
        format!("-{body}")
    } else {
        body
    }
}
