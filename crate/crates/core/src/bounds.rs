//! Parameter selection, the final lower bound, and a certified audit of the
//! inequality chain behind it.
//!
//! Every quantity is carried as an enclosure of its natural logarithm. `T` is
//! kept as an exact integer while it has at most a configurable number of
//! decimal digits; beyond that only `ln T` is enclosed. Steps comparing
//! numbers such as `T^{NT}` against `H^{3dS^t}` are decided one logarithm
//! further down (`ln(N T ln T)` against `ln(3dS^t ln H)`).

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::ball::{Ball, Dyadic};
use crate::error::{Error, Result};
use crate::heights::{poly_height, sup_norm};
use crate::logmag::{decimal_string, ln_of_positive_rational, LogMagnitude};
use crate::numberfield::{check_q_independence, common_denominator, house_bound, AlgebraicNumber, NumberField};
use crate::poly::HomPoly;
use crate::polysys::{exp_point, poly_eval_ball};
use crate::scalar::{binomial, factorial, format_rational};

/// Default cap on the number of decimal digits of an exactly stored `T`.
pub const DEFAULT_DIGIT_CAP: u64 = 1_000_000;
/// Starting precision of the chain audit.
pub const AUDIT_PREC: u32 = 256;
const MAX_AUDIT_PREC: u32 = 4096;
/// `(cqS)^{18S^t}` is formed exactly up to this many bits.
const EXACT_POWER_BITS: u64 = 1 << 20;
const MAX_RHO_PREC: u32 = 1 << 14;

/// `S = 6 d t (t!) D`.
pub fn choose_s(d: u64, t: u64, degree: u64) -> BigInt {
    BigInt::from(6u32) * d * t * factorial(t) * degree
}

#[derive(Clone, Debug)]
pub struct TheoremParams {
    t: u32,
    d: u32,
    degree: u32,
    c: BigRational,
    q: BigInt,
    height: LogMagnitude,
    s: u64,
    n: u64,
    digit_cap: u64,
}

impl TheoremParams {
    pub fn new(t: u32, d: u32, degree: u32, c: BigRational, q: BigInt, height: LogMagnitude) -> Result<Self> {
        if t == 0 || d == 0 || degree == 0 {
            return Err(Error::Invalid("t, d and D must be positive".into()));
        }
        if !c.is_positive() || !q.is_positive() {
            return Err(Error::Invalid("c and q must be positive".into()));
        }
        if &c * BigRational::from_integer(q.clone()) < BigRational::one() {
            return Err(Error::Precondition("c q >= 1 is required".into()));
        }
        if !height.certainly_at_least_one() {
            return Err(Error::Precondition("the height must be at least 1".into()));
        }
        let s = choose_s(u64::from(d), u64::from(t), u64::from(degree))
            .to_u64()
            .ok_or_else(|| Error::OutOfRange("S does not fit in 64 bits".into()))?;
        let mut p = Self {
            t,
            d,
            degree,
            c,
            q,
            height,
            s: 0,
            n: 0,
            digit_cap: DEFAULT_DIGIT_CAP,
        };
        p.set_s(s)?;
        Ok(p)
    }

    /// Parameters read off a field and the point `alpha`: `t = |alpha|`,
    /// `d = [K:Q]`, `c` the house bound and `q` the common denominator.
    pub fn from_field(field: &NumberField, alpha: &[AlgebraicNumber], degree: u32, height: LogMagnitude) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::Invalid("alpha must have at least one coordinate".into()));
        }
        if !check_q_independence(field, alpha) {
            return Err(Error::Dependent);
        }
        let c = house_bound(field, alpha).to_rational();
        let q = common_denominator(field, alpha);
        Self::new(alpha.len() as u32, field.degree() as u32, degree, c, q, height)
    }

    fn set_s(&mut self, s: u64) -> Result<()> {
        if s == 0 {
            return Err(Error::Invalid("S must be positive".into()));
        }
        let t = u64::from(self.t);
        self.n = binomial(s + t - 1, t)
            .to_u64()
            .ok_or_else(|| Error::OutOfRange("N does not fit in 64 bits".into()))?;
        self.s = s;
        Ok(())
    }

    /// Same parameters with `S` replaced (used to probe the audit's sensitivity).
    pub fn with_s(mut self, s: u64) -> Result<Self> {
        self.set_s(s)?;
        Ok(self)
    }

    pub fn with_digit_cap(mut self, cap: u64) -> Self {
        self.digit_cap = cap;
        self
    }

    pub fn with_height(mut self, height: LogMagnitude) -> Result<Self> {
        if !height.certainly_at_least_one() {
            return Err(Error::Precondition("the height must be at least 1".into()));
        }
        self.height = height;
        Ok(self)
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Total degree `D` of the polynomial.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn height(&self) -> &LogMagnitude {
        &self.height
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    /// `N = |Sigma(S)|`.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn digit_cap(&self) -> u64 {
        self.digit_cap
    }

    pub fn cqs(&self) -> BigRational {
        &self.c * BigRational::from_integer(&self.q * self.s)
    }

    /// `S^t`.
    pub fn s_pow_t(&self) -> BigInt {
        BigInt::from(self.s).pow(self.t)
    }

    /// Exponent `2^{t+2} N` of the first constraint on `T`.
    pub fn growth_exponent(&self) -> BigInt {
        (BigInt::one() << (self.t + 2)) * self.n
    }

    /// Exponent `3 d S^t` of the height.
    pub fn height_exponent(&self) -> BigInt {
        BigInt::from(3 * self.d) * self.s_pow_t()
    }

    pub fn uses_standard_s(&self) -> bool {
        choose_s(u64::from(self.d), u64::from(self.t), u64::from(self.degree)) == BigInt::from(self.s)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "t": self.t,
            "d": self.d,
            "D": self.degree,
            "S": self.s,
            "N": self.n,
            "c": format_rational(&self.c),
            "q": self.q.to_string(),
            "cqS": format_rational(&self.cqs()),
            "H": self.height.to_report(),
            "digit_cap": self.digit_cap,
        })
    }

    fn ln_h(&self, p: u32) -> Ball {
        match self.height.exact() {
            Some(h) => ln_of_positive_rational(h, p),
            None => self.height.ln().clone(),
        }
    }

    fn height_is_one(&self) -> bool {
        self.height.exact().is_some_and(One::is_one)
    }
}

/// How `T` is stored.
#[derive(Clone, Debug)]
pub enum TValue {
    Exact(BigInt),
    /// Enclosure of `ln T`.
    Log(Ball),
}

/// Which of the two constraints on `T` is the binding one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TConstraint {
    /// `T >= (cqS)^{2^{t+2}N}`.
    Growth,
    /// `T^{NT} >= H^{3dS^t}`.
    Height,
}

/// Evidence that `T` is the least integer meeting both constraints.
#[derive(Clone, Debug)]
pub struct MinimalityWitness {
    pub meets_growth: bool,
    pub meets_height: bool,
    pub predecessor_fails_growth: bool,
    pub predecessor_fails_height: bool,
    /// `"exact"`, `"ceiling"` or `"root"`.
    pub method: &'static str,
}

impl MinimalityWitness {
    pub fn holds(&self) -> bool {
        self.meets_growth && self.meets_height && (self.predecessor_fails_growth || self.predecessor_fails_height)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "meets_growth": self.meets_growth,
            "meets_height": self.meets_height,
            "predecessor_fails_growth": self.predecessor_fails_growth,
            "predecessor_fails_height": self.predecessor_fails_height,
            "method": self.method,
            "holds": self.holds(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct TChoice {
    pub value: TValue,
    pub binding: TConstraint,
    pub witness: MinimalityWitness,
}

impl TChoice {
    pub fn exact(&self) -> Option<&BigInt> {
        match &self.value {
            TValue::Exact(t) => Some(t),
            TValue::Log(_) => None,
        }
    }

    pub fn ln(&self, p: u32) -> Result<Ball> {
        match &self.value {
            TValue::Exact(t) => ln_int(t, p),
            TValue::Log(l) => Ok(l.clone()),
        }
    }

    /// `T` as a magnitude.
    pub fn magnitude(&self, p: u32) -> Result<LogMagnitude> {
        Ok(match &self.value {
            TValue::Exact(t) => LogMagnitude::from_int(t, p),
            TValue::Log(l) => LogMagnitude::from_ln(l.clone()),
        })
    }

    pub fn digits(&self) -> Option<usize> {
        let t = self.exact()?;
        let l = ln_int(t, 128).ok()?.div(&Ball::ln10(144), 128).ok()?;
        let (lo, hi) = (l.lower().floor(), l.upper().floor());
        Some(if lo == hi { lo.to_usize()? + 1 } else { t.to_string().len() })
    }

    pub fn to_value(&self) -> Value {
        let ln = self.ln(128).map(|b| decimal_string(&b, 12)).unwrap_or_default();
        let exact = self.exact().filter(|t| t.bits() <= 256).map(ToString::to_string);
        json!({
            "ln": ln,
            "digits": self.digits(),
            "exact": exact,
            "binding": match self.binding {
                TConstraint::Growth => "growth",
                TConstraint::Height => "height",
            },
            "witness": self.witness.to_value(),
        })
    }
}

fn int(n: &BigInt, p: u32) -> Ball {
    Ball::from_int(n).set_prec(p)
}

fn small(n: u64) -> Ball {
    Ball::from_int(&BigInt::from(n))
}

fn ln_int(n: &BigInt, p: u32) -> Result<Ball> {
    Ball::from_int(n).set_prec(p + 16).ln(p)
}

fn ln_rat(q: &BigRational, p: u32) -> Ball {
    ln_of_positive_rational(q, p)
}

fn big_ball(n: &BigInt) -> Ball {
    Ball::from_int(n)
}

/// Certified `N x ln x >= L`, `None` when undecided.
fn height_predicate(n: u64, x: &BigInt, target: &Ball, p: u32) -> Result<Option<bool>> {
    if x <= &BigInt::one() {
        return Ok(Some(target.upper() <= Dyadic::zero()));
    }
    let lhs = small(n) * int(x, p) * ln_int(x, p)?;
    Ok(match lhs.cmp_certified(target) {
        Some(Ordering::Less) => Some(false),
        Some(_) if lhs.lower() >= target.upper() => Some(true),
        _ => None,
    })
}

/// [`height_predicate`] at increasing precision, up to what separates `x` from `x - 1`.
fn decide_height(params: &TheoremParams, x: &BigInt, p: u32) -> Result<Option<bool>> {
    let cap = p.max(x.bits() as u32 + 64);
    let mut wp = p;
    loop {
        if let Some(b) = height_predicate(params.n, x, &height_target(params, wp), wp)? {
            return Ok(Some(b));
        }
        if wp >= cap {
            return Ok(None);
        }
        wp = (wp * 4).min(cap);
    }
}

fn undecided(what: &str) -> Error {
    Error::Precision(format!("could not certify {what}"))
}

/// Smallest `T` with `T >= (cqS)^{2^{t+2}N}` and `T^{NT} >= H^{3dS^t}`.
pub fn choose_t(params: &TheoremParams) -> Result<TChoice> {
    choose_t_at(params, AUDIT_PREC)
}

fn choose_t_at(params: &TheoremParams, p: u32) -> Result<TChoice> {
    let cqs = params.cqs();
    let e = params.growth_exponent();
    let lcqs = ln_rat(&cqs, p);
    let ln_growth = &lcqs * &big_ball(&e);
    let digits = ln_growth.upper().to_f64() / std::f64::consts::LN_10 + 1.0;
    let target = height_target(params, p);
    let n = params.n;

    let exact_growth = digits <= params.digit_cap as f64 && e.to_u32().is_some();
    let growth = if exact_growth {
        let e32 = e.to_u32().expect("checked");
        let num = cqs.numer().pow(e32);
        let dk = cqs.denom().trailing_zeros().unwrap_or(0);
        Some(if cqs.denom() == &(BigInt::one() << dk) {
            // dyadic cqS: ceil by shifting
            let shift = dk * u64::from(e32);
            let quo = &num >> shift;
            let exact = (&quo << shift) == num;
            let t1 = if exact { quo } else { quo + 1u32 };
            let pred_fails = ((&t1 - 1u32) << shift) < num;
            let meets = (&t1 << shift) >= num;
            (t1, meets, pred_fails)
        } else {
            let den = cqs.denom().pow(e32);
            let (quo, rem) = num.div_rem(&den);
            let t1 = if rem.is_zero() { quo } else { quo + 1u32 };
            let pred_fails = (&t1 - 1u32) * &den < num;
            let meets = &t1 * &den >= num;
            (t1, meets, pred_fails)
        })
    } else {
        None
    };

    // does the growth candidate already meet the height constraint?
    let growth_meets_height = if params.height_is_one() {
        true
    } else {
        match &growth {
            Some((t1, _, _)) => decide_height(params, t1, p)?
                .ok_or_else(|| undecided("the height constraint at the growth candidate"))?,
            None => {
                let lhs = small(n).ln(p)? + ln_growth.clone() + ln_growth.ln(p)?;
                let rhs = target.ln(p)?;
                if lhs.lower() >= rhs.upper() {
                    true
                } else if lhs.upper() < rhs.lower() {
                    false
                } else {
                    return Err(undecided("the height constraint at the growth candidate"));
                }
            }
        }
    };

    if growth_meets_height {
        let pred_fails_height = match &growth {
            Some((t1, _, _)) if !params.height_is_one() => {
                matches!(height_predicate(n, &(t1 - 1u32), &target, p)?, Some(false))
            }
            _ => false,
        };
        return Ok(match growth {
            Some((t1, meets, pred_fails)) => TChoice {
                value: TValue::Exact(t1),
                binding: TConstraint::Growth,
                witness: MinimalityWitness {
                    meets_growth: meets,
                    meets_height: true,
                    predecessor_fails_growth: pred_fails,
                    predecessor_fails_height: pred_fails_height,
                    method: "exact",
                },
            },
            None => TChoice {
                // ceil(x) lies in [x, x + 1) and x > 2^p here
                value: TValue::Log(ln_growth.add_error(&Dyadic::pow2(-(p as i64)))),
                binding: TConstraint::Growth,
                witness: MinimalityWitness {
                    meets_growth: true,
                    meets_height: true,
                    predecessor_fails_growth: true,
                    predecessor_fails_height: false,
                    method: "ceiling",
                },
            },
        });
    }
    height_root(params, &target, p)
}

/// `L = 3dS^t ln H`, zero when `H = 1`.
fn height_target(params: &TheoremParams, p: u32) -> Ball {
    if params.height_is_one() {
        Ball::zero()
    } else {
        big_ball(&params.height_exponent()) * params.ln_h(p)
    }
}

/// `T = ceil(u)` for the root `u` of `N u ln u = L`, the height constraint being binding.
fn height_root(params: &TheoremParams, target: &Ball, p: u32) -> Result<TChoice> {
    let n = params.n;
    // v = ln u solves v + ln v = ln(L / N)
    let ln_r = (target.div(&small(n), p)?).ln(p)?;
    let mut v = ln_r.mid().to_f64().max(1.0);
    let r = ln_r.mid().to_f64();
    for _ in 0..200 {
        let next = v - (v + v.ln() - r) / (1.0 + 1.0 / v);
        if (next - v).abs() <= 1e-12 * v.abs().max(1.0) {
            v = next;
            break;
        }
        v = next;
    }
    let digits = v / std::f64::consts::LN_10 + 1.0;
    let f = |x: &Ball| -> Result<Ball> { Ok(x.clone() + x.ln(p)?) };
    if digits <= params.digit_cap as f64 && digits.is_finite() {
        let bits = (v / std::f64::consts::LN_2).ceil() as u32 + 64;
        let wp = p.max(bits + 64);
        let target = height_target(params, wp);
        let ln_r = target.div(&small(n), wp)?.ln(wp)?;
        let mut vb = Ball::from_rational(&f64_rational(v), wp);
        for _ in 0..(2 * wp.ilog2() + 8) {
            let step = (vb.clone() + vb.ln(wp)? - ln_r.clone()).div(&(Ball::one() + Ball::one().div(&vb, wp)?), wp)?;
            vb = Ball::exact(vb.mid().clone()) - Ball::exact(step.mid().clone());
            vb = vb.set_prec(wp);
        }
        let target = &target;
        let u = vb.exp(wp)?;
        let mut t = u.mid().ceil().max(BigInt::from(2u32));
        for _ in 0..256 {
            match height_predicate(n, &t, target, wp)? {
                Some(true) => break,
                Some(false) => t += 1u32,
                None => return Err(undecided("the height constraint")),
            }
        }
        for _ in 0..256 {
            match height_predicate(n, &(&t - 1u32), target, wp)? {
                Some(true) => t -= 1u32,
                Some(false) => break,
                None => return Err(undecided("minimality of T")),
            }
        }
        let meets_height = height_predicate(n, &t, target, wp)? == Some(true);
        let pred_fails_height = height_predicate(n, &(&t - 1u32), target, wp)? == Some(false);
        let meets_growth = ln_int(&t, wp)?.lower() >= (ln_rat(&params.cqs(), wp) * big_ball(&params.growth_exponent())).upper();
        return Ok(TChoice {
            value: TValue::Exact(t),
            binding: TConstraint::Height,
            witness: MinimalityWitness {
                meets_growth,
                meets_height,
                predecessor_fails_growth: false,
                predecessor_fails_height: pred_fails_height,
                method: "exact",
            },
        });
    }
    let delta = 2f64.powi(-40) * v.max(1.0);
    let lo = Ball::from_rational(&f64_rational(v - delta), p);
    let hi = Ball::from_rational(&f64_rational(v + delta), p);
    let certified = f(&lo)?.upper() < ln_r.lower() && f(&hi)?.lower() > ln_r.upper();
    let ln_t = Ball::from_endpoints(&lo.lower(), &hi.upper().add(&Dyadic::pow2(-(p as i64))), p);
    let meets_growth = ln_t.lower() >= (ln_rat(&params.cqs(), p) * big_ball(&params.growth_exponent())).upper();
    Ok(TChoice {
        value: TValue::Log(ln_t),
        binding: TConstraint::Height,
        witness: MinimalityWitness {
            meets_growth,
            meets_height: certified,
            predecessor_fails_growth: false,
            predecessor_fails_height: certified,
            method: "root",
        },
    })
}

fn f64_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// `H^{-3dS^t} exp(-(cqS)^{18S^t})`.
pub fn theorem_bound(params: &TheoremParams, prec: u32) -> Result<LogMagnitude> {
    let p = prec.max(64);
    let cqs = params.cqs();
    let e = BigInt::from(18u32) * params.s_pow_t();
    let bits_est = (cqs.numer().bits() + cqs.denom().bits()) as f64 * e.to_f64().unwrap_or(f64::INFINITY);
    let power = match e.to_u32() {
        Some(e32) if bits_est <= EXACT_POWER_BITS as f64 => {
            let x = BigRational::new(cqs.numer().pow(e32), cqs.denom().pow(e32));
            let bits = x.numer().bits() + x.denom().bits();
            if x.denom().is_one() && bits <= 4096 {
                Ball::from_int(x.numer())
            } else {
                Ball::from_rational(&x, p)
            }
        }
        _ => (ln_rat(&cqs, p + 32) * big_ball(&e)).exp(p)?,
    };
    // enough bits for the height term to remain visible next to the power
    let wp = p.max(power.mid().magnitude_log2_ceil().clamp(0, 1 << 12) as u32 + 64);
    let ln = if params.height_is_one() {
        -power
    } else {
        -(big_ball(&params.height_exponent()) * params.ln_h(wp)).set_prec(wp) - power
    };
    Ok(LogMagnitude::from_ln(ln))
}

/// One inequality `lhs <= rhs` (or `<`) of the chain, compared on the log
/// scale given by `level` (1: `ln`, 2: `ln ln`). `None` stands for `-inf`.
#[derive(Clone, Debug)]
pub struct ChainStep {
    pub name: &'static str,
    pub level: u8,
    pub strict: bool,
    pub lhs_log: Option<Ball>,
    pub rhs_log: Option<Ball>,
    pub pass: bool,
    /// `"exact"`, `"ball"`, or how `T` was certified.
    pub method: &'static str,
}

impl ChainStep {
    /// `rhs - lhs` on the step's scale, in nats.
    pub fn margin(&self) -> Option<Ball> {
        match (&self.lhs_log, &self.rhs_log) {
            (Some(l), Some(r)) => Some(r.clone() - l.clone()),
            _ => None,
        }
    }

    pub fn to_value(&self) -> Value {
        let s = |b: &Option<Ball>| b.as_ref().map_or_else(|| "-inf".to_string(), |b| decimal_string(b, 12));
        json!({
            "name": self.name,
            "lhs_log": s(&self.lhs_log),
            "rhs_log": s(&self.rhs_log),
            "pass": self.pass,
            "level": self.level,
            "strict": self.strict,
            "margin_nats": self.margin().map(|m| decimal_string(&m, 6)),
            "method": self.method,
        })
    }
}

enum Decision {
    Certain(ChainStep),
    Undecided(&'static str),
}

fn ball_step(name: &'static str, level: u8, strict: bool, lhs: Ball, rhs: Ball) -> Decision {
    let pass = if lhs.upper() < rhs.lower() || (!strict && lhs.upper() == rhs.lower()) {
        true
    } else if lhs.lower() > rhs.upper() || (strict && lhs.lower() >= rhs.upper()) {
        false
    } else {
        return Decision::Undecided(name);
    };
    Decision::Certain(ChainStep {
        name,
        level,
        strict,
        lhs_log: Some(lhs),
        rhs_log: Some(rhs),
        pass,
        method: "ball",
    })
}

fn exact_step(name: &'static str, strict: bool, lhs: BigRational, rhs: BigRational, p: u32) -> Decision {
    let pass = if strict { lhs < rhs } else { lhs <= rhs };
    let ln = |q: &BigRational| q.is_positive().then(|| ln_rat(q, p));
    Decision::Certain(ChainStep {
        name,
        level: 1,
        strict,
        lhs_log: ln(&lhs),
        rhs_log: ln(&rhs),
        pass,
        method: "exact",
    })
}

fn given_step(name: &'static str, lhs: Option<Ball>, rhs: Option<Ball>, level: u8, pass: bool, method: &'static str) -> Decision {
    Decision::Certain(ChainStep {
        name,
        level,
        strict: false,
        lhs_log: lhs,
        rhs_log: rhs,
        pass,
        method,
    })
}

fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub params: TheoremParams,
    pub choice: TChoice,
    pub steps: Vec<ChainStep>,
    pub prec: u32,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.pass)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.steps.iter().filter(|s| !s.pass).map(|s| s.name).collect()
    }

    pub fn step(&self, name: &str) -> Option<&ChainStep> {
        self.steps.iter().find(|s| s.name == name)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "params": self.params.to_value(),
            "T": self.choice.to_value(),
            "prec": self.prec,
            "pass": self.passed(),
            "chain": self.steps.iter().map(ChainStep::to_value).collect::<Vec<_>>(),
        })
    }
}

/// Evaluates every inequality used to derive the bound at the actual
/// parameters, raising precision until each step is certified.
pub fn audit_chain(params: &TheoremParams) -> Result<AuditReport> {
    let choice = choose_t(params)?;
    let mut p = AUDIT_PREC;
    loop {
        match chain_at(params, &choice, p)? {
            Ok(steps) => {
                return Ok(AuditReport {
                    params: params.clone(),
                    choice,
                    steps,
                    prec: p,
                })
            }
            Err(name) if p < MAX_AUDIT_PREC => {
                let _ = name;
                p *= 2;
            }
            Err(name) => return Err(undecided(name)),
        }
    }
}

fn chain_at(params: &TheoremParams, choice: &TChoice, p: u32) -> Result<std::result::Result<Vec<ChainStep>, &'static str>> {
    let t = u64::from(params.t);
    let d = u64::from(params.d);
    let dd = u64::from(params.degree);
    let s = params.s;
    let n = params.n;
    let cqs = params.cqs();
    let s_t = params.s_pow_t();
    let t_fact = factorial(t);
    let e = params.growth_exponent();
    let two_t1 = BigInt::one() << (params.t + 1);
    let two_t2 = BigInt::one() << (params.t + 2);

    let lcqs = ln_rat(&cqs, p);
    let ls = small(s).ln(p)?;
    let ln_n = small(n).ln(p)?;
    let l2 = Ball::ln2(p);
    let lh = params.ln_h(p);
    let h_one = params.height_is_one();
    let lt = choice.ln(p)?;
    let (tb, tm1, ltm1) = match &choice.value {
        TValue::Exact(v) => {
            let pm = v - 1u32;
            (int(v, p), int(&pm, p), ln_int(&pm, p)?)
        }
        TValue::Log(l) => {
            let tb = l.exp(p)?;
            // |ln(1 - 1/T)| <= 2/T < 2^-p
            (tb.clone(), tb - Ball::one(), l.add_error(&Dyadic::pow2(-(p as i64))))
        }
    };
    let nb = small(n);
    let nt = &nb * &tb;
    let ln_b0 = (small(2) * tb.clone() - small(2)) * (ln_n.clone() + lt.clone()) + big_ball(&two_t1) * nt.clone() * lcqs.clone();
    let ib = |x: &BigInt| -> Ball { big_ball(x) };

    let mut steps = Vec::new();
    let mut push = |dec: Decision| -> std::result::Result<(), &'static str> {
        match dec {
            Decision::Certain(s) => {
                steps.push(s);
                Ok(())
            }
            Decision::Undecided(name) => Err(name),
        }
    };
    macro_rules! step {
        ($e:expr) => {
            if let Err(name) = push($e) {
                return Ok(Err(name));
            }
        };
    }

    step!(exact_step("cq_at_least_one", false, rat_int(1), params.c.clone() * rat_int(params.q.clone()), p));
    step!(exact_step("s_at_least_two", false, rat_int(2), rat_int(s), p));
    step!(exact_step("s_at_most_cqs", false, rat_int(s), cqs.clone(), p));
    let st_over_fact = BigRational::new(s_t.clone(), t_fact.clone());
    step!(exact_step("n_lower", false, st_over_fact.clone(), rat_int(n), p));
    step!(exact_step("n_upper", false, rat_int(n), st_over_fact.clone() * rat_int(2), p));
    step!(exact_step("six_t_at_most_s", false, rat_int(6 * t), rat_int(s), p));
    step!(exact_step("s_at_most_n", false, rat_int(s), rat_int(n), p));
    step!(exact_step("n_at_most_s_pow_t", false, rat_int(n), rat_int(s_t.clone()), p));
    let dtd = rat_int(BigInt::from(d * t * dd) * BigInt::from(s).pow(params.t - 1));
    let st_6 = BigRational::new(s_t.clone(), &t_fact * 6u32);
    step!(exact_step("degree_exponent", false, dtd, st_6.clone(), p));
    step!(exact_step("degree_exponent_n", false, st_6, BigRational::new(BigInt::from(n), BigInt::from(6u32)), p));
    step!(exact_step("n_at_least_six", false, rat_int(6), rat_int(n), p));
    // NT >= 2e cqS
    step!(ball_step("nt_at_least_2ecqs", 1, false, l2.clone() + Ball::one() + lcqs.clone(), ln_n.clone() + lt.clone()));

    // choice of T
    let w = &choice.witness;
    step!(given_step("t_growth", Some(ib(&e) * lcqs.clone()), Some(lt.clone()), 1, w.meets_growth, choice_method(choice)));
    let height_lhs = (!h_one).then(|| ib(&params.height_exponent()) * lh.clone()).and_then(|x| x.ln(p).ok());
    let ll_t = lt.ln(p)?;
    step!(given_step(
        "t_height",
        height_lhs,
        Some(ln_n.clone() + lt.clone() + ll_t.clone()),
        2,
        w.meets_height,
        if h_one { "vacuous" } else { choice_method(choice) },
    ));
    step!(given_step("t_minimal", None, None, 1, w.holds(), choice_method(choice)));
    step!(ball_step("t_at_least_n", 1, false, ln_n.clone(), lt.clone()));

    // 8S + 2tT <= 6tT <= NT
    let lhs_side = small(8 * s) + small(2 * t) * tb.clone();
    let mid_side = small(6 * t) * tb.clone();
    step!(ball_step("b_side_first", 1, false, lhs_side.ln(p)?, mid_side.ln(p)?));
    step!(exact_step("b_side_second", false, rat_int(6 * t), rat_int(n), p));

    // (t+1)^{8S} S^{2t} T B0 <= T^{2T} (cqS)^{(2^{t+1}+1)NT}
    let ln_b = small(8 * s) * small(t + 1).ln(p)? + small(2 * t) * ls.clone() + lt.clone() + ln_b0.clone();
    let rhs_b = small(2) * tb.clone() * lt.clone() + ib(&(&two_t1 + 1u32)) * nt.clone() * lcqs.clone();
    step!(ball_step("b_estimate", 1, false, ln_b.clone(), rhs_b.clone()));

    // H^{dS^t} (...)^{N/6} (cqS/T)^{NT} T^T < 1
    let h_term = if h_one { Ball::zero() } else { ib(&(BigInt::from(d) * &s_t)) * lh.clone() };
    let sixth = nb.div(&small(6), p)?;
    let eq2 = h_term.clone() + sixth.clone() * ln_b + nt.clone() * (lcqs.clone() - lt.clone()) + tb.clone() * lt.clone();
    step!(ball_step("eq2", 1, true, eq2.clone(), Ball::zero()));
    let majorant = h_term
        + sixth * (small(3) * tb.clone() * lt.clone() + ib(&(&two_t1 + 2u32)) * nt.clone() * lcqs.clone())
        - nt.clone() * lt.clone();
    step!(ball_step("eq2_majorant", 1, true, eq2, majorant.clone()));
    step!(ball_step("eq2_majorant_at_most_one", 1, false, majorant, Ball::zero()));

    // (T-1)^{-N(T-1)} <= (2/T)^{NT-T} <= (cqS/T)^{NT} T^T
    let two_over_t = (nt.clone() - tb.clone()) * (l2.clone() - lt.clone());
    let first = nt.clone() * (lcqs.clone() - lt.clone()) + tb.clone() * lt.clone();
    let lower = -(nb.clone() * tm1.clone() * ltm1.clone());
    step!(ball_step("eq3_first", 1, false, two_over_t.clone(), first));
    step!(ball_step("eq3_second", 1, false, lower, two_over_t));

    // (T-1)^{N(T-1)} <= H^{3dS^t} exp(2^{t+2} N cqS N (cqS)^{2^{t+2}N})
    let ll_tm1 = ltm1.ln(p)?;
    let lhs4 = ln_n.clone() + tm1.ln(p)? + ll_tm1;
    let coef = ib(&two_t2) * nb.clone() * nb.clone();
    let ln_inner = coef.ln(p)? + lcqs.clone() + ib(&e) * lcqs.clone();
    let h3 = if h_one { Ball::zero() } else { ib(&params.height_exponent()) * lh.clone() };
    let rhs4 = (h3.clone() + ln_inner.exp(p)?).ln(p)?;
    step!(ball_step("eq4", 2, false, lhs4.clone(), rhs4));

    // 2^{t+2} N cqS N (cqS)^{2^{t+2}N} <= (cqS)^{18 S^t}, in four steps
    let e_3 = &e + 3 * t + 3;
    step!(ball_step("exponent_first", 2, false, ln_inner, ib(&e_3) * lcqs.clone()));
    let e_main = (&two_t2 + t) * n;
    step!(exact_step("exponent_second", false, rat_int(e_3), rat_int(e_main.clone()), p));
    let e_bracket = BigRational::new((&two_t2 + t) * &s_t * 2u32, t_fact.clone());
    step!(exact_step("exponent_third", false, rat_int(e_main), e_bracket.clone(), p));
    step!(exact_step("exponent_fourth", false, e_bracket, rat_int(&s_t * 18u32), p));

    // (T-1)^{-N(T-1)} >= H^{-3dS^t} exp(-(cqS)^{18S^t})
    let x = (ib(&(&s_t * 18u32)) * lcqs.clone()).exp(p)?;
    let rhs_final = (h3 + x).ln(p)?;
    step!(ball_step("final_bound", 2, false, lhs4, rhs_final));
    Ok(Ok(steps))
}

fn choice_method(choice: &TChoice) -> &'static str {
    choice.witness.method
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Violation,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Violation => "violation",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct MeasureReport {
    pub params: TheoremParams,
    pub bound: LogMagnitude,
    /// Enclosure of `rho = |P(1, e^{alpha})| / ||P||`.
    pub rho: Ball,
    pub verdict: Verdict,
    pub audit: AuditReport,
}

impl MeasureReport {
    pub fn log10_bound(&self) -> String {
        self.bound.log10_string(6)
    }

    pub fn rho_log10_interval(&self) -> Option<(Ball, Ball)> {
        if !self.rho.is_positive() {
            return None;
        }
        let p = self.rho.prec().max(64);
        let ln10 = Ball::ln10(p + 16);
        let lo = Ball::exact(self.rho.lower()).ln(p).ok()?.div(&ln10, p).ok()?;
        let hi = Ball::exact(self.rho.upper()).ln(p).ok()?.div(&ln10, p).ok()?;
        Some((lo, hi))
    }

    pub fn rho_width(&self) -> Dyadic {
        self.rho.rad().shl(1)
    }

    pub fn to_value(&self) -> Value {
        let interval = self.rho_log10_interval().map(|(lo, hi)| {
            json!([lo.lower().to_rational().to_f64().map_or_else(|| lo.to_sci_string(17), |x| format!("{x:.17e}")),
                   hi.upper().to_rational().to_f64().map_or_else(|| hi.to_sci_string(17), |x| format!("{x:.17e}"))])
        });
        let mut params = self.params.to_value();
        params["T"] = self.audit.choice.to_value();
        json!({
            "params": params,
            "log10_bound": self.log10_bound(),
            "rho": decimal_string(&self.rho, 20),
            "rho_width_log2": self.rho_width().magnitude_log2_ceil(),
            "rho_log10_interval": interval,
            "verdict": self.verdict.as_str(),
            "chain": self.audit.steps.iter().map(ChainStep::to_value).collect::<Vec<_>>(),
        })
    }
}

/// Certified `rho` against the bound for a nonzero form `P` in `t + 1`
/// variables over `K`, evaluated at `(1, e^{alpha_1}, ..., e^{alpha_t})`.
pub fn verify_measure(
    field: &Arc<NumberField>,
    alpha: &[AlgebraicNumber],
    p: &HomPoly<AlgebraicNumber>,
    prec: u32,
) -> Result<MeasureReport> {
    verify_measure_capped(field, alpha, p, prec, DEFAULT_DIGIT_CAP)
}

/// [`verify_measure`] with an explicit digit cap for `T`.
pub fn verify_measure_capped(
    field: &Arc<NumberField>,
    alpha: &[AlgebraicNumber],
    p: &HomPoly<AlgebraicNumber>,
    prec: u32,
    digit_cap: u64,
) -> Result<MeasureReport> {
    if p.is_zero() {
        return Err(Error::Invalid("P must be nonzero".into()));
    }
    if p.nvars() != alpha.len() + 1 {
        return Err(Error::Invalid(format!("P has {} variables, expected {}", p.nvars(), alpha.len() + 1)));
    }
    if p.degree() == 0 {
        return Err(Error::Invalid("P must have positive degree".into()));
    }
    let prec = prec.max(64);
    let height = poly_height(field, p.terms().values(), prec)?.h;
    let params = TheoremParams::from_field(field, alpha, p.degree(), height)?.with_digit_cap(digit_cap);
    let bound = theorem_bound(&params, prec)?;
    let audit = audit_chain(&params)?;
    let coeffs: Vec<AlgebraicNumber> = p.terms().values().cloned().collect();
    let target = Dyadic::pow2(-(prec as i64));
    let mut wp = prec + 32;
    let rho = loop {
        let point = exp_point(field, alpha, wp)?;
        let value = poly_eval_ball(field, p, &point, 0, wp)?.abs(wp);
        let norm = sup_norm(field, &coeffs, 0, wp);
        let rho = value.div(&norm, wp).ok();
        match rho {
            Some(r) if r.rad() <= &target && r.is_positive() => break r,
            _ if wp >= MAX_RHO_PREC => break rho.unwrap_or_else(|| Ball::with_radius(Dyadic::zero(), Dyadic::one(), wp)),
            _ => wp *= 2,
        }
    };
    let verdict = if !rho.is_positive() {
        Verdict::Inconclusive
    } else {
        let ln_rho = rho.ln(wp)?;
        match ln_rho.cmp_certified(bound.ln()) {
            Some(Ordering::Less) => Verdict::Violation,
            Some(_) if ln_rho.lower() >= bound.ln().upper() => Verdict::Consistent,
            _ => Verdict::Inconclusive,
        }
    };
    Ok(MeasureReport {
        params,
        bound,
        rho,
        verdict,
        audit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::poly_from_json;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn q_params(t: u32, d: u32, dd: u32, c: BigRational, h: i64) -> TheoremParams {
        TheoremParams::new(t, d, dd, c, BigInt::one(), LogMagnitude::from_i64(h, 128)).unwrap()
    }

    #[test]
    fn s_examples() {
        assert_eq!(choose_s(1, 1, 1), BigInt::from(6));
        assert_eq!(choose_s(2, 2, 1), BigInt::from(48));
        assert_eq!(choose_s(1, 3, 2), BigInt::from(216));
    }

    #[test]
    fn n_and_params() {
        let p = q_params(2, 2, 1, rat(3, 2), 1);
        assert_eq!((p.s(), p.n()), (48, 1176));
        assert_eq!(p.cqs(), rat(72, 1));
        assert!(TheoremParams::new(1, 1, 1, rat(1, 2), BigInt::one(), LogMagnitude::one()).is_err());
    }

    #[test]
    fn t_for_unit_height() {
        let p = q_params(1, 1, 1, rat(1, 1), 1);
        let c = choose_t(&p).unwrap();
        assert_eq!(c.exact(), Some(&BigInt::from(6).pow(48u32)));
        assert_eq!(c.binding, TConstraint::Growth);
        assert!(c.witness.holds());
        assert!(c.witness.predecessor_fails_growth);
    }

    #[test]
    fn t_for_two_variables() {
        let p = q_params(2, 2, 1, rat(3, 2), 1);
        let c = choose_t(&p).unwrap();
        assert!(c.witness.holds());
        let expected = small(16 * 1176) * small(72).ln(256).unwrap();
        assert!(c.ln(256).unwrap().overlaps(&expected));
        // same T once stored as a logarithm only
        let l = choose_t(&p.clone().with_digit_cap(10)).unwrap();
        assert!(matches!(l.value, TValue::Log(_)));
        assert!(l.witness.holds());
        assert!(l.ln(256).unwrap().overlaps(&expected));
    }

    #[test]
    fn t_with_binding_height() {
        // ln H = 10^40 pushes T past (cqS)^{8S} = 6^48
        let p = q_params(1, 1, 1, rat(1, 1), 1)
            .with_height(LogMagnitude::from_ln(Ball::from_int(&BigInt::from(10).pow(40u32))))
            .unwrap();
        let c = choose_t(&p).unwrap();
        assert_eq!(c.binding, TConstraint::Height);
        assert!(c.witness.holds(), "{:?}", c.witness);
        let t = c.exact().unwrap();
        assert!(t > &BigInt::from(6).pow(48u32));
        let log = choose_t(&p.with_digit_cap(5)).unwrap();
        assert_eq!(log.witness.method, "root");
        assert!(log.witness.holds());
        assert!(log.ln(128).unwrap().overlaps(&ln_int(t, 128).unwrap().add_error(&Dyadic::pow2(-30))));
    }

    #[test]
    fn bound_examples() {
        let six108 = Ball::from_int(&BigInt::from(6).pow(108u32));
        let b = theorem_bound(&q_params(1, 1, 1, rat(1, 1), 3), 256).unwrap();
        let expected = -(small(18) * small(3).ln(256).unwrap()) - six108.clone();
        assert!(b.ln().overlaps(&expected));
        let s = b.log10_string(4);
        assert!(s.starts_with("-4.76") && s.ends_with("e83"), "{s}");
        let one = theorem_bound(&q_params(1, 1, 1, rat(1, 1), 1), 256).unwrap();
        assert_eq!(one.ln(), &-six108);
        assert!(one.ln().is_exact());
        let two = theorem_bound(&q_params(2, 2, 1, rat(3, 2), 10), 256).unwrap();
        let x = Ball::from_int(&BigInt::from(72).pow(18 * 48 * 48)).set_prec(256);
        let expected = -(small(3 * 2 * 48 * 48) * small(10).ln(256).unwrap()) - x;
        assert!(two.ln().overlaps(&expected));
    }

    #[test]
    fn audit_examples() {
        for p in [q_params(1, 1, 1, rat(1, 1), 1), q_params(2, 2, 1, rat(3, 2), 1)] {
            let r = audit_chain(&p).unwrap();
            assert!(r.passed(), "{:?}", r.failures());
            assert_eq!(r.steps.len(), 30);
        }
    }

    #[test]
    fn corrupted_s_fails() {
        let p = q_params(1, 1, 1, rat(1, 1), 1).with_s(5).unwrap();
        assert!(!p.uses_standard_s());
        let r = audit_chain(&p).unwrap();
        assert!(!r.passed());
        assert!(r.failures().contains(&"degree_exponent"));
        assert!(r.failures().contains(&"n_at_least_six"));
    }

    #[test]
    fn audit_with_large_height() {
        let p = q_params(1, 1, 2, rat(1, 1), 1)
            .with_height(LogMagnitude::from_ln(Ball::from_int(&BigInt::from(10).pow(200u32))))
            .unwrap();
        let r = audit_chain(&p).unwrap();
        assert_eq!(r.choice.binding, TConstraint::Height);
        assert!(r.passed(), "{:?}", r.failures());
    }

    #[test]
    fn measure_examples() {
        let k = NumberField::rationals();
        let alpha = vec![k.from_i64(1)];
        let p = poly_from_json(&k, r#"{"nvars":2,"degree":1,"terms":[{"exp":[0,1],"coeff":"1"},{"exp":[1,0],"coeff":"-3"}]}"#).unwrap();
        let r = verify_measure(&k, &alpha, &p, 128).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        let e = Ball::one().exp(200).unwrap();
        let rho = (small(3) - e.clone()).div(&small(3), 200).unwrap();
        assert!(r.rho.overlaps(&rho));
        assert!(r.rho_width() < Dyadic::pow2(-60));
        assert!(r.audit.passed());
        let v = r.to_value();
        assert_eq!(v["verdict"], "consistent");
        assert_eq!(v["params"]["S"], 6);
        let x1 = poly_from_json(&k, r#"{"nvars":2,"degree":1,"terms":[{"exp":[0,1],"coeff":"1"}]}"#).unwrap();
        let r = verify_measure(&k, &alpha, &x1, 128).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        assert!(r.rho.overlaps(&e));
        assert!(verify_measure(&k, &alpha, &HomPoly::zero(2, 1), 128).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn bound_is_monotone(h in 1i64..1000, dh in 1i64..1000, cn in 2i64..40, dc in 1i64..8, dd in 1u32..3) {
            let b = |h: i64, c: BigRational, q: i64, dd: u32| {
                let p = TheoremParams::new(1, 1, dd, c, BigInt::from(q), LogMagnitude::from_i64(h, 128)).unwrap();
                theorem_bound(&p, 128).unwrap()
            };
            let c = rat(cn, 2);
            let base = b(h, c.clone(), 1, dd);
            prop_assert!(b(h + dh, c.clone(), 1, dd).certainly_le(&base));
            prop_assert!(b(h, c.clone() + rat(dc, 2), 1, dd).certainly_le(&base));
            prop_assert!(b(h, c.clone(), 2, dd).certainly_le(&base));
            prop_assert!(b(h, c, 1, dd + 1).certainly_le(&base));
        }

        #[test]
        fn witness_holds(cn in 2i64..20, dd in 1u32..3, t in 1u32..3) {
            let p = TheoremParams::new(t, 2, dd, rat(cn, 2), BigInt::one(), LogMagnitude::one()).unwrap();
            prop_assert!(choose_t(&p).unwrap().witness.holds());
        }
    }
}
