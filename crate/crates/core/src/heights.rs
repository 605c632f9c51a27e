//! Absolute Weil heights of points and polynomials over a number field,
//! lengths of polynomials, and the Liouville-type inequality for
//! multihomogeneous integer forms.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ball::{Ball, BallComplex, Dyadic};
use crate::error::{Error, Result};
use crate::linalg::lattice_index;
use crate::logmag::LogMagnitude;
use crate::numberfield::{common_denominator, AlgebraicNumber, NumberField};
use crate::poly::{MPoly, Monomial};

/// Nonzero point of `P^n(K)` given by homogeneous coordinates.
#[derive(Clone, Debug)]
pub struct ProjectivePoint {
    field: Arc<NumberField>,
    coords: Vec<AlgebraicNumber>,
}

impl ProjectivePoint {
    pub fn new(field: &Arc<NumberField>, coords: Vec<AlgebraicNumber>) -> Result<Self> {
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::Invalid("the zero vector is not a projective point".into()));
        }
        Ok(Self {
            field: field.clone(),
            coords: coords.into_iter().map(|c| c.with_field(field)).collect(),
        })
    }

    pub fn from_rationals(field: &Arc<NumberField>, coords: &[BigRational]) -> Result<Self> {
        Self::new(field, coords.iter().map(|q| field.from_rational(q.clone())).collect())
    }

    pub fn from_i64(field: &Arc<NumberField>, coords: &[i64]) -> Result<Self> {
        Self::new(field, coords.iter().map(|&n| field.from_i64(n)).collect())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[AlgebraicNumber] {
        &self.coords
    }

    pub fn scale(&self, lambda: &AlgebraicNumber) -> Result<Self> {
        Self::new(&self.field, self.coords.iter().map(|c| c.clone() * lambda.clone()).collect())
    }
}

#[derive(Clone, Debug)]
pub struct HeightValue {
    pub h_inf: LogMagnitude,
    pub h_fin: LogMagnitude,
    pub h: LogMagnitude,
}

impl HeightValue {
    pub fn exact(&self) -> Option<&BigRational> {
        self.h.exact()
    }
}

/// Ball containing `max(a, b)` for all points of the two balls.
pub fn ball_max(a: &Ball, b: &Ball) -> Ball {
    let lo = Dyadic::max(&a.lower(), &b.lower());
    let hi = Dyadic::max(&a.upper(), &b.upper());
    if lo == hi {
        return Ball::exact(lo);
    }
    Ball::from_endpoints(&lo, &hi, a.prec().max(b.prec()).max(64))
}

/// `max_i |sigma(u_i)|`.
pub fn sup_norm(field: &NumberField, coords: &[AlgebraicNumber], sigma: usize, prec: u32) -> Ball {
    coords
        .iter()
        .map(|c| field.embed(c, sigma, prec).abs(prec))
        .reduce(|a, b| ball_max(&a, &b))
        .unwrap_or_else(Ball::zero)
}

/// Archimedean part `prod_sigma ||u^sigma||^(1/d)`.
pub fn h_inf(u: &ProjectivePoint, prec: u32) -> LogMagnitude {
    let field = &u.field;
    if u.coords.iter().all(AlgebraicNumber::is_rational) {
        let m = u
            .coords
            .iter()
            .map(|c| c.coord(0).abs())
            .max()
            .expect("nonempty point");
        return LogMagnitude::from_rational(&m, prec);
    }
    let d = field.degree();
    let mut p = prec;
    loop {
        let logs: Option<Vec<Ball>> = (0..d).map(|s| sup_norm(field, &u.coords, s, p).ln(p).ok()).collect();
        if let Some(logs) = logs {
            let sum = logs.into_iter().fold(Ball::zero(), |a, b| a + b);
            return LogMagnitude::from_ln(sum.div_u64(d as u64, p));
        }
        p *= 2;
    }
}

/// Non-archimedean part `N(u)^(-1/d)`, computed as `lambda / [O : lambda u O]^(1/d)`
/// where `lambda` clears the denominators of the coordinates. Exact when the
/// lattice index is a perfect `d`-th power.
pub fn h_fin(u: &ProjectivePoint, prec: u32) -> Result<LogMagnitude> {
    let field = &u.field;
    let d = field.degree();
    let nonzero: Vec<&AlgebraicNumber> = u.coords.iter().filter(|c| !c.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::Invalid("zero point".into()));
    }
    let owned: Vec<AlgebraicNumber> = nonzero.iter().map(|c| (*c).clone()).collect();
    let lambda = common_denominator(field, &owned);
    let lam = AlgebraicNumber::rational(BigRational::from_integer(lambda.clone()));
    let omegas: Vec<AlgebraicNumber> = field
        .integral_basis()
        .iter()
        .map(|w| field.element(w.clone()))
        .collect::<Result<_>>()?;
    let mut gens = Vec::with_capacity(owned.len() * d);
    for c in &owned {
        let scaled = c.clone() * lam.clone();
        for w in &omegas {
            let v = field.basis_coordinates(&(scaled.clone() * w.clone()));
            gens.push(v.into_iter().map(|q| q.to_integer()).collect::<Vec<BigInt>>());
        }
    }
    let index = lattice_index(&gens, d)?;
    let root = LogMagnitude::from_int(&index, prec).root(d as u64, prec)?;
    LogMagnitude::from_int(&lambda, prec).div(&root)
}

pub fn h_weil(u: &ProjectivePoint, prec: u32) -> Result<HeightValue> {
    let h_inf = h_inf(u, prec);
    let h_fin = h_fin(u, prec)?;
    let h = h_inf.mul(&h_fin);
    Ok(HeightValue { h_inf, h_fin, h })
}

/// Height of the coefficient vector of a polynomial (terms in monomial order).
pub fn poly_height<'a>(
    field: &Arc<NumberField>,
    coeffs: impl IntoIterator<Item = &'a AlgebraicNumber>,
    prec: u32,
) -> Result<HeightValue> {
    let coords: Vec<AlgebraicNumber> = coeffs.into_iter().cloned().collect();
    if coords.iter().all(Zero::is_zero) {
        return Err(Error::Invalid("zero polynomial has no height".into()));
    }
    h_weil(&ProjectivePoint::new(field, coords)?, prec)
}

/// `H(P) = ||P|| / cont(P)` for an integer polynomial.
pub fn integer_poly_height(p: &MPoly<BigInt>) -> Result<BigRational> {
    let mut g = BigInt::zero();
    let mut m = BigInt::zero();
    for c in p.terms().values() {
        g = num_integer::Integer::gcd(&g, c);
        m = m.max(c.abs());
    }
    if g.is_zero() {
        return Err(Error::Invalid("zero polynomial has no height".into()));
    }
    Ok(BigRational::new(m, g))
}

/// Length (sum of coefficient moduli) of a polynomial with enclosed coefficients.
pub fn poly_length(coeffs: &[BallComplex], prec: u32) -> Result<LogMagnitude> {
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::Invalid("zero polynomial".into()));
    }
    if coeffs.iter().all(|c| c.im.is_zero() && c.re.is_exact()) {
        let s = coeffs
            .iter()
            .fold(BigRational::zero(), |acc, c| acc + c.re.mid().to_rational().abs());
        return Ok(LogMagnitude::from_rational(&s, prec));
    }
    let s = coeffs.iter().fold(Ball::zero(), |acc, c| acc + c.abs(prec));
    LogMagnitude::from_ball(&s, prec)
}

pub fn integer_poly_length(p: &MPoly<BigInt>) -> BigInt {
    p.terms().values().map(Signed::abs).sum()
}

/// Perturbations `epsilon_i` for [`prop_u_check`].
#[derive(Clone, Debug)]
pub enum Perturbation {
    /// Exact elements of `K`; `R(u + epsilon) = 0` is decided exactly.
    Exact(Vec<Vec<AlgebraicNumber>>),
    /// Complex enclosures; the zero condition is certified only up to `2^-prec`.
    Complex(Vec<Vec<BallComplex>>),
}

#[derive(Clone, Debug)]
pub struct PropUReport {
    pub rhs: LogMagnitude,
    pub holds: bool,
    /// `true` when the zero of `R` was only certified numerically.
    pub conditional: bool,
    /// Enclosure of `ln rhs` (the margin in nats).
    pub margin_ln: Ball,
}

fn multidegree(r: &MPoly<BigInt>, blocks: &[usize]) -> Result<Vec<u32>> {
    let mut degs: Option<Vec<u32>> = None;
    for m in r.terms().keys() {
        let mut start = 0;
        let cur: Vec<u32> = blocks
            .iter()
            .map(|&n| {
                let s = (start..start + n).map(|i| m.exp(i)).sum();
                start += n;
                s
            })
            .collect();
        if m.support_len() > start {
            return Err(Error::Invalid("polynomial uses variables outside the declared blocks".into()));
        }
        match &degs {
            None => degs = Some(cur),
            Some(d) if *d != cur => {
                return Err(Error::Invalid("polynomial is not multihomogeneous".into()));
            }
            _ => {}
        }
    }
    degs.ok_or_else(|| Error::Invalid("zero polynomial".into()))
}

/// Checks `1 <= 2^(N_0+..+N_t) L(R)^d prod H(u_i)^(d N_i) max ||eps_i|| / ||u_i||`
/// for an integer multihomogeneous `R` whose variables are the blocks of `u`
/// concatenated, given `R(u) != 0` and `R(u + eps) = 0`.
pub fn prop_u_check(
    field: &Arc<NumberField>,
    r: &MPoly<BigInt>,
    u: &[Vec<AlgebraicNumber>],
    eps: &Perturbation,
    prec: u32,
) -> Result<PropUReport> {
    let blocks: Vec<usize> = u.iter().map(Vec::len).collect();
    let degs = multidegree(r, &blocks)?;
    let flat_u: Vec<AlgebraicNumber> = u.iter().flatten().map(|c| c.clone().with_field(field)).collect();
    let ru = r.eval_with(&flat_u, |c| AlgebraicNumber::rational(BigRational::from_integer(c.clone())));
    if ru.is_zero() {
        return Err(Error::Precondition("R(u) = 0".into()));
    }
    let d = field.degree() as u64;
    let (eps_norms, conditional): (Vec<Ball>, bool) = match eps {
        Perturbation::Exact(e) => {
            if e.iter().map(Vec::len).collect::<Vec<_>>() != blocks {
                return Err(Error::Invalid("perturbation shape differs from the point".into()));
            }
            let shifted: Vec<AlgebraicNumber> = u
                .iter()
                .flatten()
                .zip(e.iter().flatten())
                .map(|(a, b)| (a.clone() + b.clone()).with_field(field))
                .collect();
            let v = r.eval_with(&shifted, |c| AlgebraicNumber::rational(BigRational::from_integer(c.clone())));
            if !v.is_zero() {
                return Err(Error::Precondition("R(u + epsilon) != 0".into()));
            }
            (e.iter().map(|blk| sup_norm(field, blk, 0, prec)).collect(), false)
        }
        Perturbation::Complex(e) => {
            if e.iter().map(Vec::len).collect::<Vec<_>>() != blocks {
                return Err(Error::Invalid("perturbation shape differs from the point".into()));
            }
            let shifted: Vec<BallComplex> = u
                .iter()
                .flatten()
                .zip(e.iter().flatten())
                .map(|(a, b)| field.embed(a, 0, prec) + b.clone())
                .collect();
            let v = r.eval_with(&shifted, |c| BallComplex::real(Ball::from_int(c)));
            if v.abs_upper() >= Dyadic::pow2(-(prec as i64)) {
                return Err(Error::Precondition("R(u + epsilon) is not certified to vanish".into()));
            }
            let norms = e
                .iter()
                .map(|blk| {
                    blk.iter()
                        .map(|z| z.abs(prec))
                        .reduce(|a, b| ball_max(&a, &b))
                        .unwrap_or_else(Ball::zero)
                })
                .collect();
            (norms, true)
        }
    };
    let mut ratio: Option<Ball> = None;
    for (i, blk) in u.iter().enumerate() {
        let un = sup_norm(field, blk, 0, prec);
        let q = eps_norms[i].div(&un, prec)?;
        ratio = Some(match ratio {
            None => q,
            Some(m) => ball_max(&m, &q),
        });
    }
    let ratio = ratio.ok_or_else(|| Error::Invalid("empty point list".into()))?;
    let ratio = if ratio.is_exact() {
        LogMagnitude::from_rational(&ratio.mid().to_rational(), prec)
    } else {
        LogMagnitude::from_ball(&ratio, prec)?
    };
    let total: u64 = degs.iter().map(|&n| n as u64).sum();
    let mut rhs = LogMagnitude::from_int(&(BigInt::one() << total), prec)
        .mul(&LogMagnitude::from_int(&integer_poly_length(r), prec).pow_u(d));
    for (i, blk) in u.iter().enumerate() {
        let h = h_weil(&ProjectivePoint::new(field, blk.clone())?, prec)?;
        rhs = rhs.mul(&h.h.pow_u(d * degs[i] as u64));
    }
    let rhs = rhs.mul(&ratio);
    let holds = rhs.certainly_at_least_one();
    Ok(PropUReport {
        margin_ln: rhs.ln_abs().cloned().unwrap_or_else(Ball::zero),
        rhs,
        holds,
        conditional,
    })
}

/// The 2x2 determinant `U00 U11 - U01 U10` in the variable order
/// `(U00, U01, U10, U11)`.
pub fn det2_form() -> MPoly<BigInt> {
    MPoly::from_terms([
        (Monomial::new(vec![1, 0, 0, 1]), BigInt::one()),
        (Monomial::new(vec![0, 1, 1, 0]), -BigInt::one()),
    ])
}
