//! Number fields `K = Q(theta)` given by the minimal polynomial of a
//! primitive element, exact arithmetic on their elements, and certified
//! complex embeddings.

mod element;
mod roots;
mod spec;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ball::{Ball, BallComplex, Dyadic};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::UniPoly;
use crate::scalar::lcm_of_denominators;

pub use element::AlgebraicNumber;
pub use spec::FieldSpec;
pub(crate) use spec::rational as spec_rational;

/// Largest degree accepted; irreducibility is verified exactly up to here.
pub const MAX_DEGREE: usize = 8;

pub struct NumberField {
    min_poly: Vec<BigInt>,
    /// Power-basis coordinates of `theta^(d+k)`, `k = 0..d-1`.
    reduction: Vec<Vec<BigRational>>,
    integral_basis: Vec<Vec<BigRational>>,
    /// Maps power-basis coordinates (row vector) to integral-basis coordinates.
    basis_inverse: Matrix<BigRational>,
    basis_supplied: bool,
    real: Vec<bool>,
    embeddings: Mutex<BTreeMap<u32, Arc<Vec<BallComplex>>>>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("min_poly", &self.min_poly)
            .field("integral_basis", &self.integral_basis)
            .finish()
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly && self.integral_basis == other.integral_basis
    }
}

impl NumberField {
    /// Builds `Q[x]/(min_poly)`. `min_poly` lists integer coefficients from the
    /// constant term up and must be monic and irreducible. Without an
    /// `integral_basis` the power basis is used and
    /// [`basis_is_verified_maximal`](Self::basis_is_verified_maximal) reports `false`.
    pub fn new(min_poly: Vec<BigInt>, integral_basis: Option<Vec<Vec<BigRational>>>) -> Result<Arc<Self>> {
        let mut min_poly = min_poly;
        while min_poly.last().is_some_and(Zero::is_zero) {
            min_poly.pop();
        }
        let d = min_poly.len().saturating_sub(1);
        if d == 0 {
            return Err(Error::Invalid("minimal polynomial must have degree at least 1".into()));
        }
        if !min_poly[d].is_one() {
            return Err(Error::Invalid("minimal polynomial must be monic".into()));
        }
        if d > MAX_DEGREE {
            return Err(Error::Invalid(format!("degree {d} exceeds the supported maximum {MAX_DEGREE}")));
        }
        check_irreducible(&min_poly)?;
        let roots = roots::isolate_roots(&min_poly, 128)?;
        let reduction = reduction_table(&min_poly);
        let (integral_basis, basis_supplied) = match integral_basis {
            Some(b) => (b, true),
            None => (
                (0..d)
                    .map(|i| (0..d).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
                    .collect(),
                false,
            ),
        };
        if integral_basis.len() != d || integral_basis.iter().any(|v| v.len() != d) {
            return Err(Error::IntegralBasis(format!("expected {d} vectors of length {d}")));
        }
        let bmat = Matrix::from_rows(integral_basis.clone());
        if bmat.det_rational().is_zero() {
            return Err(Error::IntegralBasis("basis transition matrix is singular".into()));
        }
        let basis_inverse = bmat.inverse()?;
        let mut cache = BTreeMap::new();
        cache.insert(128, Arc::new(roots.iter().map(|r| r.ball.clone()).collect()));
        let field = Arc::new(Self {
            min_poly,
            reduction,
            integral_basis,
            basis_inverse,
            basis_supplied,
            real: roots.iter().map(|r| r.real).collect(),
            embeddings: Mutex::new(cache),
        });
        if basis_supplied {
            field.validate_basis()?;
        }
        Ok(field)
    }

    /// The field of rationals, presented as `Q[x]/(x - 1)`.
    pub fn rationals() -> Arc<Self> {
        Self::new(vec![BigInt::from(-1), BigInt::one()], None).expect("x - 1 defines Q")
    }

    fn validate_basis(self: &Arc<Self>) -> Result<()> {
        let d = self.degree();
        let omegas: Vec<AlgebraicNumber> = self
            .integral_basis
            .iter()
            .map(|c| self.element(c.clone()))
            .collect::<Result<_>>()?;
        for (i, w) in omegas.iter().enumerate() {
            let cp = self.char_poly(w);
            if cp.coeffs().iter().any(|c| !c.is_integer()) {
                return Err(Error::IntegralBasis(format!(
                    "basis element {i} is not an algebraic integer (characteristic polynomial {cp:?})"
                )));
            }
        }
        if !self.is_integral(&AlgebraicNumber::one()) {
            return Err(Error::IntegralBasis("1 is not in the span of the basis".into()));
        }
        for i in 0..d {
            for j in i..d {
                if !self.is_integral(&(omegas[i].clone() * omegas[j].clone())) {
                    return Err(Error::IntegralBasis(format!(
                        "product of basis elements {i} and {j} leaves the module"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn integral_basis(&self) -> &[Vec<BigRational>] {
        &self.integral_basis
    }

    /// `false` when the power basis was assumed rather than supplied.
    pub fn basis_is_verified_maximal(&self) -> bool {
        self.basis_supplied || self.degree() == 1
    }

    pub fn is_rational_field(&self) -> bool {
        self.degree() == 1
    }

    /// Whether embedding `sigma` is real.
    pub fn embedding_is_real(&self, sigma: usize) -> bool {
        self.real[sigma]
    }

    pub(crate) fn reduction(&self) -> &[Vec<BigRational>] {
        &self.reduction
    }

    pub fn element(self: &Arc<Self>, coords: Vec<BigRational>) -> Result<AlgebraicNumber> {
        if coords.len() > self.degree() {
            return Err(Error::Invalid(format!(
                "{} coordinates given for a field of degree {}",
                coords.len(),
                self.degree()
            )));
        }
        Ok(AlgebraicNumber::from_parts(Some(self.clone()), coords))
    }

    pub fn from_rational(self: &Arc<Self>, q: BigRational) -> AlgebraicNumber {
        AlgebraicNumber::from_parts(Some(self.clone()), vec![q])
    }

    pub fn from_i64(self: &Arc<Self>, n: i64) -> AlgebraicNumber {
        self.from_rational(BigRational::from_integer(n.into()))
    }

    /// The primitive element `theta` (the number 1 when `d = 1`).
    pub fn theta(self: &Arc<Self>) -> AlgebraicNumber {
        if self.degree() == 1 {
            return self.from_rational(BigRational::new(-self.min_poly[0].clone(), BigInt::one()));
        }
        self.element(vec![BigRational::zero(), BigRational::one()]).expect("degree >= 2")
    }

    /// Enclosures of the `d` embeddings of `theta`, each of radius at most
    /// `2^-prec * max(1, |theta_sigma|)`. Index 0 is the designated embedding.
    pub fn theta_enclosures(&self, prec: u32) -> Arc<Vec<BallComplex>> {
        let mut cache = self.embeddings.lock().expect("embedding cache poisoned");
        if let Some((_, v)) = cache.range(prec..).next() {
            return v.clone();
        }
        let v: Arc<Vec<BallComplex>> = Arc::new(
            roots::isolate_roots(&self.min_poly, prec)
                .expect("refining an isolated root always succeeds")
                .into_iter()
                .map(|r| r.ball)
                .collect(),
        );
        cache.insert(prec, v.clone());
        v
    }

    /// `sigma(a)` evaluated with working precision `wp` (no radius target).
    pub fn embed_at(&self, a: &AlgebraicNumber, sigma: usize, wp: u32) -> BallComplex {
        let coords = a.coords();
        if coords.len() <= 1 {
            return BallComplex::from_rational(&a.coord(0), wp);
        }
        let theta = self.theta_enclosures(wp)[sigma].clone().set_prec(wp);
        coords.iter().rev().fold(BallComplex::zero(), |acc, c| {
            acc * theta.clone() + BallComplex::from_rational(c, wp)
        })
    }

    /// `sigma(a)` with radius at most `2^-prec * max(1, |sigma(a)|)`.
    pub fn embed(&self, a: &AlgebraicNumber, sigma: usize, prec: u32) -> BallComplex {
        let size: u64 = a
            .coords()
            .iter()
            .map(|c| c.numer().bits() + c.denom().bits())
            .max()
            .unwrap_or(0);
        let mut wp = prec + 32 + size.min(1 << 20) as u32;
        loop {
            let z = self.embed_at(a, sigma, wp);
            let mag = Dyadic::max(&Dyadic::one(), &z.abs_lower());
            if z.radius() <= mag.mul(&Dyadic::pow2(-(prec as i64))) {
                return z;
            }
            wp *= 2;
        }
    }

    /// All conjugates `sigma(a)`, in embedding order.
    pub fn conjugates(&self, a: &AlgebraicNumber, prec: u32) -> Vec<BallComplex> {
        (0..self.degree()).map(|s| self.embed(a, s, prec)).collect()
    }

    /// Coordinates of `a` in the integral basis.
    pub fn basis_coordinates(&self, a: &AlgebraicNumber) -> Vec<BigRational> {
        let d = self.degree();
        let p: Vec<BigRational> = (0..d).map(|i| a.coord(i)).collect();
        (0..d)
            .map(|j| {
                (0..d).fold(BigRational::zero(), |acc, i| acc + &p[i] * self.basis_inverse.get(i, j))
            })
            .collect()
    }

    /// Whether `a` lies in the `Z`-span of the integral basis.
    pub fn is_integral(&self, a: &AlgebraicNumber) -> bool {
        self.basis_coordinates(a).iter().all(BigRational::is_integer)
    }

    /// Matrix of multiplication by `a` on the power basis (row `i` holds `a theta^i`).
    pub fn multiplication_matrix(self: &Arc<Self>, a: &AlgebraicNumber) -> Matrix<BigRational> {
        let d = self.degree();
        let theta = self.theta();
        let mut rows = Vec::with_capacity(d);
        let mut cur = a.clone().with_field(self);
        for _ in 0..d {
            rows.push((0..d).map(|j| cur.coord(j)).collect());
            cur = cur * theta.clone();
        }
        if d == 1 {
            return Matrix::from_rows(vec![vec![a.coord(0)]]);
        }
        Matrix::from_rows(rows)
    }

    /// Characteristic polynomial of `a` over `Q` (a power of its minimal polynomial).
    pub fn char_poly(self: &Arc<Self>, a: &AlgebraicNumber) -> UniPoly<BigRational> {
        self.multiplication_matrix(a).char_poly()
    }

    /// `(N_{K/Q}(a), Tr_{K/Q}(a))`, exact.
    pub fn norm_trace(self: &Arc<Self>, a: &AlgebraicNumber) -> (BigRational, BigRational) {
        let d = self.degree();
        let cp = self.char_poly(a);
        let sign = if d.is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
        (sign * cp.coeff(0), -cp.coeff(d - 1))
    }

    /// `sigma(theta)` as an element of `K`, when it can be written down:
    /// always for `d <= 2`.
    pub fn automorphism_image(self: &Arc<Self>, sigma: usize) -> Option<AlgebraicNumber> {
        match (self.degree(), sigma) {
            (_, 0) => Some(self.theta()),
            (2, 1) => {
                // theta' = -a_1 - theta
                let a1 = BigRational::from_integer(self.min_poly[1].clone());
                self.element(vec![-a1, -BigRational::one()]).ok()
            }
            _ => None,
        }
    }

    /// Applies the automorphism sending `theta` to `sigma(theta)` to `a`.
    pub fn apply_automorphism(self: &Arc<Self>, a: &AlgebraicNumber, sigma: usize) -> Result<AlgebraicNumber> {
        let image = self
            .automorphism_image(sigma)
            .ok_or_else(|| Error::Invalid(format!("embedding {sigma} is not an automorphism that can be computed")))?;
        let coords: Vec<BigRational> = a.coords().to_vec();
        Ok(coords.iter().rev().fold(AlgebraicNumber::zero_in(self), |acc, c| {
            acc * image.clone() + self.from_rational(c.clone())
        }))
    }
}

fn reduction_table(f: &[BigInt]) -> Vec<Vec<BigRational>> {
    let d = f.len() - 1;
    let mut cur: Vec<BigRational> = f[..d].iter().map(|c| BigRational::from_integer(-c)).collect();
    let mut out = Vec::with_capacity(d.saturating_sub(1));
    for _ in 0..d.saturating_sub(1) {
        out.push(cur.clone());
        // multiply by theta and reduce the overflowing coefficient
        let top = cur[d - 1].clone();
        let mut next = vec![BigRational::zero(); d];
        for i in (1..d).rev() {
            next[i] = cur[i - 1].clone();
        }
        for i in 0..d {
            next[i] = &next[i] - &top * BigRational::from_integer(f[i].clone());
        }
        cur = next;
    }
    out
}

/// Exact irreducibility test for monic integer polynomials of degree at
/// most [`MAX_DEGREE`]: squarefreeness, then every monic factor of degree up
/// to `d/2` is a product of roots whose coefficients must be integers.
fn check_irreducible(f: &[BigInt]) -> Result<()> {
    let d = f.len() - 1;
    if d == 1 {
        return Ok(());
    }
    let fq = UniPoly::new(f.iter().map(|c| BigRational::from_integer(c.clone())).collect());
    let g = fq.gcd(&fq.derivative());
    if g.degree() != Some(0) {
        return Err(Error::Reducible(format!("repeated factor {g:?}")));
    }
    let mut prec = 64;
    'retry: loop {
        let roots = roots::isolate_roots(f, prec)?;
        for k in 1..=d / 2 {
            for subset in subsets(d, k) {
                let mut prod = UniPoly::<BallComplex>::one();
                for &i in &subset {
                    prod = prod * UniPoly::new(vec![-roots[i].ball.clone(), BallComplex::one()]);
                }
                let mut candidate = Vec::with_capacity(k + 1);
                let mut possible = true;
                for c in prod.coeffs() {
                    let int = c.re.mid().round_to_integer();
                    let qi = BigRational::from_integer(int.clone());
                    if !c.contains_rational(&qi) {
                        let lo = c.re.lower().ceil();
                        let hi = c.re.upper().floor();
                        if lo <= hi && c.im.contains_zero() {
                            // an integer is enclosed but not the nearest one: widen
                            prec *= 2;
                            continue 'retry;
                        }
                        possible = false;
                        break;
                    }
                    if c.radius() >= Dyadic::pow2(-1) {
                        prec *= 2;
                        if prec > 1 << 14 {
                            return Err(Error::Precision("irreducibility test".into()));
                        }
                        continue 'retry;
                    }
                    candidate.push(qi);
                }
                if !possible {
                    continue;
                }
                let h = UniPoly::new(candidate);
                let (_, r) = fq.div_rem(&h);
                if r.is_zero() {
                    return Err(Error::Reducible(format!("factor {:?}", h.coeffs())));
                }
            }
        }
        return Ok(());
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Dyadic upper bound `c` for every `|sigma(a)|`, within a factor
/// `1 + 2^-20` of the true maximum.
pub fn house_bound(field: &NumberField, list: &[AlgebraicNumber]) -> Dyadic {
    let mut prec = 40;
    loop {
        let mut hi = Dyadic::zero();
        let mut lo = Dyadic::zero();
        for a in list {
            for z in field.conjugates(a, prec) {
                hi = Dyadic::max(&hi, &z.abs_upper());
                lo = Dyadic::max(&lo, &z.abs_lower());
            }
        }
        let slack = lo.add(&lo.shl(-20));
        if hi <= slack || hi.is_zero() {
            return hi.round_up(40);
        }
        prec *= 2;
    }
}

/// Smallest positive `q` with every `q a_i` in the span of the integral basis:
/// the least common multiple of the denominators of the basis coordinates.
pub fn common_denominator(field: &NumberField, list: &[AlgebraicNumber]) -> BigInt {
    let coords: Vec<BigRational> = list.iter().flat_map(|a| field.basis_coordinates(a)).collect();
    lcm_of_denominators(coords.iter())
}

/// Whether the elements are linearly independent over `Q`.
pub fn check_q_independence(field: &NumberField, list: &[AlgebraicNumber]) -> bool {
    let d = field.degree();
    if list.len() > d {
        return false;
    }
    let m = Matrix::from_rows(list.iter().map(|a| (0..d).map(|i| a.coord(i)).collect()).collect());
    list.is_empty() || m.rank() == list.len()
}

/// Upper bound on `max_sigma |sigma(a)|`, as a ball from [`NumberField::conjugates`].
pub fn max_conjugate_upper(field: &NumberField, a: &AlgebraicNumber, prec: u32) -> Dyadic {
    field
        .conjugates(a, prec)
        .iter()
        .map(BallComplex::abs_upper)
        .fold(Dyadic::zero(), |m, x| Dyadic::max(&m, &x))
}

/// Real enclosure of `|sigma(a)|` for every `sigma`.
pub fn conjugate_magnitudes(field: &NumberField, a: &AlgebraicNumber, prec: u32) -> Vec<Ball> {
    field.conjugates(a, prec).iter().map(|z| z.abs(prec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, Field};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q_sqrt2() -> Arc<NumberField> {
        NumberField::new(ints(&[-2, 0, 1]), None).unwrap()
    }

    fn q_sqrt5_maximal() -> Arc<NumberField> {
        NumberField::new(
            ints(&[-5, 0, 1]),
            Some(vec![vec![rat_int(1), rat_int(0)], vec![rat(1, 2), rat(1, 2)]]),
        )
        .unwrap()
    }

    #[test]
    fn creation_examples() {
        let q = NumberField::rationals();
        assert_eq!(q.degree(), 1);
        assert!(q.theta_enclosures(64)[0].contains_rational(&rat_int(1)));
        let k = q_sqrt2();
        let e = k.theta_enclosures(64);
        assert!((e[0].re.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((e[1].re.to_f64() + std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(!k.basis_is_verified_maximal());
        let g = NumberField::new(ints(&[-1, -1, 1]), None).unwrap();
        let e = g.theta_enclosures(64);
        assert!((e[0].re.to_f64() - 1.618033988749895).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(NumberField::new(ints(&[-1, 0, 1]), None), Err(Error::Reducible(_))));
        assert!(matches!(NumberField::new(ints(&[4, 0, -5, 0, 1]), None), Err(Error::Reducible(_))));
        assert!(matches!(NumberField::new(ints(&[1, 2, 1]), None), Err(Error::Reducible(_))));
        assert!(NumberField::new(ints(&[-2, 0, 2]), None).is_err());
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2): no rational root
        assert!(matches!(NumberField::new(ints(&[4, 0, 0, 0, 1]), None), Err(Error::Reducible(_))));
        assert!(NumberField::new(ints(&[-2, 0, 0, 0, 1]), None).is_ok());
        // sqrt(2)/2 is not an algebraic integer
        let bad = Some(vec![vec![rat_int(1), rat_int(0)], vec![rat_int(0), rat(1, 2)]]);
        assert!(matches!(NumberField::new(ints(&[-2, 0, 1]), bad), Err(Error::IntegralBasis(_))));
        let singular = Some(vec![vec![rat_int(1), rat_int(0)], vec![rat_int(2), rat_int(0)]]);
        assert!(matches!(NumberField::new(ints(&[-2, 0, 1]), singular), Err(Error::IntegralBasis(_))));
    }

    #[test]
    fn conjugate_examples() {
        let k = q_sqrt2();
        let c = k.conjugates(&k.theta(), 60);
        assert!((c[0].re.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!((c[1].re.to_f64() + 2f64.sqrt()).abs() < 1e-15);
        let three = k.conjugates(&k.from_i64(3), 60);
        assert!(three.iter().all(|z| z.contains_rational(&rat_int(3)) && z.radius().is_zero()));
        let k5 = q_sqrt5_maximal();
        let phi = k5.element(vec![rat(1, 2), rat(1, 2)]).unwrap();
        let c = k5.conjugates(&phi, 60);
        assert!((c[0].re.to_f64() - 1.618033988749895).abs() < 1e-15);
        assert!((c[1].re.to_f64() + 0.618033988749895).abs() < 1e-15);
        assert!(*c[0].re.rad() <= Dyadic::pow2(-60).mul(&Dyadic::from_i64(2)));
    }

    #[test]
    fn house_denominator_integrality() {
        let k = q_sqrt2();
        let c = house_bound(&k, &[k.theta()]);
        assert!((c.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-5);
        assert!(c >= Dyadic::from_i64(1));
        let c1 = house_bound(&k, &[k.from_i64(1)]);
        assert_eq!(c1, Dyadic::one());
        let q = NumberField::rationals();
        assert_eq!(common_denominator(&q, &[q.from_rational(rat(1, 2))]), BigInt::from(2));
        assert_eq!(common_denominator(&k, &[k.theta()]), BigInt::from(1));
        let half = k.element(vec![rat_int(0), rat(1, 2)]).unwrap();
        assert_eq!(common_denominator(&k, std::slice::from_ref(&half)), BigInt::from(2));
        assert!(!k.is_integral(&half));
        assert!(!q.is_integral(&q.from_rational(rat(1, 2))));
        let k5 = q_sqrt5_maximal();
        assert!(k5.is_integral(&k5.element(vec![rat(1, 2), rat(1, 2)]).unwrap()));
        assert_eq!(k5.basis_coordinates(&k5.element(vec![rat(1, 2), rat(1, 2)]).unwrap()), vec![rat_int(0), rat_int(1)]);
    }

    #[test]
    fn independence() {
        let k = q_sqrt2();
        assert!(check_q_independence(&k, &[k.from_i64(1), k.theta()]));
        let t2 = k.theta() * k.from_i64(2);
        assert!(!check_q_independence(&k, &[k.theta(), t2]));
        let k5 = q_sqrt5_maximal();
        let phi = k5.element(vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert!(check_q_independence(&k5, &[k5.from_i64(1), phi]));
    }

    #[test]
    fn norm_trace_examples() {
        let k = q_sqrt2();
        assert_eq!(k.norm_trace(&k.theta()), (rat_int(-2), rat_int(0)));
        assert_eq!(k.norm_trace(&k.from_i64(3)), (rat_int(9), rat_int(6)));
        let u = k.from_i64(1) + k.theta();
        assert_eq!(k.norm_trace(&u), (rat_int(-1), rat_int(2)));
    }

    #[test]
    fn automorphism_of_quadratic_field() {
        let k = q_sqrt2();
        let s = k.apply_automorphism(&k.theta(), 1).unwrap();
        assert_eq!(s, -k.theta());
    }

    #[test]
    fn refinement_keeps_root_inside() {
        let k = NumberField::new(ints(&[-2, 0, 0, 1]), None).unwrap();
        let mut last = None;
        for p in [128, 256, 512] {
            let e = k.theta_enclosures(p);
            for z in e.iter() {
                let v = z.clone() * z.clone() * z.clone() - BallComplex::from_i64(2);
                assert!(v.contains_zero());
            }
            let r = e[0].radius();
            if let Some(prev) = last.replace(r.clone()) {
                assert!(r < prev);
            }
        }
    }

    fn cubic_field() -> Arc<NumberField> {
        NumberField::new(ints(&[-3, 1, 0, 1]), None).unwrap()
    }

    fn element_from(k: &Arc<NumberField>, v: &[i64]) -> AlgebraicNumber {
        k.element(v.iter().map(|&x| rat_int(x)).collect()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn norm_is_multiplicative(a in prop::collection::vec(-6i64..7, 3), b in prop::collection::vec(-6i64..7, 3)) {
            let k = cubic_field();
            let (x, y) = (element_from(&k, &a), element_from(&k, &b));
            let prod = x.clone() * y.clone();
            prop_assert_eq!(k.norm_trace(&prod).0, k.norm_trace(&x).0 * k.norm_trace(&y).0);
        }

        #[test]
        fn trace_is_enclosed(a in prop::collection::vec(-9i64..10, 3), den in 1i64..5) {
            let k = cubic_field();
            let x = k.element(a.iter().map(|&c| rat(c, den)).collect()).unwrap();
            let sum = k.conjugates(&x, 64).into_iter().fold(BallComplex::zero(), |s, z| s + z);
            prop_assert!(sum.contains_rational(&k.norm_trace(&x).1));
        }

        #[test]
        fn nonzero_integers_have_a_large_conjugate(a in prop::collection::vec(-20i64..21, 3)) {
            let k = cubic_field();
            let x = element_from(&k, &a);
            prop_assume!(!x.is_zero());
            prop_assert!(k.is_integral(&x));
            prop_assert!(max_conjugate_upper(&k, &x, 64) >= Dyadic::one());
        }

        #[test]
        fn field_axioms(a in prop::collection::vec(-6i64..7, 3), b in prop::collection::vec(-6i64..7, 3), c in prop::collection::vec(-6i64..7, 3)) {
            let k = cubic_field();
            let (x, y, z) = (element_from(&k, &a), element_from(&k, &b), element_from(&k, &c));
            prop_assert_eq!((x.clone() + y.clone()) * z.clone(), x.clone() * z.clone() + y.clone() * z.clone());
            prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
            if !x.is_zero() {
                let inv = x.try_inv().unwrap();
                prop_assert_eq!(x * inv, AlgebraicNumber::one());
            }
        }
    }
}
