use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Ring;

/// Exponent vector with trailing zeros trimmed, so that the same monomial
/// has one representation whatever the ambient number of variables.
///
/// Ordered graded-lexicographically: total degree first, then `X_0` before
/// `X_1` and so on, e.g. `1 < X0 < X1 < X0^2 < X0 X1 < X1^2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Self(exps)
    }

    pub fn one() -> Self {
        Self(Vec::new())
    }

    /// `X_i^e`.
    pub fn var(i: usize, e: u32) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = e;
        Self::new(v)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Exponents padded to `n` entries.
    pub fn exps(&self, n: usize) -> Vec<u32> {
        let mut v = self.0.clone();
        v.resize(n.max(v.len()), 0);
        v
    }

    /// Highest variable index with a nonzero exponent, plus one.
    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self::new((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    pub fn divides(&self, other: &Self) -> bool {
        (0..self.0.len()).all(|i| self.exp(i) <= other.exp(i))
    }

    /// `other / self`, when `self` divides `other`.
    pub fn div_of(&self, other: &Self) -> Option<Self> {
        if !self.divides(other) {
            return None;
        }
        let n = other.0.len();
        Some(Self::new((0..n).map(|i| other.exp(i) - self.exp(i)).collect()))
    }

    pub fn eval<E: Ring>(&self, point: &[E]) -> E {
        self.0
            .iter()
            .enumerate()
            .fold(E::one(), |acc, (i, &e)| acc * point[i].pow_u(e as u64))
    }

    /// All monomials of total degree `degree` in `nvars` variables, ascending.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            let n = cur.len();
            if i + 1 == n {
                cur[i] = left;
                out.push(Monomial::new(cur.clone()));
                cur[i] = 0;
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if nvars == 0 {
            if degree == 0 {
                out.push(Monomial::one());
            }
            return out;
        }
        rec(0, degree, &mut cur, &mut out);
        out.sort();
        out
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

/// Sparse multivariate polynomial; no zero coefficients are stored.
#[derive(Clone, PartialEq)]
pub struct MPoly<F> {
    terms: BTreeMap<Monomial, F>,
}

impl<F: Ring> fmt::Debug for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<F: Ring> MPoly<F> {
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut map: BTreeMap<Monomial, F> = BTreeMap::new();
        for (m, c) in terms {
            let e = map.entry(m).or_insert_with(F::zero);
            *e = e.clone() + c;
        }
        map.retain(|_, c| !c.is_zero());
        Self { terms: map }
    }

    pub fn constant(c: F) -> Self {
        Self::from_terms([(Monomial::one(), c)])
    }

    pub fn var(i: usize) -> Self {
        Self::from_terms([(Monomial::var(i, 1), F::one())])
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, F> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Number of variables actually occurring (highest index + 1).
    pub fn support_len(&self) -> usize {
        self.terms.keys().map(Monomial::support_len).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())))
    }

    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> MPoly<G> {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn eval(&self, point: &[F]) -> F {
        self.eval_with(point, |c| c.clone())
    }

    pub fn eval_with<E: Ring>(&self, point: &[E], embed: impl Fn(&F) -> E) -> E {
        self.terms
            .iter()
            .fold(E::zero(), |acc, (m, c)| acc + embed(c) * m.eval(point))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// Substitutes polynomials for the variables.
    pub fn substitute(&self, images: &[MPoly<F>]) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for i in 0..m.support_len() {
                let e = m.exp(i);
                if e > 0 {
                    t = t * images[i].pow(e);
                }
            }
            out = out + t;
        }
        out
    }
}

impl<F: Ring> Zero for MPoly<F> {
    fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Ring> One for MPoly<F> {
    fn one() -> Self {
        Self::constant(F::one())
    }
}

impl<F: Ring> Add for MPoly<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut terms = self.terms;
        for (m, c) in rhs.terms {
            match terms.get_mut(&m) {
                Some(a) => {
                    *a = a.clone() + c;
                    if a.is_zero() {
                        terms.remove(&m);
                    }
                }
                None => {
                    terms.insert(m, c);
                }
            }
        }
        Self { terms }
    }
}

impl<F: Ring> Neg for MPoly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<F: Ring> Sub for MPoly<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Ring> Mul for MPoly<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out: BTreeMap<Monomial, F> = BTreeMap::new();
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                let m = ma.mul(mb);
                let e = out.entry(m).or_insert_with(F::zero);
                *e = e.clone() + a.clone() * b.clone();
            }
        }
        out.retain(|_, c| !c.is_zero());
        Self { terms: out }
    }
}

impl<F: Ring> Ring for MPoly<F> {
    fn from_bigint(n: &BigInt) -> Self {
        Self::constant(F::from_bigint(n))
    }
    fn is_exact() -> bool {
        F::is_exact()
    }
}

/// Homogeneous polynomial of a fixed degree in a fixed number of variables
/// `X_0, ..., X_{nvars-1}`. The zero form is allowed and keeps its degree.
#[derive(Clone, PartialEq)]
pub struct HomPoly<F> {
    nvars: usize,
    degree: u32,
    poly: MPoly<F>,
}

impl<F: Ring> fmt::Debug for HomPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomPoly(n={}, D={}, {:?})", self.nvars, self.degree, self.poly)
    }
}

impl<F: Ring> HomPoly<F> {
    pub fn new(nvars: usize, degree: u32, poly: MPoly<F>) -> Result<Self> {
        if poly.support_len() > nvars {
            return Err(Error::Invalid(format!(
                "polynomial uses {} variables, expected {nvars}",
                poly.support_len()
            )));
        }
        if let Some((m, _)) = poly.terms().iter().find(|(m, _)| m.degree() != degree) {
            return Err(Error::Invalid(format!(
                "monomial {m:?} has degree {} in a form of degree {degree}",
                m.degree()
            )));
        }
        Ok(Self {
            nvars,
            degree,
            poly,
        })
    }

    pub fn from_terms(
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, F)>,
    ) -> Result<Self> {
        Self::new(
            nvars,
            degree,
            MPoly::from_terms(terms.into_iter().map(|(e, c)| (Monomial::new(e), c))),
        )
    }

    pub fn zero(nvars: usize, degree: u32) -> Self {
        Self {
            nvars,
            degree,
            poly: MPoly::zero(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &MPoly<F> {
        &self.poly
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, F> {
        self.poly.terms()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.poly.coeff(m)
    }

    /// The coefficient list in graded-lex order of the monomials.
    pub fn coefficient_vector(&self) -> Vec<F> {
        self.poly.terms().values().cloned().collect()
    }

    pub fn scale(&self, c: &F) -> Self {
        Self {
            nvars: self.nvars,
            degree: self.degree,
            poly: self.poly.scale(c),
        }
    }

    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> HomPoly<G> {
        HomPoly {
            nvars: self.nvars,
            degree: self.degree,
            poly: self.poly.map(f),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            nvars: self.nvars,
            degree: self.degree,
            poly: self.poly.clone() + other.poly.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            nvars: self.nvars,
            degree: self.degree,
            poly: self.poly.clone() - other.poly.clone(),
        })
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.degree != other.degree {
            return Err(Error::Invalid(format!(
                "forms of shape ({}, {}) and ({}, {}) cannot be added",
                self.nvars, self.degree, other.nvars, other.degree
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            nvars: self.nvars.max(other.nvars),
            degree: self.degree + other.degree,
            poly: self.poly.clone() * other.poly.clone(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            nvars: self.nvars.max(m.support_len()),
            degree: self.degree + m.degree(),
            poly: self.poly.mul_monomial(m),
        }
    }

    pub fn eval(&self, point: &[F]) -> F {
        self.poly.eval(point)
    }

    pub fn eval_with<E: Ring>(&self, point: &[E], embed: impl Fn(&F) -> E) -> E {
        self.poly.eval_with(point, embed)
    }

    /// Image under the linear substitution `X_i -> sum_j a[i][j] X_j`.
    pub fn linear_substitution(&self, a: &[Vec<F>]) -> Self {
        let images: Vec<MPoly<F>> = (0..self.nvars)
            .map(|i| {
                MPoly::from_terms(
                    (0..self.nvars).map(|j| (Monomial::var(j, 1), a[i][j].clone())),
                )
            })
            .collect();
        Self {
            nvars: self.nvars,
            degree: self.degree,
            poly: self.poly.substitute(&images),
        }
    }

    /// Affine polynomial `F(1, x_1, ..., x_t)` in the variables `x_1..x_t`
    /// (re-indexed from zero).
    pub fn dehomogenize(&self) -> MPoly<F> {
        MPoly::from_terms(self.poly.terms().iter().map(|(m, c)| {
            let e = m.exps(self.nvars);
            (Monomial::new(e[1..].to_vec()), c.clone())
        }))
    }
}

/// Homogenization of an affine polynomial in `t` variables to total degree
/// `degree`, using `X_0` as the new variable. Variable `x_i` becomes `X_{i+1}`.
pub fn homogenize<F: Ring>(p: &MPoly<F>, nvars_affine: usize, degree: u32) -> Result<HomPoly<F>> {
    if let Some(d) = p.total_degree() {
        if d > degree {
            return Err(Error::Invalid(format!(
                "polynomial of degree {d} cannot be homogenized to degree {degree}"
            )));
        }
    }
    if p.support_len() > nvars_affine {
        return Err(Error::Invalid("polynomial uses more variables than declared".into()));
    }
    let terms = p.terms().iter().map(|(m, c)| {
        let mut e = vec![degree - m.degree()];
        e.extend(m.exps(nvars_affine));
        (Monomial::new(e), c.clone())
    });
    HomPoly::new(nvars_affine + 1, degree, MPoly::from_terms(terms))
}
