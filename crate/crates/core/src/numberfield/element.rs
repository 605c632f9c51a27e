use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::NumberField;
use crate::poly::UniPoly;
use crate::scalar::{format_rational, ExactDiv, Field, Ring};

/// Element of a number field in power-basis coordinates.
///
/// Rational constants may be created without a field (as `Zero`/`One`
/// require); they acquire one the first time they meet a field element.
/// Equality compares coordinates only.
#[derive(Clone)]
pub struct AlgebraicNumber {
    field: Option<Arc<NumberField>>,
    coords: Vec<BigRational>,
}

impl AlgebraicNumber {
    pub(crate) fn from_parts(field: Option<Arc<NumberField>>, mut coords: Vec<BigRational>) -> Self {
        while coords.last().is_some_and(Zero::is_zero) {
            coords.pop();
        }
        Self { field, coords }
    }

    /// A rational number not yet attached to a field.
    pub fn rational(q: BigRational) -> Self {
        Self::from_parts(None, vec![q])
    }

    pub(crate) fn zero_in(field: &Arc<NumberField>) -> Self {
        Self::from_parts(Some(field.clone()), Vec::new())
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    pub fn with_field(mut self, field: &Arc<NumberField>) -> Self {
        self.field = Some(field.clone());
        self
    }

    /// Trimmed power-basis coordinates (no trailing zeros).
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> BigRational {
        self.coords.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coordinates padded to the field degree.
    pub fn padded_coords(&self, d: usize) -> Vec<BigRational> {
        (0..d.max(self.coords.len())).map(|i| self.coord(i)).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.coords.len() <= 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coord(0))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::from_parts(self.field.clone(), self.coords.iter().map(|c| c * q).collect())
    }

    /// Coordinates as `"p/q"` strings (the last ones may be omitted when zero).
    pub fn to_strings(&self, d: usize) -> Vec<String> {
        self.padded_coords(d).iter().map(format_rational).collect()
    }

    fn merged_field(&self, other: &Self) -> Option<Arc<NumberField>> {
        match (&self.field, &other.field) {
            (Some(a), Some(b)) => {
                debug_assert!(Arc::ptr_eq(a, b) || **a == **b, "mixing elements of different fields");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let field = self.merged_field(other);
        if self.is_rational() || other.is_rational() {
            let (r, x) = if self.is_rational() { (self, other) } else { (other, self) };
            let q = r.coord(0);
            return Self::from_parts(field, x.coords.iter().map(|c| c * &q).collect());
        }
        let f = field.as_ref().expect("non-rational elements carry their field");
        let d = f.degree();
        let mut prod = vec![BigRational::zero(); self.coords.len() + other.coords.len() - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let red = f.reduction();
        let mut out: Vec<BigRational> = prod.iter().take(d).cloned().collect();
        out.resize(d, BigRational::zero());
        for (k, c) in prod.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&red[k - d]) {
                *o += c * r;
            }
        }
        Self::from_parts(field, out)
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.coords.is_empty() {
            return None;
        }
        if self.is_rational() {
            return Some(Self::from_parts(self.field.clone(), vec![self.coord(0).recip()]));
        }
        let f = self.field.as_ref().expect("non-rational elements carry their field");
        let m = UniPoly::new(f.min_poly().iter().map(|c| BigRational::from_integer(c.clone())).collect());
        let a = UniPoly::new(self.coords.clone());
        let (g, s, _) = a.xgcd(&m);
        debug_assert!(g.is_one());
        Some(Self::from_parts(self.field.clone(), s.into_coeffs()))
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "K[{}]", parts.join(", "))
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = format_rational(c);
            terms.push(match i {
                0 => c,
                1 => format!("({c})*t"),
                _ => format!("({c})*t^{i}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Zero for AlgebraicNumber {
    fn zero() -> Self {
        Self::from_parts(None, Vec::new())
    }
    fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
}

impl One for AlgebraicNumber {
    fn one() -> Self {
        Self::rational(BigRational::one())
    }
}

impl Add for AlgebraicNumber {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let field = self.merged_field(&rhs);
        let n = self.coords.len().max(rhs.coords.len());
        Self::from_parts(field, (0..n).map(|i| self.coord(i) + rhs.coord(i)).collect())
    }
}

impl Sub for AlgebraicNumber {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for AlgebraicNumber {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            field: self.field,
            coords: self.coords.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for AlgebraicNumber {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_impl(&rhs)
    }
}

impl Div for AlgebraicNumber {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.mul_impl(&rhs.inverse().expect("division by zero"))
    }
}

impl Ring for AlgebraicNumber {
    fn from_bigint(n: &BigInt) -> Self {
        Self::rational(BigRational::from_integer(n.clone()))
    }
}

impl ExactDiv for AlgebraicNumber {
    fn div_exact(&self, other: &Self) -> Self {
        self.mul_impl(&other.inverse().expect("division by zero"))
    }
}

impl Field for AlgebraicNumber {
    fn try_inv(&self) -> Option<Self> {
        self.inverse()
    }
}
