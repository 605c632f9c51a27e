//! Hermite interpolation at the points `m . alpha`, the auxiliary function
//! `g = phi(e^x)` and the integrality and size estimates for its values.
//!
//! The basis `A_{m,j}` is built by the local product formula
//! `A_{m,j}(x) = prod_{m' != m} (x - m'.alpha)^T * P_{m,j}(x - m.alpha)`
//! with `P_{m,j}` a truncated inverse series, and compared against the
//! confluent Vandermonde solve.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::ball::{Ball, BallComplex, Dyadic};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::logmag::LogMagnitude;
use crate::numberfield::{check_q_independence, common_denominator, house_bound, AlgebraicNumber, NumberField};
use crate::poly::UniPoly;
use crate::scalar::{factorial, falling_factorial, Field, Ring};

/// Largest `N * T` accepted for an exact basis.
pub const MAX_NT: usize = 1024;
/// Largest `S * T` at which the basis is always compared with the linear solve.
pub const FULL_CHECK_ST: u64 = 64;
pub const START_PREC: u32 = 128;
pub const MAX_PREC: u32 = 1 << 20;

/// `{m in N^t : |m| < s}` in graded-lexicographic order.
pub fn sigma_set(s: u32, t: usize) -> Vec<Vec<u32>> {
    fn rec(rest: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in (0..=rest).rev() {
            cur.push(first);
            rec(rest - first, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if t == 0 {
        return out;
    }
    for d in 0..s {
        rec(d, t, &mut Vec::with_capacity(t), &mut out);
    }
    out
}

/// `|Sigma(s)| = binomial(s + t - 1, t)`.
pub fn sigma_size(s: u32, t: usize) -> BigInt {
    crate::scalar::binomial(u64::from(s) + t as u64 - 1, t as u64)
}

fn dot(m: &[i64], alpha: &[AlgebraicNumber]) -> AlgebraicNumber {
    m.iter()
        .zip(alpha)
        .fold(AlgebraicNumber::zero(), |acc, (&mi, a)| acc + a.scale(&BigRational::from_integer(mi.into())))
}

fn dot_u(m: &[u32], alpha: &[AlgebraicNumber]) -> AlgebraicNumber {
    dot(&m.iter().map(|&x| i64::from(x)).collect::<Vec<_>>(), alpha)
}

/// Parameters `(t, S, T, alpha, c, q)` of the auxiliary construction.
#[derive(Clone, Debug)]
pub struct AuxParams {
    field: Arc<NumberField>,
    alpha: Vec<AlgebraicNumber>,
    s: u32,
    t_mult: u32,
    c: Dyadic,
    q: BigInt,
    n: usize,
}

impl AuxParams {
    pub fn new(field: &Arc<NumberField>, alpha: Vec<AlgebraicNumber>, s: u32, t_mult: u32) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::Invalid("alpha must have at least one coordinate".into()));
        }
        if s == 0 || t_mult == 0 {
            return Err(Error::Invalid("S and T must be positive".into()));
        }
        if alpha.iter().any(Zero::is_zero) {
            return Err(Error::Invalid("every alpha_i must be nonzero".into()));
        }
        if !check_q_independence(field, &alpha) {
            return Err(Error::Dependent);
        }
        let alpha: Vec<AlgebraicNumber> = alpha.into_iter().map(|a| a.with_field(field)).collect();
        let n = sigma_size(s, alpha.len())
            .to_usize()
            .ok_or_else(|| Error::OutOfRange("|Sigma(S)| does not fit in memory".into()))?;
        Ok(Self {
            c: house_bound(field, &alpha),
            q: common_denominator(field, &alpha),
            field: field.clone(),
            alpha,
            s,
            t_mult,
            n,
        })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn alpha(&self) -> &[AlgebraicNumber] {
        &self.alpha
    }

    pub fn t(&self) -> usize {
        self.alpha.len()
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// The multiplicity `T`.
    pub fn mult(&self) -> u32 {
        self.t_mult
    }

    /// House bound `c` for `alpha`.
    pub fn c(&self) -> &Dyadic {
        &self.c
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// `N = |Sigma(S)|`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nt(&self) -> usize {
        self.n * self.t_mult as usize
    }

    /// `c q S` as an exact rational.
    pub fn cqs(&self) -> BigRational {
        self.c.to_rational() * BigRational::from_integer(&self.q * BigInt::from(self.s))
    }

    /// Interpolation nodes `m . alpha` for `m` in `Sigma(S)`.
    pub fn nodes(&self) -> Vec<AlgebraicNumber> {
        sigma_set(self.s, self.t()).iter().map(|m| dot_u(m, &self.alpha)).collect()
    }

    /// Whether `N >= 6` and `NT >= 2 e c q S` are certified.
    pub fn prop_q_hypothesis(&self) -> std::result::Result<(), String> {
        if self.n < 6 {
            return Err(format!("N = {} < 6", self.n));
        }
        let rhs = Ball::e(64) * Ball::from_rational(&self.cqs(), 128).shl(1);
        let nt = Ball::from_i64(self.nt() as i64);
        if !rhs.certainly_le(&nt) {
            return Err(format!("NT = {} < 2ecqS ~ {:.4}", self.nt(), rhs.to_f64()));
        }
        Ok(())
    }
}

/// Basis `A_{m,j}` of polynomials of degree `< NT` dual to the Hermite
/// conditions `A_{m,j}^{(l)}(x_n) = [n = m][l = j]`.
#[derive(Clone, Debug)]
pub struct HermiteBasis<F: Ring> {
    points: Vec<F>,
    mult: usize,
    polys: Vec<UniPoly<F>>,
}

impl<F: Field> HermiteBasis<F> {
    fn check_points(points: &[F], mult: usize) -> Result<()> {
        if points.is_empty() || mult == 0 {
            return Err(Error::Invalid("empty interpolation problem".into()));
        }
        if points.len() * mult > MAX_NT {
            return Err(Error::OutOfRange(format!("NT = {} exceeds {MAX_NT}", points.len() * mult)));
        }
        for (i, a) in points.iter().enumerate() {
            if points[..i].iter().any(|b| b == a) {
                return Err(Error::Invalid("duplicate interpolation points".into()));
            }
        }
        Ok(())
    }

    /// Local construction through truncated inverse series.
    pub fn local(points: Vec<F>, mult: usize) -> Result<Self> {
        Self::check_points(&points, mult)?;
        let mut polys = Vec::with_capacity(points.len() * mult);
        for (i, xm) in points.iter().enumerate() {
            let mut outer = UniPoly::one();
            let mut shifted = UniPoly::one();
            for (k, xk) in points.iter().enumerate() {
                if k == i {
                    continue;
                }
                outer = outer * UniPoly::linear_root(xk.clone()).pow(mult as u32);
                let d = xk.clone() - xm.clone();
                shifted = shifted.mul_trunc(&UniPoly::linear_root(d).pow(mult as u32), mult);
            }
            let inv = shifted.inverse_series(mult).expect("distinct nodes give a unit");
            let back = -xm.clone();
            for j in 0..mult {
                let jf = F::from_bigint(&factorial(j as u64)).try_inv().expect("j! is invertible");
                let p = UniPoly::monomial(jf, j).mul_trunc(&inv, mult);
                polys.push(outer.clone() * p.shift(&back));
            }
        }
        Ok(Self { points, mult, polys })
    }

    /// Row `(n, l)` of the confluent Vandermonde matrix: `k^{(l)} x_n^{k-l}`.
    fn vandermonde(points: &[F], mult: usize) -> Matrix<F> {
        let nt = points.len() * mult;
        let mut rows = Vec::with_capacity(nt);
        for x in points {
            let pows: Vec<F> = std::iter::successors(Some(F::one()), |p| Some(p.clone() * x.clone()))
                .take(nt)
                .collect();
            for l in 0..mult {
                rows.push(
                    (0..nt)
                        .map(|k| {
                            if k < l {
                                F::zero()
                            } else {
                                pows[k - l].clone() * F::from_bigint(&falling_factorial(k as u64, l as u64))
                            }
                        })
                        .collect(),
                );
            }
        }
        Matrix::from_rows(rows)
    }

    /// Construction by solving `V C = I` exactly.
    pub fn solve(points: Vec<F>, mult: usize) -> Result<Self> {
        Self::check_points(&points, mult)?;
        let nt = points.len() * mult;
        let v = Self::vandermonde(&points, mult);
        let c = v.solve(&Matrix::identity(nt))?;
        let polys = (0..nt).map(|col| UniPoly::new((0..nt).map(|k| c.get(k, col).clone()).collect())).collect();
        Ok(Self { points, mult, polys })
    }

    pub fn points(&self) -> &[F] {
        &self.points
    }

    pub fn mult(&self) -> usize {
        self.mult
    }

    /// `N T`.
    pub fn dim(&self) -> usize {
        self.polys.len()
    }

    pub fn poly(&self, m: usize, j: usize) -> &UniPoly<F> {
        &self.polys[m * self.mult + j]
    }

    pub fn polys(&self) -> &[UniPoly<F>] {
        &self.polys
    }

    /// Exact duality check restricted to the given basis columns.
    pub fn check_duality_for(&self, cols: impl IntoIterator<Item = usize>) -> bool {
        let nt = self.dim();
        cols.into_iter().all(|col| {
            let p = &self.polys[col];
            if p.degree().is_some_and(|d| d >= nt) {
                return false;
            }
            let mut der = p.clone();
            (0..self.mult).all(|l| {
                let ok = self.points.iter().enumerate().all(|(n, x)| {
                    let v = der.eval(x);
                    if n * self.mult + l == col { v.is_one() } else { v.is_zero() }
                });
                der = der.derivative();
                ok
            })
        })
    }

    pub fn check_duality(&self) -> bool {
        self.check_duality_for(0..self.dim())
    }

    /// Coefficientwise equality with another basis for the same problem.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.points == other.points && self.mult == other.mult && self.polys == other.polys
    }

    /// `phi(f) = f - sum f^{(j)}(x_m) A_{m,j}`.
    pub fn phi_apply(&self, f: &UniPoly<F>) -> UniPoly<F> {
        let mut out = f.clone();
        let mut der = f.clone();
        for j in 0..self.mult {
            for (m, x) in self.points.iter().enumerate() {
                let v = der.eval(x);
                if !v.is_zero() {
                    out = out - self.poly(m, j).scale(&v);
                }
            }
            der = der.derivative();
        }
        out
    }

    /// `phi(x^k) = x^k - sum k^{(j)} x_m^{k-j} A_{m,j}`, zero for `k < NT`.
    pub fn phi_monomial(&self, k: usize) -> UniPoly<F> {
        if k < self.dim() {
            return UniPoly::zero();
        }
        let mut out = UniPoly::monomial(F::one(), k);
        for j in 0..self.mult {
            let ff = F::from_bigint(&falling_factorial(k as u64, j as u64));
            for (m, x) in self.points.iter().enumerate() {
                let v = x.pow_u((k - j) as u64) * ff.clone();
                if !v.is_zero() {
                    out = out - self.poly(m, j).scale(&v);
                }
            }
        }
        out
    }

    /// `sum_{k >= NT} c_k phi(x^k)` for a truncated series `sum c_k x^k`.
    pub fn phi_apply_series(&self, coeffs: &[F]) -> UniPoly<F> {
        coeffs
            .iter()
            .enumerate()
            .skip(self.dim())
            .filter(|(_, c)| !c.is_zero())
            .fold(UniPoly::zero(), |acc, (k, c)| acc + self.phi_monomial(k).scale(c))
    }

    /// Basis as JSON: one list of coefficients per `(m, j)`.
    pub fn to_value_with(&self, fmt: impl Fn(&F) -> Value) -> Value {
        Value::Array(
            self.polys
                .iter()
                .map(|p| Value::Array(p.coeffs().iter().map(&fmt).collect()))
                .collect(),
        )
    }
}

impl HermiteBasis<AlgebraicNumber> {
    pub fn to_value(&self, degree: usize) -> Value {
        self.to_value_with(|c| json!(c.to_strings(degree)))
    }
}

/// Builds the basis for `params` by the local construction and checks it
/// against the linear solve (all columns when `S T <= 64`, otherwise
/// an exact duality test on a spread of columns).
pub fn hermite_basis(params: &AuxParams) -> Result<HermiteBasis<AlgebraicNumber>> {
    let nodes = params.nodes();
    let mult = params.mult() as usize;
    let basis = HermiteBasis::local(nodes.clone(), mult)?;
    let verified = if u64::from(params.s()) * u64::from(params.mult()) <= FULL_CHECK_ST {
        basis.agrees_with(&HermiteBasis::solve(nodes, mult)?)
    } else {
        let step = (basis.dim() / 16).max(1);
        basis.check_duality_for((0..basis.dim()).step_by(step).chain([basis.dim() - 1]))
    };
    if !verified {
        return Err(Error::Invalid("local Hermite construction disagrees with the linear solve".into()));
    }
    Ok(basis)
}

/// Basis together with the exact values `A_{m,j}^{(l)}(n . alpha)` for
/// `n` in `Sigma(S + 1)`.
#[derive(Clone, Debug)]
pub struct AuxFunction {
    params: AuxParams,
    basis: HermiteBasis<AlgebraicNumber>,
    targets: Vec<Vec<u32>>,
    target_points: Vec<AlgebraicNumber>,
    // values[n][l][m * T + j]
    values: Vec<Vec<Vec<AlgebraicNumber>>>,
}

impl AuxFunction {
    pub fn new(params: AuxParams) -> Result<Self> {
        let basis = hermite_basis(&params)?;
        Ok(Self::from_basis(params, basis))
    }

    pub fn from_basis(params: AuxParams, basis: HermiteBasis<AlgebraicNumber>) -> Self {
        let targets = sigma_set(params.s() + 1, params.t());
        let target_points: Vec<AlgebraicNumber> = targets.iter().map(|n| dot_u(n, params.alpha())).collect();
        let mult = params.mult() as usize;
        let derivs: Vec<Vec<UniPoly<AlgebraicNumber>>> = basis
            .polys()
            .par_iter()
            .map(|p| {
                let mut out = Vec::with_capacity(mult);
                let mut d = p.clone();
                for _ in 0..mult {
                    let next = d.derivative();
                    out.push(d);
                    d = next;
                }
                out
            })
            .collect();
        let values = target_points
            .par_iter()
            .map(|z| (0..mult).map(|l| derivs.iter().map(|ds| ds[l].eval(z)).collect()).collect())
            .collect();
        Self {
            params,
            basis,
            targets,
            target_points,
            values,
        }
    }

    pub fn params(&self) -> &AuxParams {
        &self.params
    }

    pub fn basis(&self) -> &HermiteBasis<AlgebraicNumber> {
        &self.basis
    }

    /// `Sigma(S + 1)`, whose first `N` entries are `Sigma(S)`.
    pub fn targets(&self) -> &[Vec<u32>] {
        &self.targets
    }

    pub fn target_point(&self, n: usize) -> &AlgebraicNumber {
        &self.target_points[n]
    }

    pub fn index_of(&self, n: &[u32]) -> Option<usize> {
        self.targets.iter().position(|m| m.as_slice() == n)
    }

    /// `A_{m,j}^{(l)}(n . alpha)` with `n`, `m` given as indices into [`AuxFunction::targets`].
    pub fn value(&self, m: usize, j: usize, n: usize, l: usize) -> &AlgebraicNumber {
        &self.values[n][l][m * self.params.mult() as usize + j]
    }

    /// `sum_j A_{m,j}^{(l)}(n . alpha)`: the coefficient of `X^m` in `Q_{n,l}`.
    pub fn q_coefficient(&self, m: usize, n: usize, l: usize) -> AlgebraicNumber {
        (0..self.params.mult() as usize).fold(AlgebraicNumber::zero(), |acc, j| acc + self.value(m, j, n, l).clone())
    }

    fn check_index(&self, n: usize, l: usize) -> Result<()> {
        if n >= self.targets.len() || l >= self.params.mult() as usize {
            return Err(Error::OutOfRange(format!("(n, l) = ({n}, {l}) outside Sigma(S+1) x [0, T)")));
        }
        Ok(())
    }

    /// Enclosure of `g^{(l)}(n . alpha)` from `e^{n.alpha} - sum e^{m.alpha} A_{m,j}^{(l)}(n.alpha)`,
    /// with absolute radius at most `2^-prec`.
    pub fn eval_direct(&self, n: usize, l: usize, prec: u32) -> Result<BallComplex> {
        self.check_index(n, l)?;
        let k = self.params.field();
        let coeffs: Vec<AlgebraicNumber> = (0..self.params.n()).map(|m| self.q_coefficient(m, n, l)).collect();
        refine(prec, |wp| {
            let mut acc = k.embed_at(&self.target_points[n], 0, wp).exp(wp)?;
            for (m, a) in coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let e = k.embed_at(&self.target_points[m], 0, wp).exp(wp)?;
                acc = acc - e * k.embed_at(a, 0, wp);
            }
            Ok(acc)
        })
    }

    /// Default series truncation `max(2 NT, ceil(4 e c q S))`.
    pub fn default_truncation(&self) -> usize {
        let four_e_cqs = Ball::e(64) * Ball::from_rational(&self.params.cqs(), 128).shl(2);
        let c = four_e_cqs.upper().ceil().to_usize().unwrap_or(usize::MAX);
        (2 * self.params.nt()).max(c)
    }

    /// Exact partial sum `sum_{k=NT}^{K} (1/k!)(k^{(l)} z_n^{k-l} - sum k^{(j)} z_m^{k-j} A_{m,j}^{(l)}(z_n))`.
    pub fn series_partial_sum(&self, n: usize, l: usize, k_trunc: usize) -> Result<AlgebraicNumber> {
        self.check_index(n, l)?;
        let nt = self.params.nt();
        if k_trunc < nt {
            return Err(Error::Precondition(format!("K_trunc = {k_trunc} < NT = {nt}")));
        }
        let mult = self.params.mult() as usize;
        let powers = |z: &AlgebraicNumber| -> Vec<AlgebraicNumber> {
            std::iter::successors(Some(AlgebraicNumber::one()), |p| Some(p.clone() * z.clone()))
                .take(k_trunc + 1)
                .collect()
        };
        let zn = powers(&self.target_points[n]);
        let zm: Vec<Vec<AlgebraicNumber>> = (0..self.params.n()).map(|m| powers(&self.target_points[m])).collect();
        let mut sum = AlgebraicNumber::zero();
        for k in nt..=k_trunc {
            let ffs: Vec<AlgebraicNumber> = (0..mult)
                .map(|j| AlgebraicNumber::from_bigint(&falling_factorial(k as u64, j as u64)))
                .collect();
            let mut bracket = zn[k - l].clone() * ffs[l].clone();
            for (m, pm) in zm.iter().enumerate() {
                for (j, ff) in ffs.iter().enumerate() {
                    let a = self.value(m, j, n, l);
                    if !a.is_zero() {
                        bracket = bracket - pm[k - j].clone() * ff.clone() * a.clone();
                    }
                }
            }
            sum = sum + bracket.scale(&BigRational::new(BigInt::one(), factorial(k as u64)));
        }
        Ok(sum.with_field(self.params.field()))
    }

    /// Upper bound for `sum_{k > K} |term_k|` in the series of `g^{(l)}(z_n)`.
    ///
    /// With `M = max(1, |z|)` over all points and `W = 1 + sum |A_{m,j}^{(l)}(z_n)|`,
    /// every term satisfies `|term_k| <= W k^{T-1} M^k / k!`; the ratio of
    /// consecutive bounds is decreasing, so the tail is at most
    /// `term_{K+1} / (1 - rho)` with `rho` the ratio at `K + 1`.
    pub fn series_tail_bound(&self, n: usize, l: usize, k_trunc: usize) -> Result<BigRational> {
        self.check_index(n, l)?;
        let k = self.params.field();
        let threshold = Ball::e(64) * Ball::from_rational(&self.params.cqs(), 128).shl(1);
        if !threshold.certainly_le(&Ball::from_i64(k_trunc as i64)) {
            return Err(Error::Precondition(format!(
                "K_trunc = {k_trunc} is below the tail threshold 2ecqS ~ {:.4}",
                threshold.to_f64()
            )));
        }
        let upper = |a: &AlgebraicNumber| -> BigRational {
            match a.as_rational() {
                Some(q) => q.abs(),
                None => k.embed(a, 0, 64).abs_upper().to_rational(),
            }
        };
        let one = BigRational::one();
        let m_bound = self
            .target_points
            .iter()
            .map(upper)
            .fold(one.clone(), |a, b| if b > a { b } else { a });
        let w = self.values[n][l].iter().map(upper).fold(one.clone(), |a, b| a + b);
        let mult = self.params.mult() as i32;
        let k1 = BigRational::from_integer(BigInt::from(k_trunc + 1));
        let k2 = BigRational::from_integer(BigInt::from(k_trunc + 2));
        let rho = num_traits::pow(&k2 / &k1, (mult - 1) as usize) * &m_bound / &k2;
        if rho >= one {
            return Err(Error::Precondition("tail ratio is not below 1".into()));
        }
        let term = w * num_traits::pow(k1.clone(), (mult - 1) as usize) * num_traits::pow(m_bound, k_trunc + 1)
            / BigRational::from_integer(factorial(k_trunc as u64 + 1));
        Ok(term / (one - rho))
    }

    /// Enclosure of `g^{(l)}(n . alpha)` from the tail series truncated at
    /// `K_trunc` plus a certified tail bound. The radius target `2^-prec`
    /// applies to the evaluation of the partial sum only.
    pub fn eval_series(&self, n: usize, l: usize, k_trunc: usize, prec: u32) -> Result<BallComplex> {
        let tail = self.series_tail_bound(n, l, k_trunc)?;
        let sum = self.series_partial_sum(n, l, k_trunc)?;
        let k = self.params.field();
        let z = refine(prec, |wp| Ok(k.embed_at(&sum, 0, wp)))?;
        let t = Ball::from_rational(&tail, 64).upper().round_up(32);
        Ok(BallComplex::new(z.re.add_error(&t), z.im.add_error(&t)))
    }
}

/// Runs `f` at working precisions `START_PREC, 2 START_PREC, ...` until
/// the radius is at most `2^-target`.
pub fn refine(target: u32, f: impl Fn(u32) -> Result<BallComplex>) -> Result<BallComplex> {
    let goal = Dyadic::pow2(-i64::from(target));
    let mut wp = START_PREC.max(target.saturating_add(32));
    loop {
        let z = f(wp)?;
        if z.radius() <= goal {
            return Ok(z);
        }
        if wp >= MAX_PREC {
            return Err(Error::Precision(format!("radius 2^-{target} not reached at {MAX_PREC} bits")));
        }
        wp = (wp * 2).min(MAX_PREC);
    }
}

/// `F = {r in Z^t : r != 0, |r| < S}` and `Delta = (T-1)! q^{2T|F|+T} prod (r.alpha)^{2T}`.
#[derive(Clone, Debug)]
pub struct DeltaNormalizer {
    pub f: Vec<Vec<i64>>,
    pub delta: AlgebraicNumber,
}

fn signed_points(s: u32, t: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for m in sigma_set(s, t).into_iter().skip(1) {
        let support: Vec<usize> = (0..t).filter(|&i| m[i] != 0).collect();
        for mask in 0..(1u64 << support.len()) {
            let mut r: Vec<i64> = m.iter().map(|&x| i64::from(x)).collect();
            for (b, &i) in support.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    r[i] = -r[i];
                }
            }
            out.push(r);
        }
    }
    out
}

pub fn delta_normalizer(params: &AuxParams) -> DeltaNormalizer {
    let f = signed_points(params.s(), params.t());
    let two_t = 2 * u64::from(params.mult());
    let q_exp = two_t * f.len() as u64 + u64::from(params.mult());
    let mut delta = params
        .field()
        .from_rational(BigRational::from_integer(factorial(u64::from(params.mult()) - 1) * params.q().pow(q_exp as u32)));
    for r in &f {
        delta = delta * dot(r, params.alpha()).pow_u(two_t);
    }
    DeltaNormalizer { f, delta }
}

/// `B_0 = (NT)^{2T-2} (c q S)^{2^{t+1} N T}`.
pub fn b0_bound(params: &AuxParams, prec: u32) -> LogMagnitude {
    let nt = BigInt::from(params.nt());
    let e2 = 2 * u64::from(params.mult()) - 2;
    let e1 = (BigInt::one() << (params.t() + 1)) * &nt;
    let base = LogMagnitude::from_int(&nt, prec).pow_u(e2);
    let cqs = LogMagnitude::from_rational(&params.cqs(), prec);
    base.mul(&cqs.pow_int(&e1).expect("positive exponent"))
}

/// Largest `|sigma(a)|` over all embeddings, as a magnitude (exact for rationals).
pub fn max_conjugate(field: &NumberField, a: &AlgebraicNumber, prec: u32) -> LogMagnitude {
    if let Some(q) = a.as_rational() {
        return LogMagnitude::from_rational(&q.abs(), prec);
    }
    let up = crate::numberfield::max_conjugate_upper(field, a, prec);
    LogMagnitude::from_rational(&up.to_rational(), prec)
}

/// Entry that failed one of the checks.
#[derive(Clone, Debug)]
pub struct Violation {
    pub m: Option<Vec<u32>>,
    pub n: Vec<u32>,
    pub j: Option<usize>,
    pub l: usize,
    pub kind: String,
    pub value: String,
}

impl Violation {
    pub fn to_value(&self) -> Value {
        json!({"m": self.m, "n": self.n, "j": self.j, "l": self.l, "kind": self.kind, "value": self.value})
    }
}

fn minimum(a: Option<Ball>, b: Ball) -> Option<Ball> {
    match a {
        Some(a) if a.mid() <= b.mid() => Some(a),
        _ => Some(b),
    }
}

fn margin_value(m: &Option<Ball>) -> Value {
    m.as_ref().map_or(Value::Null, |b| json!(b.to_f64()))
}

#[derive(Clone, Debug)]
pub struct LemAReport {
    pub checked: usize,
    pub delta_ok: bool,
    pub violations: Vec<Violation>,
    pub b0: LogMagnitude,
    /// Smallest `ln B_0 - ln |x|` over the nonzero checked values.
    pub worst_margin_ln: Option<Ball>,
}

impl LemAReport {
    pub fn passed(&self) -> bool {
        self.delta_ok && self.violations.is_empty()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "checked": self.checked,
            "delta_ok": self.delta_ok,
            "passed": self.passed(),
            "b0": self.b0.to_report(),
            "worst_margin_ln": margin_value(&self.worst_margin_ln),
            "violations": self.violations.iter().map(Violation::to_value).collect::<Vec<_>>(),
        })
    }
}

/// Checks that `Delta` and every `Delta A_{m,j}^{(l)}(n . alpha)` are
/// integral with all conjugates at most `B_0`.
pub fn lem_a_check(aux: &AuxFunction, norm: &DeltaNormalizer, prec: u32) -> LemAReport {
    let params = aux.params();
    let k = params.field();
    let b0 = b0_bound(params, prec);
    let within = |x: &AlgebraicNumber| -> (bool, Option<Ball>) {
        let mag = max_conjugate(k, x, prec);
        if mag.is_zero() {
            return (true, None);
        }
        let ok = mag.certainly_le(&b0);
        (ok, Some(b0.ln().clone() - mag.ln().clone()))
    };
    let (delta_bounded, delta_margin) = within(&norm.delta);
    let delta_ok = !norm.delta.is_zero() && k.is_integral(&norm.delta) && delta_bounded;
    let mult = params.mult() as usize;
    let jobs: Vec<(usize, usize, usize, usize)> = (0..aux.targets().len())
        .flat_map(|n| (0..mult).flat_map(move |l| (0..params.n()).flat_map(move |m| (0..mult).map(move |j| (m, j, n, l)))))
        .collect();
    let results: Vec<(Option<Violation>, Option<Ball>)> = jobs
        .par_iter()
        .map(|&(m, j, n, l)| {
            let v = norm.delta.clone() * aux.value(m, j, n, l).clone();
            let integral = k.is_integral(&v);
            let (bounded, margin) = within(&v);
            let violation = (!integral || !bounded).then(|| Violation {
                m: Some(aux.targets()[m].clone()),
                n: aux.targets()[n].clone(),
                j: Some(j),
                l,
                kind: if integral { "conjugate exceeds B0" } else { "not integral" }.into(),
                value: v.to_string(),
            });
            (violation, margin)
        })
        .collect();
    let mut worst = delta_margin;
    let mut violations = Vec::new();
    for (v, m) in results {
        violations.extend(v);
        if let Some(m) = m {
            worst = minimum(worst, m);
        }
    }
    LemAReport {
        checked: jobs.len(),
        delta_ok,
        violations,
        b0,
        worst_margin_ln: worst,
    }
}

#[derive(Clone, Debug)]
pub enum PropQStatus {
    Checked,
    OutOfHypothesis(String),
}

#[derive(Clone, Debug)]
pub struct PropQReport {
    pub status: PropQStatus,
    pub pairs: usize,
    pub norm_bound: Option<LogMagnitude>,
    pub value_bound: Option<LogMagnitude>,
    pub worst_norm_margin_ln: Option<Ball>,
    pub worst_value_margin_ln: Option<Ball>,
    pub violations: Vec<Violation>,
}

impl PropQReport {
    pub fn in_hypothesis(&self) -> bool {
        matches!(self.status, PropQStatus::Checked)
    }

    pub fn passed(&self) -> bool {
        self.in_hypothesis() && self.violations.is_empty()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "status": match &self.status {
                PropQStatus::Checked => "checked".to_string(),
                PropQStatus::OutOfHypothesis(why) => format!("out of hypothesis: {why}"),
            },
            "pairs": self.pairs,
            "passed": self.passed(),
            "norm_bound": self.norm_bound.as_ref().map(LogMagnitude::to_report),
            "value_bound": self.value_bound.as_ref().map(LogMagnitude::to_report),
            "worst_norm_margin_ln": margin_value(&self.worst_norm_margin_ln),
            "worst_value_margin_ln": margin_value(&self.worst_value_margin_ln),
            "violations": self.violations.iter().map(Violation::to_value).collect::<Vec<_>>(),
        })
    }
}

/// Checks `||Delta^sigma Q^sigma_{n,l}|| <= T B_0` for every embedding and
/// `|Delta Q_{n,l}(1, e^alpha)| <= (cqS/T)^{NT} T^T B_0`.
pub fn prop_q_check(aux: &AuxFunction, norm: &DeltaNormalizer, prec: u32) -> Result<PropQReport> {
    let params = aux.params();
    if let Err(why) = params.prop_q_hypothesis() {
        return Ok(PropQReport {
            status: PropQStatus::OutOfHypothesis(why),
            pairs: 0,
            norm_bound: None,
            value_bound: None,
            worst_norm_margin_ln: None,
            worst_value_margin_ln: None,
            violations: Vec::new(),
        });
    }
    let k = params.field();
    let mult = params.mult();
    let b0 = b0_bound(params, prec);
    let tl = LogMagnitude::from_i64(i64::from(mult), prec);
    let norm_bound = tl.mul(&b0);
    let ratio = LogMagnitude::from_rational(&(params.cqs() / BigRational::from_integer(mult.into())), prec);
    let value_bound = ratio.pow_u(params.nt() as u64).mul(&tl.pow_u(u64::from(mult))).mul(&b0);
    let delta_sigma = k.embed(&norm.delta, 0, prec);
    let pairs: Vec<(usize, usize)> = (0..aux.targets().len()).flat_map(|n| (0..mult as usize).map(move |l| (n, l))).collect();
    let results: Vec<Result<(Vec<Violation>, Option<Ball>, Option<Ball>)>> = pairs
        .par_iter()
        .map(|&(n, l)| {
            let q = crate::polysys::build_q(aux, n, l)?;
            let mut violations = Vec::new();
            let mut nm: Option<Ball> = None;
            for c in q.terms().values() {
                let mag = max_conjugate(k, &(norm.delta.clone() * c.clone()), prec);
                if mag.is_zero() {
                    continue;
                }
                if !mag.certainly_le(&norm_bound) {
                    violations.push(Violation {
                        m: None,
                        n: aux.targets()[n].clone(),
                        j: None,
                        l,
                        kind: "coefficient norm exceeds T B0".into(),
                        value: mag.log10_string(6),
                    });
                }
                nm = minimum(nm, norm_bound.ln().clone() - mag.ln().clone());
            }
            let g = aux.eval_direct(n, l, prec.max(START_PREC))?;
            let v = (delta_sigma.clone() * g).abs_upper();
            let mag = LogMagnitude::from_rational(&v.to_rational(), prec);
            let mut vm = None;
            if !mag.is_zero() {
                if !mag.certainly_le(&value_bound) {
                    violations.push(Violation {
                        m: None,
                        n: aux.targets()[n].clone(),
                        j: None,
                        l,
                        kind: "value at (1, e^alpha) exceeds bound".into(),
                        value: mag.log10_string(6),
                    });
                }
                vm = Some(value_bound.ln().clone() - mag.ln().clone());
            }
            Ok((violations, nm, vm))
        })
        .collect();
    let mut violations = Vec::new();
    let mut wn = None;
    let mut wv = None;
    for r in results {
        let (v, nm, vm) = r?;
        violations.extend(v);
        if let Some(b) = nm {
            wn = minimum(wn, b);
        }
        if let Some(b) = vm {
            wv = minimum(wv, b);
        }
    }
    Ok(PropQReport {
        status: PropQStatus::Checked,
        pairs: pairs.len(),
        norm_bound: Some(norm_bound),
        value_bound: Some(value_bound),
        worst_norm_margin_ln: wn,
        worst_value_margin_ln: wv,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use proptest::prelude::*;

    fn q_params(s: u32, t: u32) -> AuxParams {
        let k = NumberField::rationals();
        AuxParams::new(&k, vec![k.from_i64(1)], s, t).unwrap()
    }

    fn sqrt2_params(s: u32, t: u32) -> AuxParams {
        let k = NumberField::new(vec![BigInt::from(-2), BigInt::zero(), BigInt::one()], None).unwrap();
        let alpha = vec![k.from_i64(1), k.theta()];
        AuxParams::new(&k, alpha, s, t).unwrap()
    }

    fn rp(c: &[i64]) -> UniPoly<BigRational> {
        UniPoly::new(c.iter().map(|&x| rat_int(x)).collect())
    }

    #[test]
    fn sigma_examples() {
        let s = sigma_set(3, 2);
        assert_eq!(s, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(sigma_set(6, 1), (0..6).map(|i| vec![i]).collect::<Vec<_>>());
        assert_eq!(sigma_set(2, 3).len(), 4);
    }

    proptest! {
        #[test]
        fn sigma_matches_enumeration(s in 1u32..7, t in 1usize..4) {
            let set = sigma_set(s, t);
            let mut brute = Vec::new();
            let mut cur = vec![0u32; t];
            loop {
                if cur.iter().sum::<u32>() < s {
                    brute.push(cur.clone());
                }
                let mut i = 0;
                while i < t {
                    cur[i] += 1;
                    if cur[i] < s { break; }
                    cur[i] = 0;
                    i += 1;
                }
                if i == t { break; }
            }
            prop_assert_eq!(set.len(), brute.len());
            prop_assert_eq!(BigInt::from(set.len()), sigma_size(s, t));
            let mut sorted = set.clone();
            sorted.sort_by_key(|m| m.iter().sum::<u32>());
            prop_assert_eq!(&sorted, &set);
            for m in &brute {
                prop_assert!(set.contains(m));
            }
            if s >= 6 * t as u32 {
                let n = set.len() as f64;
                let st = f64::from(s).powi(t as i32) / (1..=t).product::<usize>() as f64;
                prop_assert!(st <= n && n <= 2.0 * st);
            }
        }

        #[test]
        fn rational_basis_duality(pts in proptest::collection::btree_set(-6i64..7, 1..4), mult in 1usize..4) {
            let points: Vec<BigRational> = pts.into_iter().map(rat_int).collect();
            let a = HermiteBasis::local(points.clone(), mult).unwrap();
            let b = HermiteBasis::solve(points, mult).unwrap();
            prop_assert!(a.check_duality());
            prop_assert!(a.agrees_with(&b));
        }
    }

    #[test]
    fn basis_examples() {
        let lag = HermiteBasis::local(vec![rat_int(0), rat_int(1)], 1).unwrap();
        assert_eq!(lag.poly(0, 0), &rp(&[1, -1]));
        assert_eq!(lag.poly(1, 0), &rp(&[0, 1]));
        let tay = HermiteBasis::local(vec![rat_int(0)], 2).unwrap();
        assert_eq!(tay.poly(0, 0), &rp(&[1]));
        assert_eq!(tay.poly(0, 1), &rp(&[0, 1]));
        let herm = hermite_basis(&q_params(2, 2)).unwrap();
        assert_eq!(herm.poly(0, 0).map(|c| c.as_rational().unwrap()), rp(&[1, 0, -3, 2]));
        assert!(HermiteBasis::local(vec![rat_int(1), rat_int(1)], 2).is_err());
    }

    #[test]
    fn basis_over_sqrt2() {
        let b = hermite_basis(&sqrt2_params(2, 2)).unwrap();
        assert_eq!(b.dim(), 6);
        assert!(b.check_duality());
    }

    #[test]
    fn phi_kernel_and_formula() {
        let b = HermiteBasis::local(vec![rat_int(0), rat_int(1)], 2).unwrap();
        for k in 0..4 {
            assert!(b.phi_apply(&UniPoly::monomial(rat_int(1), k)).is_zero());
            assert!(b.phi_monomial(k).is_zero());
        }
        for k in 4..9 {
            let direct = b.phi_apply(&UniPoly::monomial(rat_int(1), k));
            assert_eq!(direct, b.phi_monomial(k));
        }
        let p4 = b.phi_monomial(4);
        assert_eq!(p4.degree(), Some(4));
        for x in [rat_int(0), rat_int(1)] {
            assert!(p4.eval(&x).is_zero());
            assert!(p4.derivative().eval(&x).is_zero());
        }
        // x^2 (x-1)^2 is the only monic quartic with double roots at 0 and 1
        assert_eq!(p4, rp(&[0, 0, 1, -2, 1]));
        let series: Vec<BigRational> = (0..8).map(|k| rat(1, k + 1)).collect();
        let f = UniPoly::new(series.clone());
        assert_eq!(b.phi_apply(&f), b.phi_apply_series(&series));
    }

    #[test]
    fn aux_values_small() {
        let aux = AuxFunction::new(q_params(1, 1)).unwrap();
        let g0 = aux.eval_direct(0, 0, 100).unwrap();
        assert!(g0.contains_zero());
        let g1 = aux.eval_direct(1, 0, 100).unwrap();
        let e = Ball::e(200) - Ball::one();
        assert!(g1.re.overlaps(&e));
        assert!(g1.radius() <= Dyadic::pow2(-100));
        let s = aux.eval_series(1, 0, 40, 100).unwrap();
        assert!(s.overlaps(&g1));
        assert!(s.radius() < Dyadic::pow2(-80));
        let node = aux.eval_series(0, 0, 40, 100).unwrap();
        assert!(node.contains_zero());
        let aux2 = AuxFunction::new(q_params(2, 2)).unwrap();
        assert!(aux2.eval_direct(0, 0, 100).unwrap().contains_zero());
    }

    #[test]
    fn series_threshold() {
        let aux = AuxFunction::new(q_params(6, 6)).unwrap();
        assert_eq!(aux.default_truncation(), 72);
        assert!(aux.eval_series(6, 0, 30, 100).is_err());
        let d = aux.eval_direct(6, 0, 100).unwrap();
        let s = aux.eval_series(6, 0, 72, 100).unwrap();
        assert!(s.overlaps(&d));
    }

    #[test]
    fn delta_examples() {
        let n = delta_normalizer(&q_params(2, 2));
        assert_eq!(n.f, vec![vec![1], vec![-1]]);
        assert_eq!(n.delta.as_rational(), Some(rat_int(1)));
        let n6 = delta_normalizer(&q_params(6, 6));
        let expect: BigInt = factorial(5) * factorial(5).pow(24);
        assert_eq!(n6.f.len(), 10);
        assert_eq!(n6.delta.as_rational(), Some(BigRational::from_integer(expect)));
        let n2 = delta_normalizer(&sqrt2_params(2, 2));
        assert_eq!(n2.f.len(), 4);
        assert!(n2.f.len() <= 4 * (3 - 1));
    }

    #[test]
    fn b0_example() {
        let b0 = b0_bound(&q_params(6, 6), 128);
        let expect = BigInt::from(36).pow(10) * BigInt::from(6).pow(144);
        assert_eq!(b0.exact(), Some(&BigRational::from_integer(expect)));
    }

    #[test]
    fn lem_a_small() {
        let p = q_params(2, 2);
        let aux = AuxFunction::new(p.clone()).unwrap();
        let rep = lem_a_check(&aux, &delta_normalizer(&p), 128);
        assert_eq!(rep.checked, 24);
        assert!(rep.passed(), "{:?}", rep.violations);
        let p2 = sqrt2_params(2, 2);
        let aux2 = AuxFunction::new(p2.clone()).unwrap();
        assert!(lem_a_check(&aux2, &delta_normalizer(&p2), 128).passed());
    }

    #[test]
    fn prop_q_hypothesis() {
        let p = q_params(2, 2);
        let aux = AuxFunction::new(p.clone()).unwrap();
        let rep = prop_q_check(&aux, &delta_normalizer(&p), 128).unwrap();
        assert!(!rep.in_hypothesis());
    }

    #[test]
    fn dependent_alphas_rejected() {
        let k = NumberField::rationals();
        assert!(matches!(
            AuxParams::new(&k, vec![k.from_i64(1), k.from_i64(2)], 2, 2),
            Err(Error::Dependent)
        ));
        assert!(AuxParams::new(&k, vec![k.from_i64(0)], 2, 2).is_err());
    }
}
