//! Macaulay resultants of `t + 1` forms in `t + 1` variables and the
//! lower bounds derived from a nonvanishing resultant.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::ball::{Ball, BallComplex};
use crate::error::{Error, Result};
use crate::heights::poly_height;
use crate::linalg::Matrix;
use crate::logmag::LogMagnitude;
use crate::numberfield::{AlgebraicNumber, NumberField};
use crate::poly::{HomPoly, MPoly, Monomial};
use crate::polysys::{combination, poly_eval_ball, poly_norm_at};
use crate::scalar::{ExactDiv, Field, Ring};

/// Attempts with a random unimodular change of variables.
pub const MAX_RETRIES: usize = 8;

/// Macaulay matrix in critical degree `nu = sum (D_i - 1) + 1`.
#[derive(Clone, Debug)]
pub struct MacaulayMatrix<F: Ring> {
    pub nu: u32,
    /// Column (and row) labels: the monomials of degree `nu`.
    pub monomials: Vec<Monomial>,
    /// For each row, the index of the form it comes from.
    pub row_form: Vec<usize>,
    pub matrix: Matrix<F>,
    /// Indices of the non-reduced monomials, which span the minor `M'`.
    pub extraneous: Vec<usize>,
}

fn check_shape<F: Ring>(polys: &[HomPoly<F>]) -> Result<usize> {
    let n = polys.len();
    if n < 2 {
        return Err(Error::Invalid("a resultant needs at least two forms".into()));
    }
    if let Some(p) = polys.iter().find(|p| p.nvars() > n) {
        return Err(Error::Invalid(format!("form in {} variables, expected {n}", p.nvars())));
    }
    if polys.iter().any(|p| p.degree() == 0) {
        return Err(Error::Invalid("resultant degrees must be positive".into()));
    }
    Ok(n)
}

pub fn macaulay_matrix<F: Ring>(polys: &[HomPoly<F>]) -> Result<MacaulayMatrix<F>> {
    let n = check_shape(polys)?;
    let degrees: Vec<u32> = polys.iter().map(HomPoly::degree).collect();
    let nu = degrees.iter().map(|d| d - 1).sum::<u32>() + 1;
    let monomials = Monomial::all_of_degree(n, nu);
    let index: std::collections::HashMap<&Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let size = monomials.len();
    let mut matrix = Matrix::zeros(size, size);
    let mut row_form = Vec::with_capacity(size);
    let mut extraneous = Vec::new();
    for (r, m) in monomials.iter().enumerate() {
        let dividing: Vec<usize> = (0..n).filter(|&i| m.exp(i) >= degrees[i]).collect();
        let i = dividing[0];
        if dividing.len() > 1 {
            extraneous.push(r);
        }
        row_form.push(i);
        let shift = Monomial::var(i, degrees[i]).div_of(m).expect("x_i^{D_i} divides m");
        for (mono, c) in polys[i].terms() {
            let col = index[&mono.mul(&shift)];
            matrix.set(r, col, c.clone());
        }
    }
    Ok(MacaulayMatrix {
        nu,
        monomials,
        row_form,
        matrix,
        extraneous,
    })
}

#[derive(Clone, Debug)]
pub enum ResultantOutcome<F> {
    Value {
        value: F,
        /// Number of coordinate changes applied before `det M' != 0`.
        retries: usize,
        /// The unimodular matrix used, if any.
        change: Option<Vec<Vec<i64>>>,
    },
    Indeterminate {
        retries: usize,
    },
}

impl<F: Ring> ResultantOutcome<F> {
    pub fn value(&self) -> Option<&F> {
        match self {
            Self::Value { value, .. } => Some(value),
            Self::Indeterminate { .. } => None,
        }
    }
}

/// Random integer matrix of determinant one, built from elementary operations.
pub fn random_unimodular(n: usize, rng: &mut impl Rng) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let k = rng.gen_range(-2i64..=2);
        for c in 0..n {
            a[i][c] += k * a[j][c];
        }
    }
    a
}

fn det_with_minor<F: ExactDiv>(m: &MacaulayMatrix<F>) -> (F, F) {
    let num = m.matrix.det_bareiss();
    let den = if m.extraneous.is_empty() {
        F::one()
    } else {
        m.matrix.select(&m.extraneous, &m.extraneous).det_bareiss()
    };
    (num, den)
}

/// `Res(Q_0, ..., Q_t) = det M / det M'`, up to sign. A vanishing `det M'`
/// triggers up to [`MAX_RETRIES`] random unimodular coordinate changes.
pub fn macaulay_resultant<F: Field>(polys: &[HomPoly<F>], seed: u64) -> Result<ResultantOutcome<F>> {
    let n = check_shape(polys)?;
    // Res is homogeneous of positive degree in each argument
    if polys.iter().any(|p| p.is_zero()) {
        return Ok(ResultantOutcome::Value { value: F::zero(), retries: 0, change: None });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = polys.to_vec();
    let mut change = None;
    for retries in 0..=MAX_RETRIES {
        let m = macaulay_matrix(&current)?;
        let (num, den) = det_with_minor(&m);
        if !den.is_zero() {
            let value = if num.is_zero() { num } else { num.div_exact(&den) };
            return Ok(ResultantOutcome::Value { value, retries, change });
        }
        if retries == MAX_RETRIES {
            break;
        }
        let a = random_unimodular(n, &mut rng);
        let af: Vec<Vec<F>> = a.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect();
        current = polys
            .iter()
            .map(|p| {
                let p = HomPoly::new(n, p.degree(), p.poly().clone()).expect("same terms");
                p.linear_substitution(&af)
            })
            .collect();
        change = Some(a);
    }
    Ok(ResultantOutcome::Indeterminate { retries: MAX_RETRIES })
}

/// Sylvester resultant of two binary forms in `(X_0, X_1)`, with `f` read
/// as a polynomial in `X_1` with coefficients from `X_0 = 1`.
pub fn sylvester_resultant<F: Ring + ExactDiv>(f: &HomPoly<F>, g: &HomPoly<F>) -> F {
    let coeffs = |p: &HomPoly<F>| -> Vec<F> {
        let d = p.degree();
        (0..=d).rev().map(|i| p.coeff(&Monomial::new(vec![d - i, i]))).collect()
    };
    let (a, b) = (coeffs(f), coeffs(g));
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut s = Matrix::zeros(size, size);
    for r in 0..n {
        for (k, c) in a.iter().enumerate() {
            s.set(r, r + k, c.clone());
        }
    }
    for r in 0..m {
        for (k, c) in b.iter().enumerate() {
            s.set(n + r, r + k, c.clone());
        }
    }
    s.det_bareiss()
}

/// Generic forms of the given degrees in `t + 1` variables whose
/// coefficients are independent indeterminates, numbered form by form.
pub fn generic_forms(degrees: &[u32]) -> Vec<HomPoly<MPoly<BigInt>>> {
    let n = degrees.len();
    let mut var = 0;
    degrees
        .iter()
        .map(|&d| {
            let terms: Vec<(Monomial, MPoly<BigInt>)> = Monomial::all_of_degree(n, d)
                .into_iter()
                .map(|m| {
                    var += 1;
                    (m, MPoly::var(var - 1))
                })
                .collect();
            HomPoly::new(n, d, MPoly::from_terms(terms)).expect("homogeneous by construction")
        })
        .collect()
}

/// Expanded generic resultant; supported when the Macaulay minor `M'` is empty.
pub fn generic_resultant(degrees: &[u32]) -> Result<MPoly<BigInt>> {
    let forms = generic_forms(degrees);
    let m = macaulay_matrix(&forms)?;
    if !m.extraneous.is_empty() {
        return Err(Error::OutOfRange("generic expansion needs a trivial extraneous factor".into()));
    }
    if m.monomials.len() > 8 {
        return Err(Error::OutOfRange("generic expansion is capped at 8 x 8 matrices".into()));
    }
    Ok(m.matrix.det_leibniz())
}

#[derive(Clone, Debug)]
pub struct LengthAudit {
    pub degrees: Vec<u32>,
    pub length: BigInt,
    pub bound: BigInt,
    pub passed: bool,
    /// Whether the expansion is homogeneous of degree `prod D / D_i` in argument `i`.
    pub homogeneous: bool,
}

/// `L(Res_D) <= (t+1)^{3(t+1) prod D_i}` on the expanded generic resultant.
pub fn length_audit(degrees: &[u32]) -> Result<LengthAudit> {
    let res = generic_resultant(degrees)?;
    let length: BigInt = res.terms().values().map(Signed::abs).sum();
    let n = degrees.len() as u32;
    let prod: u32 = degrees.iter().product();
    let bound = BigInt::from(n).pow(3 * n * prod);
    // variable ranges per form
    let mut ranges = Vec::new();
    let mut start = 0usize;
    for &d in degrees {
        let len = Monomial::all_of_degree(degrees.len(), d).len();
        ranges.push(start..start + len);
        start += len;
    }
    let homogeneous = res.terms().keys().all(|mono| {
        ranges.iter().zip(degrees).all(|(r, &d)| r.clone().map(|v| mono.exp(v)).sum::<u32>() == prod / d)
    });
    Ok(LengthAudit {
        degrees: degrees.to_vec(),
        passed: length <= bound,
        length,
        bound,
        homogeneous,
    })
}

/// Named outcome of one property check.
#[derive(Clone, Debug)]
pub struct PropertyCheck {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
}

impl PropertyCheck {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub degrees: Vec<u32>,
    pub checks: Vec<PropertyCheck>,
    pub length: Option<LengthAudit>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(PropertyCheck::ok) && self.length.as_ref().is_none_or(|l| l.passed && l.homogeneous)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "degrees": self.degrees,
            "checks": self.checks.iter().map(|c| json!({"name": c.name, "trials": c.trials, "passed": c.passed})).collect::<Vec<_>>(),
            "length": self.length.as_ref().map(|l| json!({"length": l.length.to_string(), "bound_log10": (l.bound.bits() as f64) * std::f64::consts::LOG10_2, "passed": l.passed, "homogeneous": l.homogeneous})),
        })
    }
}

/// Random form over `Q` with integer coefficients in `[-range, range]`.
pub fn random_form(nvars: usize, degree: u32, range: i64, rng: &mut impl Rng) -> HomPoly<BigRational> {
    let terms = Monomial::all_of_degree(nvars, degree)
        .into_iter()
        .map(|m| (m, BigRational::from_integer(rng.gen_range(-range..=range).into())));
    HomPoly::new(nvars, degree, MPoly::from_terms(terms)).expect("homogeneous by construction")
}

/// Random form vanishing at the projective point `p` (integer coordinates, `p_0 != 0`).
pub fn random_form_through(p: &[i64], degree: u32, rng: &mut impl Rng) -> HomPoly<BigRational> {
    let n = p.len();
    let mut f = random_form(n, degree, 5, rng);
    let pr: Vec<BigRational> = p.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    let v = f.eval(&pr);
    let x0d = HomPoly::new(n, degree, MPoly::from_terms([(Monomial::var(0, degree), BigRational::one())])).unwrap();
    let c = v / num_traits::pow(pr[0].clone(), degree as usize);
    f = f.sub(&x0d.scale(&c)).expect("same shape");
    f
}

fn res_value(polys: &[HomPoly<BigRational>], seed: u64) -> Option<BigRational> {
    macaulay_resultant(polys, seed).ok()?.value().cloned()
}

/// Randomized checks of the characterizing properties at degrees `degrees`:
/// homogeneity in each argument, invariance under a unimodular change of
/// variables, vanishing at planted common zeros, Sylvester agreement for
/// binary forms, and the length bound when the generic expansion is feasible.
pub fn res_property_suite(degrees: &[u32], trials: usize, seed: u64) -> Result<PropertyReport> {
    let n = degrees.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prod: u32 = degrees.iter().product();
    let mut homog = PropertyCheck { name: "homogeneity".into(), trials, passed: 0 };
    let mut invariance = PropertyCheck { name: "unimodular invariance".into(), trials, passed: 0 };
    let mut planted = PropertyCheck { name: "planted common zero".into(), trials, passed: 0 };
    let mut sylvester = PropertyCheck { name: "sylvester agreement".into(), trials: if n == 2 { trials } else { 0 }, passed: 0 };
    for trial in 0..trials {
        let polys: Vec<HomPoly<BigRational>> = degrees.iter().map(|&d| random_form(n, d, 6, &mut rng)).collect();
        let s = seed.wrapping_add(trial as u64);
        let base = res_value(&polys, s);
        let i = trial % n;
        let lambda = BigRational::from_integer(rng.gen_range(2..=7).into());
        let mut scaled = polys.clone();
        scaled[i] = scaled[i].scale(&lambda);
        if let (Some(b), Some(r)) = (&base, res_value(&scaled, s)) {
            if r == b.clone() * num_traits::pow(lambda.clone(), (prod / degrees[i]) as usize) {
                homog.passed += 1;
            }
        }
        let a = random_unimodular(n, &mut rng);
        let af: Vec<Vec<BigRational>> = a.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
        let moved: Vec<_> = polys.iter().map(|p| p.linear_substitution(&af)).collect();
        if let (Some(b), Some(r)) = (&base, res_value(&moved, s)) {
            if r == *b || r == -b.clone() {
                invariance.passed += 1;
            }
        }
        let mut point: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
        point[0] = rng.gen_range(1..=3);
        let through: Vec<_> = degrees.iter().map(|&d| random_form_through(&point, d, &mut rng)).collect();
        if res_value(&through, s).is_some_and(|v| v.is_zero()) {
            planted.passed += 1;
        }
        if n == 2 {
            let syl = sylvester_resultant(&polys[0], &polys[1]);
            if base.is_some_and(|b| b == syl || b == -syl) {
                sylvester.passed += 1;
            }
        }
    }
    let mut checks = vec![homog, invariance, planted];
    if n == 2 {
        checks.push(sylvester);
    }
    let length = match generic_resultant(degrees) {
        Ok(_) => Some(length_audit(degrees)?),
        Err(_) => None,
    };
    Ok(PropertyReport { degrees: degrees.to_vec(), checks, length })
}

#[derive(Clone, Debug)]
pub struct CorRes1Report {
    pub rhs: LogMagnitude,
    pub holds: bool,
    /// `ln(rhs)`; positive when the inequality holds.
    pub margin_ln: Ball,
    pub deltas: Vec<BallComplex>,
}

/// Evaluates `(t+1)^{4d(t+1) prod D} prod H(Q_i)^{d prod D / D_i} max |delta_i| / ||Q_i||`
/// with `delta_i = Q_i(1, xi)` and checks it is at least one.
pub fn cor_res1_bound(
    field: &Arc<NumberField>,
    qs: &[HomPoly<AlgebraicNumber>],
    xi: &[BallComplex],
    seed: u64,
    prec: u32,
) -> Result<CorRes1Report> {
    let n = qs.len();
    if xi.len() + 1 != n {
        return Err(Error::Invalid(format!("expected {} coordinates for xi", n - 1)));
    }
    match macaulay_resultant(qs, seed)? {
        ResultantOutcome::Value { value, .. } if !value.is_zero() => {}
        ResultantOutcome::Value { .. } => {
            return Err(Error::Precondition("the forms have a common projective zero".into()))
        }
        ResultantOutcome::Indeterminate { .. } => {
            return Err(Error::Indeterminate("resultant denominator vanished after all retries".into()))
        }
    }
    let d = field.degree() as u64;
    let prod: u64 = qs.iter().map(|q| u64::from(q.degree())).product();
    let mut rhs = LogMagnitude::from_i64(n as i64, prec).pow_u(4 * d * n as u64 * prod);
    let mut point = vec![BallComplex::one()];
    point.extend_from_slice(xi);
    let mut best: Option<LogMagnitude> = None;
    let mut deltas = Vec::with_capacity(n);
    for q in qs {
        let h = poly_height(field, q.terms().values(), prec)?.h;
        rhs = rhs.mul(&h.pow_u(d * prod / u64::from(q.degree())));
        let delta = poly_eval_ball(field, q, &point, 0, prec)?;
        let norm = poly_norm_at(field, q, 0, prec);
        let mag = LogMagnitude::from_rational(&delta.abs_upper().to_rational(), prec);
        let ratio = if mag.is_zero() { mag } else { mag.div(&norm)? };
        deltas.push(delta);
        best = match best {
            Some(b) if b.certainly_ge(&ratio) || ratio.is_zero() => Some(b),
            _ => Some(ratio),
        };
    }
    let best = best.expect("at least two forms");
    if best.is_zero() {
        return Err(Error::Precondition("every delta_i vanishes, so xi is a common zero".into()));
    }
    let rhs = rhs.mul(&best);
    Ok(CorRes1Report {
        holds: rhs.certainly_at_least_one(),
        margin_ln: rhs.ln().clone(),
        rhs,
        deltas,
    })
}

/// Forms `Q_1..Q_t` chosen from the family, with `Res(hP, Q_1, ..., Q_t) != 0`.
#[derive(Clone, Debug)]
pub struct BmSelection {
    pub qs: Vec<HomPoly<AlgebraicNumber>>,
    /// For each `Q_i`, the family indices used and their integer coefficients.
    pub combinations: Vec<Vec<(usize, i64)>>,
    pub resultant: AlgebraicNumber,
    pub attempts: usize,
}

impl BmSelection {
    pub fn to_value(&self, degree: usize) -> Value {
        json!({
            "combinations": self.combinations,
            "resultant": self.resultant.to_strings(degree),
            "attempts": self.attempts,
        })
    }
}

/// Seeded search for the Brownawell-Masser selection: `Q_i` combines at
/// most `D S^{i-1}` family members with integer coefficients of absolute
/// value at most `D S^{i-1}`.
pub fn bm_select(
    field: &Arc<NumberField>,
    family: &[HomPoly<AlgebraicNumber>],
    hp: &HomPoly<AlgebraicNumber>,
    seed: u64,
    budget: usize,
) -> Result<BmSelection> {
    let members: Vec<(usize, &HomPoly<AlgebraicNumber>)> =
        family.iter().enumerate().filter(|(_, f)| !f.is_zero()).collect();
    if members.is_empty() || hp.is_zero() {
        return Err(Error::Invalid("bm_select needs a nonzero family and a nonzero P".into()));
    }
    let nvars = hp.nvars().max(members[0].1.nvars());
    let t = nvars - 1;
    let s = u64::from(members[0].1.degree());
    let dd = u64::from(hp.degree());
    if dd > s {
        return Err(Error::Precondition(format!("deg P = {dd} exceeds S = {s}")));
    }
    let hp = HomPoly::new(nvars, hp.degree(), hp.poly().clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=budget {
        let mut qs = Vec::with_capacity(t);
        let mut combos = Vec::with_capacity(t);
        for i in 1..=t {
            let cap = dd.saturating_mul(s.saturating_pow(i as u32 - 1)).min(i64::MAX as u64);
            let count = (cap as usize).min(members.len());
            let mut chosen: Vec<(usize, i64)> = Vec::with_capacity(count);
            if attempt <= members.len() && t == 1 {
                chosen.push((attempt - 1, 1));
            } else {
                let mut pool: Vec<usize> = (0..members.len()).collect();
                for _ in 0..count {
                    let k = pool.swap_remove(rng.gen_range(0..pool.len()));
                    let bound = cap.min(1 << 20) as i64;
                    let mut c = 0;
                    while c == 0 {
                        c = rng.gen_range(-bound..=bound);
                    }
                    chosen.push((k, c));
                }
            }
            let forms: Vec<&HomPoly<AlgebraicNumber>> = chosen.iter().map(|&(k, _)| members[k].1).collect();
            let coeffs: Vec<i64> = chosen.iter().map(|&(_, c)| c).collect();
            let q = combination(field, &forms, &coeffs)?;
            combos.push(chosen.iter().map(|&(k, c)| (members[k].0, c)).collect());
            qs.push(HomPoly::new(nvars, q.degree(), q.poly().clone())?);
        }
        if qs.iter().any(HomPoly::is_zero) {
            continue;
        }
        let mut all = vec![hp.clone()];
        all.extend(qs.iter().cloned());
        if let ResultantOutcome::Value { value, .. } = macaulay_resultant(&all, seed ^ attempt as u64)? {
            if !value.is_zero() {
                return Ok(BmSelection { qs, combinations: combos, resultant: value, attempts: attempt });
            }
        }
    }
    Err(Error::Indeterminate(format!("no certificate found in {budget} attempts")))
}

/// `H(P)^{d S^t} ((t+1)^{8S} S^{2t} B)^{d t D S^{t-1}}`.
pub fn cor_res2_coefficient(
    h_p: &LogMagnitude,
    b: &LogMagnitude,
    t: u32,
    d: u32,
    dd: u32,
    s: u32,
    prec: u32,
) -> Result<LogMagnitude> {
    if dd > s || dd == 0 {
        return Err(Error::Precondition(format!("need 1 <= D = {dd} <= S = {s}")));
    }
    let s_big = BigInt::from(s);
    let st = s_big.pow(t);
    let e_h = BigInt::from(d) * &st;
    let e_outer = BigInt::from(d) * BigInt::from(t) * BigInt::from(dd) * s_big.pow(t - 1);
    let inner = LogMagnitude::from_i64(i64::from(t) + 1, prec)
        .pow_u(8 * u64::from(s))
        .mul(&LogMagnitude::from_i64(i64::from(s), prec).pow_u(2 * u64::from(t)))
        .mul(b);
    Ok(h_p.pow_int(&e_h)?.mul(&inner.pow_int(&e_outer)?))
}

/// Exact resultant of rational forms given as integer coefficient lists, for tests and the CLI.
pub fn resultant_of_rational_forms(polys: &[HomPoly<BigRational>], seed: u64) -> Result<ResultantOutcome<BigRational>> {
    macaulay_resultant(polys, seed)
}

/// `u64` product of the degrees, if it fits.
pub fn degree_product(degrees: &[u32]) -> Option<u64> {
    degrees.iter().try_fold(1u64, |acc, &d| acc.checked_mul(u64::from(d)))
}

/// Converts an integer coefficient to `i64` when it fits (report helper).
pub fn small(n: &BigInt) -> Option<i64> {
    n.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn form(nvars: usize, degree: u32, terms: &[(&[u32], i64)]) -> HomPoly<BigRational> {
        HomPoly::from_terms(nvars, degree, terms.iter().map(|(e, c)| (e.to_vec(), rat_int(*c)))).unwrap()
    }

    fn value(polys: &[HomPoly<BigRational>]) -> BigRational {
        macaulay_resultant(polys, 0).unwrap().value().unwrap().clone()
    }

    #[test]
    fn examples() {
        let a = form(2, 1, &[(&[1, 0], 1), (&[0, 1], -2)]);
        let b = form(2, 1, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(value(&[a, b]), rat_int(3));
        let c = form(2, 1, &[(&[1, 0], 1), (&[0, 1], -1)]);
        let d = form(2, 2, &[(&[2, 0], 1), (&[0, 2], -1)]);
        assert!(value(&[c.clone(), d]).is_zero());
        assert!(value(&[c.clone(), form(2, 2, &[])]).is_zero());
        let e = form(2, 2, &[(&[2, 0], 1), (&[0, 2], -2)]);
        let r = value(&[e.clone(), c.clone()]);
        assert!(r == rat_int(1) || r == rat_int(-1));
        let s = sylvester_resultant(&e, &c);
        assert!(s == r || s == -r.clone());
    }

    #[test]
    fn linear_case_is_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let polys: Vec<_> = (0..3).map(|_| random_form(3, 1, 5, &mut rng)).collect();
            let rows: Vec<Vec<BigRational>> =
                polys.iter().map(|p| (0..3).map(|j| p.coeff(&Monomial::var(j, 1))).collect()).collect();
            assert_eq!(value(&polys), Matrix::from_rows(rows).det_bareiss());
        }
    }

    #[test]
    fn extraneous_factor_and_retry() {
        // degrees (2,1,1) in three variables; x1 x2 is the only non-reduced monomial
        let m = macaulay_matrix(&generic_forms(&[2, 1, 1])).unwrap();
        assert_eq!(m.extraneous.len(), 1);
        // a planted zero at (1:1:1) and a nonvanishing triple
        let f0 = form(3, 2, &[(&[2, 0, 0], 1), (&[0, 1, 1], -1)]);
        let f1 = form(3, 1, &[(&[1, 0, 0], 1), (&[0, 1, 0], -1)]);
        let f2 = form(3, 1, &[(&[0, 1, 0], 1), (&[0, 0, 1], -1)]);
        assert!(value(&[f0.clone(), f1.clone(), f2.clone()]).is_zero());
        let g2 = form(3, 1, &[(&[0, 0, 1], 1)]);
        // x0 = x1, x2 = 0 forces x0^2 = 0: no common zero
        assert!(!value(&[f0, f1, g2]).is_zero());
    }

    #[test]
    fn length_patterns() {
        for d in [&[1u32, 1][..], &[2, 1], &[2, 2], &[1, 1, 1]] {
            let a = length_audit(d).unwrap();
            assert!(a.passed && a.homogeneous, "{d:?}: {a:?}");
        }
        assert_eq!(length_audit(&[1, 1]).unwrap().length, BigInt::from(2));
        assert_eq!(length_audit(&[1, 1, 1]).unwrap().length, BigInt::from(6));
    }

    #[test]
    fn property_suite_runs() {
        let rep = res_property_suite(&[2, 1], 10, 1).unwrap();
        assert!(rep.passed(), "{:?}", rep);
        let rep = res_property_suite(&[1, 1, 2], 5, 2).unwrap();
        assert!(rep.passed(), "{:?}", rep);
    }

    #[test]
    fn cor_res1_example() {
        let k = NumberField::rationals();
        let q0 = HomPoly::from_terms(2, 1, [(vec![1, 0], k.from_i64(1)), (vec![0, 1], k.from_i64(-2))]).unwrap();
        let q1 = HomPoly::from_terms(2, 1, [(vec![1, 0], k.from_i64(1)), (vec![0, 1], k.from_i64(1))]).unwrap();
        let xi = vec![BallComplex::from_rational(&rat(1, 3), 128)];
        let rep = cor_res1_bound(&k, &[q0, q1], &xi, 0, 128).unwrap();
        assert!(rep.holds);
        let expect = (256.0f64 * 2.0 * 4.0 / 3.0).ln();
        assert!((rep.margin_ln.to_f64() - expect).abs() < 1e-6);
    }

    #[test]
    fn cor_res2_examples() {
        let one = LogMagnitude::one();
        let c = cor_res2_coefficient(&one, &one, 1, 1, 1, 1, 128).unwrap();
        assert_eq!(c.exact(), Some(&rat_int(256)));
        let c6 = cor_res2_coefficient(&one, &one, 1, 1, 1, 6, 128).unwrap();
        let expect = BigInt::from(2).pow(48) * BigInt::from(36);
        assert_eq!(c6.exact(), Some(&BigRational::from_integer(expect)));
        assert!(cor_res2_coefficient(&one, &one, 1, 1, 3, 2, 128).is_err());
        let h2 = LogMagnitude::from_i64(2, 128);
        assert!(cor_res2_coefficient(&h2, &one, 1, 1, 1, 6, 128).unwrap().certainly_ge(&c6));
    }
}
