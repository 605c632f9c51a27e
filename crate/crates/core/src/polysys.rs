//! The homogeneous family `Q_{n,l}`, sparse form plumbing, and
//! certificates that the family has no common projective zero.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::ball::BallComplex;
use crate::error::{Error, Result};
use crate::interpolation::{AuxFunction, DeltaNormalizer};
use crate::logmag::LogMagnitude;
use crate::numberfield::{AlgebraicNumber, NumberField};
use crate::poly::{HomPoly, Monomial, UniPoly};
use crate::resultant::{macaulay_resultant, ResultantOutcome};

pub use crate::poly::homogenize;

/// Default number of random combinations tried in resultant mode.
pub const ZERO_LEMMA_BUDGET: usize = 64;

fn x_monomial(s: u32, m: &[u32]) -> Monomial {
    let mut e = vec![s - m.iter().sum::<u32>()];
    e.extend_from_slice(m);
    Monomial::new(e)
}

/// `Q_{n,l} = X_0^{S-|n|} X^n - sum_{m,j} A_{m,j}^{(l)}(n.alpha) X_0^{S-|m|} X^m`.
pub fn build_q(aux: &AuxFunction, n: usize, l: usize) -> Result<HomPoly<AlgebraicNumber>> {
    let params = aux.params();
    if n >= aux.targets().len() || l >= params.mult() as usize {
        return Err(Error::OutOfRange(format!("(n, l) = ({n}, {l}) outside Sigma(S+1) x [0, T)")));
    }
    let s = params.s();
    let mut terms = vec![(
        x_monomial(s, &aux.targets()[n]),
        params.field().from_i64(1),
    )];
    for m in 0..params.n() {
        let c = aux.q_coefficient(m, n, l);
        if !c.is_zero() {
            terms.push((x_monomial(s, &aux.targets()[m]), -c));
        }
    }
    HomPoly::new(params.t() + 1, s, crate::poly::MPoly::from_terms(terms))
}

/// Member `Delta Q_{n,l}` of the family, with its index.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub n: Vec<u32>,
    pub l: usize,
    pub poly: HomPoly<AlgebraicNumber>,
}

/// All `Delta Q_{n,l}` for `n` in `Sigma(S+1)`, `l < T`; each must have
/// integral coefficients.
pub fn family_f(aux: &AuxFunction, norm: &DeltaNormalizer) -> Result<Vec<FamilyMember>> {
    let k = aux.params().field();
    let mut out = Vec::new();
    for n in 0..aux.targets().len() {
        for l in 0..aux.params().mult() as usize {
            let poly = build_q(aux, n, l)?.scale(&norm.delta);
            if let Some((m, c)) = poly.terms().iter().find(|(_, c)| !k.is_integral(c)) {
                return Err(Error::Invalid(format!(
                    "coefficient {c} of {m:?} in Delta Q_{{{:?},{l}}} is not integral",
                    aux.targets()[n]
                )));
            }
            out.push(FamilyMember {
                n: aux.targets()[n].clone(),
                l,
                poly,
            });
        }
    }
    Ok(out)
}

/// `Q^sigma(point)` with coefficients embedded at working precision `prec`.
pub fn poly_eval_ball(
    field: &NumberField,
    q: &HomPoly<AlgebraicNumber>,
    point: &[BallComplex],
    sigma: usize,
    prec: u32,
) -> Result<BallComplex> {
    if point.len() != q.nvars() {
        return Err(Error::Invalid(format!("point of length {} for {} variables", point.len(), q.nvars())));
    }
    Ok(q.eval_with(point, |c| field.embed_at(c, sigma, prec)))
}

/// `max_sigma ||Q^sigma||`, exact for rational coefficients.
pub fn poly_norm(field: &NumberField, q: &HomPoly<AlgebraicNumber>, prec: u32) -> LogMagnitude {
    q.terms()
        .values()
        .map(|c| crate::interpolation::max_conjugate(field, c, prec))
        .fold(LogMagnitude::zero(), |a, b| if b.certainly_ge(&a) || a.is_zero() { b } else { a })
}

/// `||Q^sigma||` for one embedding, as an upper enclosure.
pub fn poly_norm_at(field: &NumberField, q: &HomPoly<AlgebraicNumber>, sigma: usize, prec: u32) -> LogMagnitude {
    let mut best = LogMagnitude::zero();
    for c in q.terms().values() {
        let m = match c.as_rational() {
            Some(r) => LogMagnitude::from_rational(&num_traits::Signed::abs(&r), prec),
            None => LogMagnitude::from_rational(&field.embed(c, sigma, prec).abs_upper().to_rational(), prec),
        };
        if best.is_zero() || m.certainly_ge(&best) {
            best = m;
        }
    }
    best
}

/// Coefficientwise image under the automorphism sending `theta` to its `sigma`-th conjugate.
pub fn poly_conjugate(
    field: &Arc<NumberField>,
    q: &HomPoly<AlgebraicNumber>,
    sigma: usize,
) -> Result<HomPoly<AlgebraicNumber>> {
    let terms = q
        .terms()
        .iter()
        .map(|(m, c)| Ok((m.clone(), field.apply_automorphism(c, sigma)?)))
        .collect::<Result<Vec<_>>>()?;
    HomPoly::new(q.nvars(), q.degree(), crate::poly::MPoly::from_terms(terms))
}

fn coefficient_from_value(field: &Arc<NumberField>, v: &Value) -> Result<AlgebraicNumber> {
    match v {
        Value::Array(items) => {
            let coords = items.iter().map(crate::numberfield::spec_rational).collect::<Result<Vec<_>>>()?;
            field.element(coords)
        }
        other => Ok(field.from_rational(crate::numberfield::spec_rational(other)?)),
    }
}

/// Reads `{"nvars", "degree", "terms": [{"exp": [..], "coeff": ..}]}`.
pub fn poly_from_value(field: &Arc<NumberField>, v: &Value) -> Result<HomPoly<AlgebraicNumber>> {
    let nvars = v
        .get("nvars")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Format("missing \"nvars\"".into()))? as usize;
    let degree = v
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Format("missing \"degree\"".into()))? as u32;
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Format("missing \"terms\" list".into()))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let exp: Vec<u32> = t
            .get("exp")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Format("term without \"exp\"".into()))?
            .iter()
            .map(|e| e.as_u64().map(|x| x as u32).ok_or_else(|| Error::Format("exponents must be integers".into())))
            .collect::<Result<_>>()?;
        if exp.len() != nvars {
            return Err(Error::Format(format!("exponent {exp:?} has length {} not {nvars}", exp.len())));
        }
        let coeff = coefficient_from_value(field, t.get("coeff").ok_or_else(|| Error::Format("term without \"coeff\"".into()))?)?;
        out.push((Monomial::new(exp), coeff));
    }
    let mut acc = crate::poly::MPoly::zero();
    for (m, c) in out {
        acc = acc + crate::poly::MPoly::from_terms([(m, c)]);
    }
    HomPoly::new(nvars, degree, acc).map_err(|e| Error::Format(e.to_string()))
}

pub fn poly_from_json(field: &Arc<NumberField>, text: &str) -> Result<HomPoly<AlgebraicNumber>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    poly_from_value(field, &v)
}

pub fn poly_to_value(field: &NumberField, q: &HomPoly<AlgebraicNumber>) -> Value {
    let d = field.degree();
    json!({
        "nvars": q.nvars(),
        "degree": q.degree(),
        "terms": q.terms().iter().map(|(m, c)| {
            let coeff = if d == 1 { json!(crate::scalar::format_rational(&c.coord(0))) } else { json!(c.to_strings(d)) };
            json!({"exp": m.exps(q.nvars()), "coeff": coeff})
        }).collect::<Vec<_>>(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroLemmaMode {
    /// Exact gcd of the binary forms (`t = 1`).
    Gcd,
    /// Random integer combinations with a nonzero Macaulay resultant.
    Resultant { budget: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroLemmaStatus {
    /// No common projective zero, with a certificate.
    Certified,
    HypothesisViolated(String),
    Inconclusive(String),
}

#[derive(Clone, Debug)]
pub struct ZeroLemmaReport {
    pub status: ZeroLemmaStatus,
    pub mode: ZeroLemmaMode,
    pub attempts: usize,
    pub certificate: Value,
}

impl ZeroLemmaReport {
    pub fn certified(&self) -> bool {
        self.status == ZeroLemmaStatus::Certified
    }

    pub fn to_value(&self) -> Value {
        let (status, reason) = match &self.status {
            ZeroLemmaStatus::Certified => ("certified", None),
            ZeroLemmaStatus::HypothesisViolated(r) => ("hypothesis violated", Some(r.clone())),
            ZeroLemmaStatus::Inconclusive(r) => ("inconclusive", Some(r.clone())),
        };
        let mode = match &self.mode {
            ZeroLemmaMode::Gcd => json!({"mode": "gcd"}),
            ZeroLemmaMode::Resultant { budget, seed } => json!({"mode": "resultant", "budget": budget, "seed": seed}),
        };
        json!({"status": status, "reason": reason, "mode": mode, "attempts": self.attempts, "certificate": self.certificate})
    }
}

fn gcd_certificate(field: &Arc<NumberField>, forms: &[&HomPoly<AlgebraicNumber>]) -> ZeroLemmaReport {
    let d = field.degree();
    let mut g: UniPoly<AlgebraicNumber> = UniPoly::zero();
    let mut full_degree = false;
    for f in forms {
        let s = f.degree();
        let coeffs: Vec<AlgebraicNumber> = (0..=s)
            .map(|i| f.coeff(&Monomial::new(vec![s - i, i])).with_field(field))
            .collect();
        let u = UniPoly::new(coeffs);
        full_degree |= u.degree() == Some(s as usize);
        g = if g.is_zero() { u.monic() } else { g.gcd(&u) };
    }
    let constant = g.degree() == Some(0);
    let status = if constant && full_degree {
        ZeroLemmaStatus::Certified
    } else if !constant {
        ZeroLemmaStatus::Inconclusive("the forms share a nonconstant factor".into())
    } else {
        ZeroLemmaStatus::Inconclusive("every form vanishes at (0:1)".into())
    };
    ZeroLemmaReport {
        status,
        mode: ZeroLemmaMode::Gcd,
        attempts: 1,
        certificate: json!({
            "gcd": g.coeffs().iter().map(|c| c.to_strings(d)).collect::<Vec<_>>(),
            "nonvanishing_at_infinity": full_degree,
        }),
    }
}

/// Certifies that the forms have no common zero in `P^t(C)`; never claims
/// that a common zero exists.
pub fn zero_lemma_check(
    field: &Arc<NumberField>,
    family: &[HomPoly<AlgebraicNumber>],
    mult: u32,
    mode: ZeroLemmaMode,
) -> Result<ZeroLemmaReport> {
    if mult < 2 {
        return Ok(ZeroLemmaReport {
            status: ZeroLemmaStatus::HypothesisViolated("hypothesis T >= 2 violated".into()),
            mode,
            attempts: 0,
            certificate: Value::Null,
        });
    }
    let forms: Vec<&HomPoly<AlgebraicNumber>> = family.iter().filter(|f| !f.is_zero()).collect();
    let Some(first) = forms.first() else {
        return Ok(ZeroLemmaReport {
            status: ZeroLemmaStatus::Inconclusive("the family is identically zero".into()),
            mode,
            attempts: 0,
            certificate: Value::Null,
        });
    };
    let nvars = first.nvars();
    match mode {
        ZeroLemmaMode::Gcd => {
            if nvars != 2 {
                return Err(Error::Invalid("gcd mode needs binary forms (t = 1)".into()));
            }
            Ok(gcd_certificate(field, &forms))
        }
        ZeroLemmaMode::Resultant { budget, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = field.degree();
            for attempt in 1..=budget {
                let coeffs: Vec<Vec<i64>> = (0..nvars)
                    .map(|i| {
                        if attempt == 1 && forms.len() >= nvars {
                            (0..forms.len()).map(|k| i64::from(k == forms.len() - nvars + i)).collect()
                        } else {
                            (0..forms.len()).map(|_| rng.gen_range(-2..=2)).collect()
                        }
                    })
                    .collect();
                let combos: Vec<HomPoly<AlgebraicNumber>> = coeffs
                    .iter()
                    .map(|row| combination(field, &forms, row))
                    .collect::<Result<_>>()?;
                if combos.iter().any(HomPoly::is_zero) {
                    continue;
                }
                if let ResultantOutcome::Value { value, .. } = macaulay_resultant(&combos, seed ^ attempt as u64)? {
                    if !value.is_zero() {
                        return Ok(ZeroLemmaReport {
                            status: ZeroLemmaStatus::Certified,
                            mode: ZeroLemmaMode::Resultant { budget, seed },
                            attempts: attempt,
                            certificate: json!({"combinations": coeffs, "resultant": value.to_strings(d)}),
                        });
                    }
                }
            }
            Ok(ZeroLemmaReport {
                status: ZeroLemmaStatus::Inconclusive(format!("no nonzero resultant in {budget} attempts")),
                mode: ZeroLemmaMode::Resultant { budget, seed },
                attempts: budget,
                certificate: Value::Null,
            })
        }
    }
}

/// `sum coeffs[k] forms[k]`.
pub fn combination(
    field: &Arc<NumberField>,
    forms: &[&HomPoly<AlgebraicNumber>],
    coeffs: &[i64],
) -> Result<HomPoly<AlgebraicNumber>> {
    let mut acc = HomPoly::zero(forms[0].nvars(), forms[0].degree());
    for (f, &c) in forms.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.add(&f.scale(&field.from_rational(BigRational::from_integer(BigInt::from(c)))))?;
        }
    }
    Ok(acc)
}

/// Checks `Q(lambda x) = lambda^deg Q(x)` at an exact point.
pub fn check_homogeneity(q: &HomPoly<AlgebraicNumber>, point: &[AlgebraicNumber], lambda: &AlgebraicNumber) -> bool {
    let scaled: Vec<AlgebraicNumber> = point.iter().map(|x| x.clone() * lambda.clone()).collect();
    let lhs = q.eval(&scaled);
    let rhs = q.eval(point) * num_traits::pow(lambda.clone(), q.degree() as usize);
    lhs == rhs
}

/// The point `(1, e^{alpha_1}, ..., e^{alpha_t})` under the designated embedding.
pub fn exp_point(field: &NumberField, alpha: &[AlgebraicNumber], prec: u32) -> Result<Vec<BallComplex>> {
    let mut out = vec![BallComplex::one()];
    for a in alpha {
        out.push(field.embed_at(a, 0, prec).exp(prec)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::{Ball, Dyadic};
    use crate::interpolation::{delta_normalizer, AuxParams};
    use crate::scalar::{rat, rat_int};

    fn q_aux(s: u32, t: u32) -> (AuxFunction, DeltaNormalizer) {
        let k = NumberField::rationals();
        let p = AuxParams::new(&k, vec![k.from_i64(1)], s, t).unwrap();
        let n = delta_normalizer(&p);
        (AuxFunction::new(p).unwrap(), n)
    }

    fn sqrt2() -> Arc<NumberField> {
        NumberField::new(vec![BigInt::from(-2), BigInt::zero(), BigInt::one()], None).unwrap()
    }

    fn sqrt2_aux() -> (AuxFunction, DeltaNormalizer) {
        let k = sqrt2();
        let p = AuxParams::new(&k, vec![k.from_i64(1), k.theta()], 2, 2).unwrap();
        let n = delta_normalizer(&p);
        (AuxFunction::new(p).unwrap(), n)
    }

    #[test]
    fn q_matches_g() {
        let (aux, _) = q_aux(1, 1);
        let q = build_q(&aux, 1, 0).unwrap();
        assert_eq!(q.coeff(&Monomial::new(vec![0, 1])).as_rational(), Some(rat_int(1)));
        assert_eq!(q.coeff(&Monomial::new(vec![1, 0])).as_rational(), Some(rat_int(-1)));
        let k = aux.params().field().clone();
        let pt = exp_point(&k, aux.params().alpha(), 200).unwrap();
        let v = poly_eval_ball(&k, &q, &pt, 0, 200).unwrap();
        let e = Ball::e(200) - Ball::one();
        assert!(v.re.overlaps(&e));
        for (aux, _) in [q_aux(2, 2), q_aux(3, 2), sqrt2_aux()] {
            let k = aux.params().field().clone();
            let pt = exp_point(&k, aux.params().alpha(), 300).unwrap();
            for n in 0..aux.targets().len() {
                for l in 0..aux.params().mult() as usize {
                    let q = build_q(&aux, n, l).unwrap();
                    let v = poly_eval_ball(&k, &q, &pt, 0, 300).unwrap();
                    let g = aux.eval_direct(n, l, 100).unwrap();
                    assert!(v.overlaps(&g));
                    if n < aux.params().n() {
                        assert!(q.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn q_coefficients_s2_t2() {
        // A_{0,0} = 1 - 3x^2 + 2x^3, A_{0,1} = x - 2x^2 + x^3,
        // A_{1,0} = 3x^2 - 2x^3,     A_{1,1} = -x^2 + x^3; first derivatives at 2
        let (aux, _) = q_aux(2, 2);
        let q = build_q(&aux, 2, 1).unwrap();
        let c = |e: Vec<u32>| q.coeff(&Monomial::new(e)).as_rational().unwrap();
        assert_eq!(c(vec![0, 2]), rat_int(1));
        assert_eq!(c(vec![2, 0]), -(rat_int(12) + rat_int(5)));
        assert_eq!(c(vec![1, 1]), -(rat_int(-12) + rat_int(8)));
    }

    #[test]
    fn family_integrality() {
        let (aux, n) = q_aux(2, 2);
        let fam = family_f(&aux, &n).unwrap();
        assert_eq!(fam.len(), 6);
        assert!(fam.iter().all(|f| f.poly.terms().values().all(|c| c.as_rational().unwrap().is_integer())));
        let (aux2, n2) = sqrt2_aux();
        let fam2 = family_f(&aux2, &n2).unwrap();
        assert_eq!(fam2.len(), 12);
        assert!(fam2.iter().all(|f| f.poly.nvars() == 3 && f.poly.degree() == 2));
    }

    #[test]
    fn zero_lemma_modes() {
        for s in [2, 3] {
            let (aux, n) = q_aux(s, 2);
            let fam: Vec<_> = family_f(&aux, &n).unwrap().into_iter().map(|f| f.poly).collect();
            let rep = zero_lemma_check(aux.params().field(), &fam, 2, ZeroLemmaMode::Gcd).unwrap();
            assert!(rep.certified(), "{:?}", rep);
        }
        let (aux, n) = q_aux(1, 1);
        let fam: Vec<_> = family_f(&aux, &n).unwrap().into_iter().map(|f| f.poly).collect();
        let rep = zero_lemma_check(aux.params().field(), &fam, 1, ZeroLemmaMode::Gcd).unwrap();
        assert_eq!(rep.status, ZeroLemmaStatus::HypothesisViolated("hypothesis T >= 2 violated".into()));
        let (aux, n) = sqrt2_aux();
        let fam: Vec<_> = family_f(&aux, &n).unwrap().into_iter().map(|f| f.poly).collect();
        let mode = ZeroLemmaMode::Resultant { budget: ZERO_LEMMA_BUDGET, seed: 0 };
        let rep = zero_lemma_check(aux.params().field(), &fam, 2, mode).unwrap();
        assert!(rep.certified(), "{:?}", rep);
    }

    #[test]
    fn norm_and_conjugate() {
        let k = NumberField::rationals();
        let q = HomPoly::from_terms(2, 2, [(vec![2, 0], k.from_i64(3)), (vec![1, 1], k.from_i64(-5))]).unwrap();
        assert_eq!(poly_norm(&k, &q, 64).exact(), Some(&rat_int(5)));
        let k2 = sqrt2();
        let r = HomPoly::from_terms(2, 1, [(vec![1, 0], k2.theta())]).unwrap();
        let c = poly_conjugate(&k2, &r, 1).unwrap();
        assert_eq!(c.coeff(&Monomial::new(vec![1, 0])), -k2.theta());
        let pt = vec![BallComplex::one(), BallComplex::one()];
        let v = poly_eval_ball(&k2, &r, &pt, 1, 100).unwrap();
        assert!(v.re.is_negative());
        let up = poly_norm(&k2, &r, 64).ln().upper().to_f64();
        assert!((up - 2f64.sqrt().ln()).abs() < 1e-6);
        assert!(v.radius() < Dyadic::pow2(-90));
    }

    #[test]
    fn json_round_trip() {
        let k = sqrt2();
        let text = r#"{"nvars": 3, "degree": 2, "terms": [{"exp": [0,1,1], "coeff": "1"}, {"exp": [2,0,0], "coeff": -7}, {"exp": [1,1,0], "coeff": ["1/2", "3"]}]}"#;
        let p = poly_from_json(&k, text).unwrap();
        assert_eq!(p.terms().len(), 3);
        assert_eq!(p.coeff(&Monomial::new(vec![1, 1, 0])).coords(), &[rat(1, 2), rat_int(3)]);
        let back = poly_from_value(&k, &poly_to_value(&k, &p)).unwrap();
        assert_eq!(back, p);
        assert!(poly_from_json(&k, r#"{"nvars": 2, "degree": 2, "terms": [{"exp": [1,0], "coeff": 1}]}"#).is_err());
    }

    #[test]
    fn homogeneity_of_family() {
        let (aux, n) = sqrt2_aux();
        let k = aux.params().field().clone();
        let pt = vec![k.from_i64(2), k.theta(), k.from_i64(-3)];
        let lambda = k.theta() + k.from_i64(5);
        for f in family_f(&aux, &n).unwrap() {
            assert!(check_homogeneity(&f.poly, &pt, &lambda));
        }
    }
}
