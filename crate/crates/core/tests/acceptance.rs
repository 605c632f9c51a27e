//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use transcert::bounds::{audit_chain, verify_measure, TheoremParams, Verdict};
use transcert::heights::{det2_form, h_weil, prop_u_check, Perturbation, ProjectivePoint};
use transcert::interpolation::{
    delta_normalizer, hermite_basis, lem_a_check, prop_q_check, refine, AuxFunction, AuxParams, HermiteBasis,
};
use transcert::linalg::Matrix;
use transcert::poly::{HomPoly, Monomial, UniPoly};
use transcert::polysys::{family_f, zero_lemma_check, ZeroLemmaMode, ZERO_LEMMA_BUDGET};
use transcert::resultant::{length_audit, macaulay_resultant, random_form, res_property_suite};
use transcert::{AlgebraicNumber, Dyadic, KForm, LogMagnitude, NumberField};

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn r(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn sqrt2() -> Arc<NumberField> {
    NumberField::new(vec![BigInt::from(-2), BigInt::zero(), BigInt::one()], None).unwrap()
}

fn q_params(s: u32, t: u32) -> AuxParams {
    let k = NumberField::rationals();
    AuxParams::new(&k, vec![k.from_i64(1)], s, t).unwrap()
}

fn sqrt2_params(s: u32, t: u32) -> AuxParams {
    let k = sqrt2();
    AuxParams::new(&k, vec![k.from_i64(1), k.theta()], s, t).unwrap()
}

fn aux(p: &AuxParams) -> AuxFunction {
    AuxFunction::new(p.clone()).unwrap()
}

fn hermite_duality() -> Result<(), String> {
    for p in [q_params(2, 2), q_params(6, 6), sqrt2_params(2, 2)] {
        let nodes = p.nodes();
        let mult = p.mult() as usize;
        let local = HermiteBasis::local(nodes.clone(), mult).map_err(|e| e.to_string())?;
        let solved = HermiteBasis::solve(nodes, mult).map_err(|e| e.to_string())?;
        ensure(local.check_duality(), format!("duality fails at S={} T={}", p.s(), p.mult()))?;
        ensure(local.agrees_with(&solved), format!("bases differ at S={} T={}", p.s(), p.mult()))?;
    }
    Ok(())
}

fn kernel_and_tail() -> Result<(), String> {
    let b = hermite_basis(&q_params(2, 2)).map_err(|e| e.to_string())?;
    let nt = b.dim();
    ensure(nt == 4, format!("NT = {nt}"))?;
    for k in 0..nt {
        ensure(b.phi_apply(&UniPoly::monomial(AlgebraicNumber::one(), k)).is_zero(), format!("phi(x^{k}) != 0"))?;
    }
    for k in nt..nt + 5 {
        let direct = b.phi_apply(&UniPoly::monomial(AlgebraicNumber::one(), k));
        ensure(direct == b.phi_monomial(k), format!("closed form differs at k={k}"))?;
        ensure(!direct.is_zero(), format!("phi(x^{k}) vanishes"))?;
    }
    Ok(())
}

fn series_cross_check() -> Result<(), String> {
    let a = aux(&q_params(6, 6));
    let tail_goal = BigRational::new(1.into(), BigInt::one() << 82);
    for n in 0..a.targets().len() {
        for l in 0..a.params().mult() as usize {
            let mut k = a.default_truncation();
            while a.series_tail_bound(n, l, k).map_err(|e| e.to_string())? > tail_goal {
                k *= 2;
            }
            let d = refine(90, |p| a.eval_direct(n, l, p)).map_err(|e| e.to_string())?;
            let s = a.eval_series(n, l, k, 90).map_err(|e| e.to_string())?;
            ensure(d.overlaps(&s), format!("enclosures disjoint at (n={n}, l={l})"))?;
            let tight = Dyadic::pow2(-80);
            ensure(d.radius() < tight && s.radius() < tight, format!("radius too wide at (n={n}, l={l})"))?;
        }
    }
    Ok(())
}

fn lem_a() -> Result<(), String> {
    for p in [q_params(6, 6), sqrt2_params(2, 2)] {
        let rep = lem_a_check(&aux(&p), &delta_normalizer(&p), 128);
        ensure(rep.checked > 0 && rep.passed(), format!("{} violations at S={}", rep.violations.len(), p.s()))?;
    }
    Ok(())
}

fn prop_q() -> Result<(), String> {
    let p = q_params(6, 6);
    let rep = prop_q_check(&aux(&p), &delta_normalizer(&p), 128).map_err(|e| e.to_string())?;
    ensure(rep.in_hypothesis(), "hypothesis reported violated")?;
    ensure(rep.pairs == 42, format!("{} pairs", rep.pairs))?;
    ensure(rep.passed(), format!("{} violations", rep.violations.len()))
}

fn family(p: &AuxParams) -> Vec<KForm> {
    let a = aux(p);
    family_f(&a, &delta_normalizer(p)).unwrap().into_iter().map(|m| m.poly).collect()
}

fn zero_lemma() -> Result<(), String> {
    for s in [2, 3] {
        let p = q_params(s, 2);
        let rep = zero_lemma_check(p.field(), &family(&p), 2, ZeroLemmaMode::Gcd).map_err(|e| e.to_string())?;
        ensure(rep.certified(), format!("gcd certificate at S={s}: {:?}", rep.status))?;
    }
    let p = sqrt2_params(2, 2);
    let mode = ZeroLemmaMode::Resultant { budget: ZERO_LEMMA_BUDGET, seed: 0 };
    let rep = zero_lemma_check(p.field(), &family(&p), 2, mode).map_err(|e| e.to_string())?;
    ensure(rep.certified(), format!("resultant certificate: {:?}", rep.status))
}

fn exact_height(k: &Arc<NumberField>, v: &[i64]) -> Option<BigRational> {
    let p = ProjectivePoint::from_i64(k, v).ok()?;
    h_weil(&p, 64).ok()?.h.exact().cloned()
}

fn heights() -> Result<(), String> {
    let q = NumberField::rationals();
    for (v, h) in [(&[1, 2][..], 2), (&[2, 4], 2), (&[3, 6, 12], 4)] {
        ensure(exact_height(&q, v) == Some(r(h)), format!("H({v:?}) != {h}"))?;
    }
    let k = sqrt2();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let el = |rng: &mut ChaCha8Rng| loop {
        let a = k.element(vec![r(rng.gen_range(-9..10)), r(rng.gen_range(-9..10))]).unwrap();
        if !a.is_zero() {
            return a;
        }
    };
    for i in 0..30 {
        let u = ProjectivePoint::new(&k, vec![el(&mut rng), el(&mut rng), el(&mut rng)]).unwrap();
        let lam = el(&mut rng);
        let h1 = h_weil(&u, 96).map_err(|e| e.to_string())?;
        let h2 = h_weil(&u.scale(&lam).map_err(|e| e.to_string())?, 96).map_err(|e| e.to_string())?;
        ensure(h1.h.ln().overlaps(h2.h.ln()), format!("scaling changed the height in trial {i}"))?;
    }
    for i in 0..100 {
        let n = rng.gen_range(2..5);
        let u = ProjectivePoint::new(&k, (0..n).map(|_| el(&mut rng)).collect()).unwrap();
        let h = h_weil(&u, 96).map_err(|e| e.to_string())?;
        ensure(h.h.certainly_at_least_one() || h.h.ln().contains_zero(), format!("H < 1 in trial {i}"))?;
    }
    for i in 0..100 {
        let n = rng.gen_range(2..5);
        let mut v: Vec<i64> = (0..n).map(|_| rng.gen_range(-60..61)).collect();
        if v.iter().all(|&x| x == 0) {
            v[0] = 1;
        }
        let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
        let m = v.iter().map(|x| x.abs()).max().unwrap();
        ensure(exact_height(&q, &v) == Some(BigRational::new(m.into(), g.into())), format!("oracle mismatch in trial {i}"))?;
    }
    Ok(())
}

fn prop_u() -> Result<(), String> {
    let q = NumberField::rationals();
    let det = det2_form();
    let half = q.from_rational(BigRational::new(1.into(), 2.into()));
    let u = vec![vec![q.from_i64(1), q.from_i64(0)], vec![q.from_i64(1), half.clone()]];
    let e = Perturbation::Exact(vec![vec![q.from_i64(0), q.from_i64(0)], vec![q.from_i64(0), -half]]);
    let rep = prop_u_check(&q, &det, &u, &e, 128).map_err(|e| e.to_string())?;
    ensure(rep.rhs.exact() == Some(&r(8)) && rep.holds, "worked instance")?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 10 {
        let a: Vec<i64> = (0..4).map(|_| rng.gen_range(-9..10)).collect();
        if a[0] * a[3] - a[1] * a[2] == 0 || (a[0] == 0 && a[1] == 0) {
            continue;
        }
        // plant a zero: move the second row onto a multiple of the first
        let lam = rng.gen_range(-3..4);
        let eps = [0, 0, lam * a[0] - a[2], lam * a[1] - a[3]];
        let row = |v: &[i64]| v.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        let u = vec![row(&a[..2]), row(&a[2..])];
        let e = Perturbation::Exact(vec![row(&eps[..2]), row(&eps[2..])]);
        let rep = prop_u_check(&q, &det, &u, &e, 128).map_err(|e| e.to_string())?;
        ensure(rep.holds && rep.margin_ln.is_positive(), format!("instance {a:?} + {eps:?}"))?;
        done += 1;
    }
    Ok(())
}

fn resultants() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..50 {
        let n = rng.gen_range(2..4);
        let polys: Vec<_> = (0..n).map(|_| random_form(n, 1, 6, &mut rng)).collect();
        let rows: Vec<Vec<BigRational>> =
            polys.iter().map(|p| (0..n).map(|j| p.coeff(&Monomial::var(j, 1))).collect()).collect();
        let res = macaulay_resultant(&polys, i).map_err(|e| e.to_string())?;
        ensure(res.value() == Some(&Matrix::from_rows(rows).det_bareiss()), format!("linear instance {i}"))?;
    }
    let rep = res_property_suite(&[2, 2], 50, 17).map_err(|e| e.to_string())?;
    for c in &rep.checks {
        ensure(c.ok() && c.trials >= 20, format!("{}: {}/{}", c.name, c.passed, c.trials))?;
    }
    ensure(rep.checks.iter().any(|c| c.name.starts_with("sylvester") && c.trials == 50), "sylvester check missing")?;
    let rep = res_property_suite(&[1, 2, 1], 20, 19).map_err(|e| e.to_string())?;
    ensure(rep.passed(), format!("three-variable suite: {:?}", rep.checks))?;
    for d in [&[1u32, 1][..], &[2, 1], &[2, 2], &[1, 1, 1]] {
        let a = length_audit(d).map_err(|e| e.to_string())?;
        ensure(a.passed && a.homogeneous, format!("length audit {d:?}"))?;
    }
    Ok(())
}

fn grid_params(t: u32, d: u32, degree: u32) -> TheoremParams {
    if d == 1 {
        TheoremParams::new(t, 1, degree, r(1), BigInt::one(), LogMagnitude::one()).unwrap()
    } else {
        let k = sqrt2();
        let alpha = [k.from_i64(1), k.theta()];
        TheoremParams::from_field(&k, &alpha[..t as usize], degree, LogMagnitude::one()).unwrap()
    }
}

fn proof_audit() -> Result<(), String> {
    for t in 1..=2 {
        for d in 1..=2 {
            for degree in 1..=2 {
                let rep = audit_chain(&grid_params(t, d, degree)).map_err(|e| e.to_string())?;
                ensure(rep.passed(), format!("(t,d,D)=({t},{d},{degree}) fails {:?}", rep.failures()))?;
            }
        }
    }
    let bad = grid_params(1, 1, 1).with_s(5).map_err(|e| e.to_string())?;
    let rep = audit_chain(&bad).map_err(|e| e.to_string())?;
    ensure(!rep.passed(), "corrupted S passes every step")
}

fn form(k: &Arc<NumberField>, nvars: usize, degree: u32, terms: &[(&[u32], i64)]) -> KForm {
    HomPoly::from_terms(nvars, degree, terms.iter().map(|(e, c)| (e.to_vec(), k.from_i64(*c)))).unwrap()
}

fn end_to_end() -> Result<(), String> {
    let q = NumberField::rationals();
    let k = sqrt2();
    let cases = [
        (q.clone(), vec![q.from_i64(1)], form(&q, 2, 1, &[(&[0, 1], 1), (&[1, 0], -3)])),
        (k.clone(), vec![k.from_i64(1), k.theta()], form(&k, 3, 2, &[(&[0, 1, 1], 1), (&[2, 0, 0], -7)])),
    ];
    for (field, alpha, p) in &cases {
        let run = || verify_measure(field, alpha, p, 128).map_err(|e| e.to_string());
        let first = run()?;
        ensure(first.verdict == Verdict::Consistent, format!("verdict {}", first.verdict.as_str()))?;
        ensure(first.rho_width() < Dyadic::pow2(-60), "rho enclosure too wide")?;
        ensure(first.log10_bound().starts_with('-'), format!("log10 bound {}", first.log10_bound()))?;
        let again = run()?;
        ensure(first.to_value() == again.to_value(), "reports differ across reruns")?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, Check, Duration); 11] = [
        ("hermite duality", hermite_duality, Duration::from_secs(60)),
        ("kernel and tail", kernel_and_tail, Duration::MAX),
        ("series cross-formula", series_cross_check, Duration::from_secs(300)),
        ("integrality and B0", lem_a, Duration::MAX),
        ("Q norm and value bounds", prop_q, Duration::from_secs(600)),
        ("zero lemma certificates", zero_lemma, Duration::MAX),
        ("heights", heights, Duration::MAX),
        ("perturbation inequality", prop_u, Duration::MAX),
        ("resultant", resultants, Duration::MAX),
        ("proof audit", proof_audit, Duration::from_secs(120)),
        ("end to end", end_to_end, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| ensure(elapsed <= *limit, format!("took {elapsed:.1?}, limit {limit:?}")));
        match outcome {
            Ok(()) => println!("criterion {:>2} {name}: PASS ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
