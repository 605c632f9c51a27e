use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Map, Value};
use transcert::bounds::{audit_chain, theorem_bound, verify_measure_capped, TheoremParams, Verdict};
use transcert::interpolation::{delta_normalizer, lem_a_check, prop_q_check, AuxFunction, AuxParams};
use transcert::numberfield::FieldSpec;
use transcert::polysys::{family_f, poly_from_json, zero_lemma_check, ZeroLemmaMode, ZeroLemmaStatus, ZERO_LEMMA_BUDGET};
use transcert::resultant::{macaulay_resultant, ResultantOutcome};
use transcert::scalar::parse_rational;
use transcert::{AlgebraicNumber, Error, KForm, LogMagnitude, NumberField};

use crate::{Command, Common};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_DEPENDENT: u8 = 3;
pub const EXIT_INCONCLUSIVE: u8 = 4;

pub struct Outcome {
    pub report: Value,
    pub code: u8,
    pub out: Option<PathBuf>,
}

/// Failure before a verdict could be reached.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Dependent => EXIT_DEPENDENT,
            Error::Precision(_) | Error::Indeterminate(_) => EXIT_INCONCLUSIVE,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type Run = Result<(Value, u8), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_INVALID,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn load_field(path: &Path) -> Result<(Arc<NumberField>, Vec<AlgebraicNumber>, Value), Failure> {
    let spec = FieldSpec::from_json(&read(path)?)?;
    let (field, alphas) = spec.build()?;
    Ok((field, alphas, spec.to_value()))
}

fn require_alphas(alphas: &[AlgebraicNumber]) -> Result<(), Failure> {
    if alphas.is_empty() {
        return Err(Failure {
            code: EXIT_INVALID,
            message: "the field file lists no alphas".into(),
        });
    }
    Ok(())
}

fn parse_height(text: &str, prec: u32) -> Result<LogMagnitude, Failure> {
    let h = parse_rational(text).ok_or_else(|| Failure {
        code: EXIT_INVALID,
        message: format!("bad height {text:?}"),
    })?;
    Ok(LogMagnitude::from_rational(&h, prec))
}

fn common_config(c: &Common) -> Value {
    json!({"prec": c.prec, "seed": c.seed, "digit_cap": c.digit_cap})
}

pub fn run(command: Command) -> Outcome {
    let (name, config, out, result) = match command {
        Command::Bound {
            field,
            degree,
            height,
            common,
        } => {
            let mut cfg = common_config(&common);
            cfg["field"] = json!(field.display().to_string());
            cfg["degree"] = json!(degree);
            cfg["height"] = json!(height);
            let r = cmd_bound(&field, degree, &height, &common);
            ("bound", cfg, common.out, r)
        }
        Command::Verify { field, poly, common } => {
            let mut cfg = common_config(&common);
            cfg["field"] = json!(field.display().to_string());
            cfg["poly"] = json!(poly.display().to_string());
            let r = cmd_verify(&field, &poly, &common);
            ("verify", cfg, common.out, r)
        }
        Command::Construct { field, s, t, common } => {
            let mut cfg = common_config(&common);
            cfg["field"] = json!(field.display().to_string());
            cfg["S"] = json!(s);
            cfg["T"] = json!(t);
            let r = cmd_construct(&field, s, t, &common);
            ("construct", cfg, common.out, r)
        }
        Command::Audit {
            field,
            degree,
            height,
            common,
        } => {
            let mut cfg = common_config(&common);
            cfg["field"] = json!(field.display().to_string());
            cfg["degree"] = json!(degree);
            cfg["height"] = json!(height);
            let r = cmd_audit(&field, degree, &height, &common);
            ("audit", cfg, common.out, r)
        }
        Command::Resultant {
            field,
            polys,
            rest,
            common,
        } => {
            let all: Vec<PathBuf> = polys.into_iter().chain(rest).collect();
            let mut cfg = common_config(&common);
            cfg["field"] = json!(field.as_ref().map(|f| f.display().to_string()));
            cfg["polys"] = json!(all.iter().map(|p| p.display().to_string()).collect::<Vec<_>>());
            let r = cmd_resultant(field.as_deref(), &all, &common);
            ("resultant", cfg, common.out, r)
        }
    };
    let mut report = Map::new();
    report.insert("tool".into(), json!({"name": "transcert", "version": env!("CARGO_PKG_VERSION")}));
    report.insert("command".into(), json!(name));
    report.insert("config".into(), config);
    let code = match result {
        Ok((Value::Object(body), code)) => {
            report.extend(body);
            code
        }
        Ok((body, code)) => {
            report.insert("result".into(), body);
            code
        }
        Err(f) => {
            eprintln!("transcert {name}: {}", f.message);
            report.insert("error".into(), json!(f.message));
            f.code
        }
    };
    report.insert("exit_code".into(), json!(code));
    Outcome {
        report: Value::Object(report),
        code,
        out,
    }
}

fn theorem_params(field: &Path, degree: u32, height: &str, common: &Common) -> Result<(TheoremParams, Value), Failure> {
    let (k, alphas, spec) = load_field(field)?;
    require_alphas(&alphas)?;
    let h = parse_height(height, common.prec)?;
    let params = TheoremParams::from_field(&k, &alphas, degree, h)?.with_digit_cap(common.digit_cap);
    Ok((params, spec))
}

fn cmd_bound(field: &Path, degree: u32, height: &str, common: &Common) -> Run {
    let (params, spec) = theorem_params(field, degree, height, common)?;
    let bound = theorem_bound(&params, common.prec)?;
    Ok((
        json!({
            "field_spec": spec,
            "params": params.to_value(),
            "S": params.s(),
            "N": params.n(),
            "d": params.d(),
            "c": params.to_value()["c"],
            "q": params.q().to_string(),
            "log10_bound": bound.log10_string(6),
        }),
        EXIT_OK,
    ))
}

fn cmd_audit(field: &Path, degree: u32, height: &str, common: &Common) -> Run {
    let (params, spec) = theorem_params(field, degree, height, common)?;
    let audit = audit_chain(&params)?;
    let bound = theorem_bound(&params, common.prec)?;
    let mut body = audit.to_value();
    body["field_spec"] = spec;
    body["log10_bound"] = json!(bound.log10_string(6));
    body["failures"] = json!(audit.failures());
    let code = if audit.passed() { EXIT_OK } else { EXIT_VIOLATION };
    Ok((body, code))
}

fn cmd_verify(field: &Path, poly: &Path, common: &Common) -> Run {
    let (k, alphas, spec) = load_field(field)?;
    require_alphas(&alphas)?;
    let p: KForm = poly_from_json(&k, &read(poly)?)?;
    let report = verify_measure_capped(&k, &alphas, &p, common.prec, common.digit_cap)?;
    let mut body = report.to_value();
    body["field_spec"] = spec;
    let code = match report.verdict {
        Verdict::Consistent => EXIT_OK,
        Verdict::Violation => EXIT_VIOLATION,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    };
    Ok((body, code))
}

fn cmd_construct(field: &Path, s: u32, t: u32, common: &Common) -> Run {
    let (k, alphas, spec) = load_field(field)?;
    require_alphas(&alphas)?;
    let nvars = alphas.len();
    let params = AuxParams::new(&k, alphas, s, t)?;
    let norm = delta_normalizer(&params);
    let aux = AuxFunction::new(params)?;
    let family = family_f(&aux, &norm)?;
    let forms: Vec<KForm> = family.iter().map(|m| m.poly.clone()).collect();
    let mode = if nvars == 1 {
        ZeroLemmaMode::Gcd
    } else {
        ZeroLemmaMode::Resultant {
            budget: ZERO_LEMMA_BUDGET,
            seed: common.seed,
        }
    };
    let zl = zero_lemma_check(&k, &forms, t, mode)?;
    let lem_a = lem_a_check(&aux, &norm, common.prec);
    let prop_q = prop_q_check(&aux, &norm, common.prec)?;
    let violation = !lem_a.passed() || (prop_q.in_hypothesis() && !prop_q.passed());
    let code = if violation {
        EXIT_VIOLATION
    } else if matches!(zl.status, ZeroLemmaStatus::Inconclusive(_)) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    Ok((
        json!({
            "field_spec": spec,
            "params": {
                "t": nvars,
                "S": s,
                "T": t,
                "N": aux.params().n(),
                "c": transcert::scalar::format_rational(&aux.params().c().to_rational()),
                "q": aux.params().q().to_string(),
            },
            "family_size": forms.len(),
            "delta": norm.delta.to_strings(k.degree()),
            "zero_lemma": zl.to_value(),
            "lem_a": lem_a.to_value(),
            "prop_q": prop_q.to_value(),
        }),
        code,
    ))
}

fn cmd_resultant(field: Option<&Path>, polys: &[PathBuf], common: &Common) -> Run {
    let k = match field {
        Some(f) => load_field(f)?.0,
        None => NumberField::rationals(),
    };
    if polys.is_empty() {
        return Err(Failure {
            code: EXIT_INVALID,
            message: "no polynomial files given".into(),
        });
    }
    let forms = polys
        .iter()
        .map(|p| Ok(poly_from_json(&k, &read(p)?)?))
        .collect::<Result<Vec<KForm>, Failure>>()?;
    let d = k.degree();
    let show = |a: &AlgebraicNumber| match a.as_rational() {
        Some(q) => json!(transcert::scalar::format_rational(&q)),
        None => json!(a.to_strings(d)),
    };
    Ok(match macaulay_resultant(&forms, common.seed)? {
        ResultantOutcome::Value { value, retries, change } => (
            json!({
                "degrees": forms.iter().map(KForm::degree).collect::<Vec<_>>(),
                "value": show(&value),
                "retries": retries,
                "change": change,
            }),
            EXIT_OK,
        ),
        ResultantOutcome::Indeterminate { retries } => (
            json!({
                "degrees": forms.iter().map(KForm::degree).collect::<Vec<_>>(),
                "value": Value::Null,
                "retries": retries,
                "reason": "the extraneous minor vanished under every coordinate change",
            }),
            EXIT_INCONCLUSIVE,
        ),
    })
}
