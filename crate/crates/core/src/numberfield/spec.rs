use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::{AlgebraicNumber, NumberField};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};

/// Field description as read from a JSON field file:
/// `{"min_poly": [..], "integral_basis": [[..]], "alphas": [[..]]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSpec {
    pub min_poly: Vec<BigInt>,
    pub integral_basis: Option<Vec<Vec<BigRational>>>,
    pub alphas: Vec<Vec<BigRational>>,
}

fn integer(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Format(format!("coefficient {n} is not an integer"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("coefficient {s:?} is not an integer"))),
        other => Err(Error::Format(format!("expected an integer, found {other}"))),
    }
}

pub(crate) fn rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| Error::Format(format!("bad rational {s:?}"))),
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| Error::Format(format!("number {n} is not an integer; write rationals as \"p/q\""))),
        other => Err(Error::Format(format!("expected a rational, found {other}"))),
    }
}

fn vectors(v: &Value, what: &str) -> Result<Vec<Vec<BigRational>>> {
    v.as_array()
        .ok_or_else(|| Error::Format(format!("{what} must be a list of coordinate lists")))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Format(format!("{what} entries must be lists")))?
                .iter()
                .map(rational)
                .collect()
        })
        .collect()
}

impl FieldSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let min_poly = v
            .get("min_poly")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Format("missing \"min_poly\" list".into()))?
            .iter()
            .map(integer)
            .collect::<Result<_>>()?;
        let integral_basis = match v.get("integral_basis") {
            None | Some(Value::Null) => None,
            Some(b) => Some(vectors(b, "integral_basis")?),
        };
        let alphas = match v.get("alphas") {
            None | Some(Value::Null) => Vec::new(),
            Some(a) => vectors(a, "alphas")?,
        };
        Ok(Self {
            min_poly,
            integral_basis,
            alphas,
        })
    }

    pub fn to_value(&self) -> Value {
        let vecs = |v: &Vec<Vec<BigRational>>| -> Value {
            v.iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>()).collect()
        };
        json!({
            "min_poly": self.min_poly.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "integral_basis": self.integral_basis.as_ref().map(vecs),
            "alphas": vecs(&self.alphas),
        })
    }

    /// Constructs the field and the listed elements.
    pub fn build(&self) -> Result<(Arc<NumberField>, Vec<AlgebraicNumber>)> {
        let field = NumberField::new(self.min_poly.clone(), self.integral_basis.clone())?;
        let alphas = self
            .alphas
            .iter()
            .map(|c| field.element(c.clone()))
            .collect::<Result<_>>()?;
        Ok((field, alphas))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn parse_and_build() {
        let s = FieldSpec::from_json(
            r#"{"min_poly": [-5, 0, 1], "integral_basis": [["1","0"],["1/2","1/2"]], "alphas": [["1"], ["1/2","1/2"]]}"#,
        )
        .unwrap();
        assert_eq!(s.alphas[1], vec![rat(1, 2), rat(1, 2)]);
        let (k, a) = s.build().unwrap();
        assert_eq!(k.degree(), 2);
        assert!(k.is_integral(&a[1]));
        let round = FieldSpec::from_value(&s.to_value()).unwrap();
        assert_eq!(round, s);
    }

    #[test]
    fn malformed() {
        assert!(FieldSpec::from_json("{}").is_err());
        assert!(FieldSpec::from_json(r#"{"min_poly": [1.5, 1]}"#).is_err());
        assert!(FieldSpec::from_json(r#"{"min_poly": [-2, 0, 1], "alphas": [["x"]]}"#).is_err());
    }
}
