//! Term-list JSON for polynomials. Rationals are canonical `"p/q"` strings
//! so emitted files are byte-stable.

use serde_json::{json, Map, Value};

use super::{parse_rational, CRational, HoloPoly, RealPoly, Term};
use crate::error::{Error, Result};

fn shape(what: impl Into<String>) -> Error {
    Error::Shape { what: what.into() }
}

pub fn rational_str(c: &num_rational::BigRational) -> String {
    c.to_string()
}

pub fn crational_json(c: &CRational) -> Value {
    json!({ "re": c.re.to_string(), "im": c.im.to_string() })
}

fn parse_coeff(obj: &Map<String, Value>) -> Result<CRational> {
    let get = |k: &str| -> Result<String> {
        match obj.get(k) {
            None => Ok("0".into()),
            Some(Value::String(s)) => Ok(s.clone()),
            Some(Value::Number(x)) => Ok(x.to_string()),
            Some(_) => Err(shape(format!("string rational in field '{k}'"))),
        }
    };
    CRational::parse(&get("re")?, &get("im")?)
}

fn parse_exps(v: Option<&Value>, n: usize, what: &str) -> Result<Vec<u16>> {
    let arr = v.and_then(Value::as_array).ok_or_else(|| shape(format!("array field '{what}'")))?;
    if arr.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: arr.len() });
    }
    arr.iter()
        .map(|x| x.as_u64().and_then(|k| u16::try_from(k).ok()).ok_or_else(|| shape(format!("small non-negative integers in '{what}'"))))
        .collect()
}

pub fn real_poly_to_json(p: &RealPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|t| {
                json!({
                    "alpha": t.alpha,
                    "beta": t.beta,
                    "k": t.k,
                    "re": t.coeff.re.to_string(),
                    "im": t.coeff.im.to_string(),
                })
            })
            .collect(),
    )
}

pub fn real_poly_from_json(n: usize, v: &Value) -> Result<RealPoly> {
    let arr = v.as_array().ok_or_else(|| shape("a term list"))?;
    let mut terms = Vec::with_capacity(arr.len());
    for item in arr {
        let obj = item.as_object().ok_or_else(|| shape("term objects"))?;
        let k = match obj.get("k") {
            None => 0,
            Some(x) => x.as_u64().and_then(|k| u16::try_from(k).ok()).ok_or_else(|| shape("integer 'k'"))?,
        };
        terms.push(Term {
            alpha: parse_exps(obj.get("alpha"), n, "alpha")?,
            beta: parse_exps(obj.get("beta"), n, "beta")?,
            k,
            coeff: parse_coeff(obj)?,
        });
    }
    RealPoly::from_terms(n, terms)
}

pub fn holo_poly_to_json(p: &HoloPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(alpha, m, c)| {
                json!({ "alpha": alpha, "m": m, "re": c.re.to_string(), "im": c.im.to_string() })
            })
            .collect(),
    )
}

pub fn holo_poly_from_json(n: usize, v: &Value) -> Result<HoloPoly> {
    let arr = v.as_array().ok_or_else(|| shape("a term list"))?;
    let mut terms = Vec::with_capacity(arr.len());
    for item in arr {
        let obj = item.as_object().ok_or_else(|| shape("term objects"))?;
        let m = match obj.get("m") {
            None => 0,
            Some(x) => x.as_u64().and_then(|k| u16::try_from(k).ok()).ok_or_else(|| shape("integer 'm'"))?,
        };
        terms.push((parse_exps(obj.get("alpha"), n, "alpha")?, m, parse_coeff(obj)?));
    }
    HoloPoly::from_terms(n, terms)
}

/// Reads a polynomial input file: `{"n": .., "l": .., "terms": [...]}`.
/// Returns `(n, l, P)`.
pub fn read_input(v: &Value) -> Result<(usize, usize, RealPoly)> {
    let obj = v.as_object().ok_or_else(|| shape("a JSON object with n, l, terms"))?;
    let n = obj.get("n").and_then(Value::as_u64).ok_or_else(|| shape("integer field 'n'"))? as usize;
    let l = obj.get("l").and_then(Value::as_u64).ok_or_else(|| shape("integer field 'l'"))? as usize;
    let terms = obj.get("terms").ok_or_else(|| shape("field 'terms'"))?;
    Ok((n, l, real_poly_from_json(n, terms)?))
}

pub fn parse_rational_value(v: &Value) -> Result<num_rational::BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(x) => parse_rational(&x.to_string()),
        _ => Err(shape("a rational")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut p = RealPoly::abs_sq(2, 0);
        p.add_real_pair(&[2, 0], &[0, 1], 1, &CRational::from_ratios(1, 3, -2, 5));
        let v = real_poly_to_json(&p);
        assert_eq!(real_poly_from_json(2, &v).unwrap(), p);
    }

    #[test]
    fn non_real_rejected_with_key() {
        let v = json!([{ "alpha": [1, 0], "beta": [0, 0], "k": 0, "re": "1", "im": "0" }]);
        match real_poly_from_json(2, &v) {
            Err(Error::NotReal { key }) => assert!(key.contains("alpha=[1, 0]")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
