//! JSON encoding of scalars, polynomials, series and operators.
//!
//! ```text
//! exact scalar   {"re": "p/q", "im": "p/q"}
//! float scalar   {"re": number, "im": number}
//! polynomial     {"coeffs": [scalar, ...]}            ascending degree
//! series         {"coeffs": [scalar, ...], "order": K}
//! operator       {"kind": "T"|"C"|"D"|"conv"|"L"|"psiT", "lambda": scalar, "b": scalar,
//!                 "phi": series?, "psi": series?}
//! ```
//!
//! Decoding targets one backend; a value written in the other backend is a
//! [`Error::BackendMismatch`].

use rug::{Float, Rational};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::operators::{OperatorKind, OperatorSpec};
use crate::poly::Poly;
use crate::scalar::{Approx, Backend, Coeff, Exact};
use crate::series::Series;

/// Scalars with a JSON form.
pub trait JsonScalar: Coeff {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value, ctx: Self::Ctx) -> Result<Self>;
}

fn json_err(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

fn parts(v: &Value) -> Result<(&Value, Option<&Value>)> {
    let obj = v.as_object().ok_or_else(|| json_err(format!("scalar must be an object, got {v}")))?;
    let re = obj.get("re").ok_or_else(|| json_err("scalar is missing \"re\""))?;
    Ok((re, obj.get("im")))
}

fn mismatch(expected: Backend, found: Backend) -> Error {
    Error::BackendMismatch {
        left: expected,
        right: found,
    }
}

fn rational_part(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => s
            .trim()
            .parse::<Rational>()
            .map_err(|_| json_err(format!("not a rational: {s:?}"))),
        Value::Number(_) => Err(mismatch(Backend::Exact, Backend::float())),
        other => Err(json_err(format!("expected \"p/q\" string, got {other}"))),
    }
}

fn float_part(v: &Value, prec: u32) -> Result<Float> {
    match v {
        Value::Number(n) => {
            let x = n.as_f64().ok_or_else(|| json_err("number out of range"))?;
            Ok(Float::with_val(prec, x))
        }
        Value::String(_) => Err(mismatch(Backend::Float { precision: prec }, Backend::Exact)),
        other => Err(json_err(format!("expected number, got {other}"))),
    }
}

impl JsonScalar for Exact {
    fn to_json(&self) -> Value {
        json!({ "re": self.re().to_string(), "im": self.im().to_string() })
    }

    fn from_json(v: &Value, _: ()) -> Result<Self> {
        let (re, im) = parts(v)?;
        let im = match im {
            Some(x) => rational_part(x)?,
            None => Rational::new(),
        };
        Ok(Exact::new(rational_part(re)?, im))
    }
}

impl JsonScalar for Approx {
    fn to_json(&self) -> Value {
        let (re, im) = self.to_c64();
        json!({ "re": re, "im": im })
    }

    fn from_json(v: &Value, prec: u32) -> Result<Self> {
        let (re, im) = parts(v)?;
        let im = match im {
            Some(x) => float_part(x, prec)?,
            None => Float::new(prec),
        };
        Ok(Approx::new(float_part(re, prec)?, im))
    }
}

impl Serialize for Exact {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let mut st = s.serialize_struct("Scalar", 2)?;
        st.serialize_field("re", &self.re().to_string())?;
        st.serialize_field("im", &self.im().to_string())?;
        st.end()
    }
}

impl Serialize for Approx {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let (re, im) = self.to_c64();
        let mut st = s.serialize_struct("Scalar", 2)?;
        st.serialize_field("re", &re)?;
        st.serialize_field("im", &im)?;
        st.end()
    }
}

impl<S: Coeff + Serialize> Serialize for Poly<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let mut st = s.serialize_struct("Poly", 1)?;
        st.serialize_field("coeffs", self.coeffs())?;
        st.end()
    }
}

impl<S: Coeff + Serialize> Serialize for Series<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let mut st = s.serialize_struct("Series", 2)?;
        st.serialize_field("coeffs", self.coeffs())?;
        st.serialize_field("order", &self.order())?;
        st.end()
    }
}

impl<S: Coeff + Serialize> Serialize for OperatorSpec<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let mut st = s.serialize_struct("OperatorSpec", 4)?;
        st.serialize_field("kind", self.kind().tag())?;
        st.serialize_field("lambda", self.lambda())?;
        st.serialize_field("b", self.b())?;
        match self.kind() {
            OperatorKind::Conv(phi) | OperatorKind::L(phi) => st.serialize_field("phi", phi)?,
            OperatorKind::PsiOfT(psi) => st.serialize_field("psi", psi)?,
            _ => {}
        }
        st.end()
    }
}

fn coeff_list<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<Vec<S>> {
    let arr = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| json_err("expected {\"coeffs\": [...]}"))?;
    arr.iter().map(|c| S::from_json(c, ctx)).collect()
}

pub fn poly_from_json<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<Poly<S>> {
    Ok(Poly::new(coeff_list(v, ctx)?))
}

/// A missing `"order"` defaults to the index of the last listed coefficient.
pub fn series_from_json<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<Series<S>> {
    let coeffs: Vec<S> = coeff_list(v, ctx)?;
    let order = match v.get("order") {
        Some(o) => o
            .as_u64()
            .ok_or_else(|| json_err("\"order\" must be a non-negative integer"))? as usize,
        None => coeffs.len().saturating_sub(1),
    };
    Ok(Series::new(coeffs, order, ctx))
}

pub fn operator_from_json<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<OperatorSpec<S>> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| json_err("operator is missing \"kind\""))?;
    let scalar = |key: &str, default: i64| -> Result<S> {
        match v.get(key) {
            Some(x) => S::from_json(x, ctx),
            None => Ok(S::from_integer(&default.into(), ctx)),
        }
    };
    let series = |key: &str| -> Result<Series<S>> {
        let x = v
            .get(key)
            .ok_or_else(|| json_err(format!("operator \"{kind}\" needs \"{key}\"")))?;
        series_from_json(x, ctx)
    };
    let (lambda, b) = (scalar("lambda", 1)?, scalar("b", 0)?);
    let kind = match kind {
        "D" => OperatorKind::D,
        "C" => OperatorKind::C,
        "T" => OperatorKind::T,
        "conv" => OperatorKind::Conv(series("phi")?),
        "L" => OperatorKind::L(series("phi")?),
        "psiT" => OperatorKind::PsiOfT(series("psi")?),
        other => return Err(json_err(format!("unknown operator kind {other:?}"))),
    };
    Ok(OperatorSpec::new(kind, lambda, b))
}
