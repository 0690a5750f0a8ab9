//! Flag values turned into backend values.

use serde_json::Value;

use hyperop_core::codec::{operator_from_json, poly_from_json, JsonScalar};
use hyperop_core::error::Error;
use hyperop_core::operators::OperatorSpec;
use hyperop_core::poly::{Disk, Poly};
use hyperop_core::scalar::{Coeff, Exact};
use hyperop_core::series::Series;
use hyperop_core::text::{parse_poly, parse_scalar};

use crate::args::{OpArgs, PolyArgs};
use crate::CliError;

fn read_json(arg: &str) -> Result<Value, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{path}: {e}")))?,
        None => arg.to_owned(),
    };
    serde_json::from_str(&text).map_err(|e| CliError::from(Error::Json(e.to_string())))
}

fn context(flag: &str, e: Error) -> CliError {
    CliError::input(format!("--{flag}: {e}"))
}

pub fn scalar<S: Coeff>(flag: &str, text: &str, ctx: S::Ctx) -> Result<S, CliError> {
    let x = parse_scalar(text).map_err(|e| context(flag, e))?;
    Ok(S::from_exact(&x, ctx))
}

pub fn scalar_or<S: Coeff>(flag: &str, text: Option<&str>, default: i64, ctx: S::Ctx) -> Result<S, CliError> {
    match text {
        Some(t) => scalar(flag, t, ctx),
        None => Ok(S::from_exact(&Exact::real(default), ctx)),
    }
}

pub fn lift<S: Coeff>(p: &Poly<Exact>, ctx: S::Ctx) -> Poly<S> {
    p.map(|c| S::from_exact(c, ctx))
}

pub fn poly_text<S: Coeff>(flag: &str, text: &str, ctx: S::Ctx) -> Result<Poly<S>, CliError> {
    let p = parse_poly(text).map_err(|e| context(flag, e))?;
    Ok(lift(&p, ctx))
}

/// A polynomial series; its order is its degree.
pub fn series<S: Coeff>(flag: &str, text: &str, ctx: S::Ctx) -> Result<Series<S>, CliError> {
    Ok(Series::exact_poly(&poly_text(flag, text, ctx)?, ctx))
}

pub fn poly<S: JsonScalar>(args: &PolyArgs, ctx: S::Ctx) -> Result<Poly<S>, CliError> {
    match (&args.poly, &args.poly_json) {
        (Some(text), _) => poly_text("poly", text, ctx),
        (None, Some(json)) => Ok(poly_from_json(&read_json(json)?, ctx)?),
        (None, None) => Err(CliError::input("--poly or --poly-json is required")),
    }
}

pub fn operator<S: JsonScalar>(args: &OpArgs, ctx: S::Ctx) -> Result<OperatorSpec<S>, CliError> {
    if let Some(json) = &args.op_json {
        return Ok(operator_from_json(&read_json(json)?, ctx)?);
    }
    let lambda = scalar_or("lambda", args.lambda.as_deref(), 1, ctx)?;
    let b = scalar_or("b", args.b.as_deref(), 0, ctx)?;
    let need = |flag: &str, v: &Option<String>| -> Result<Series<S>, CliError> {
        let text = v
            .as_deref()
            .ok_or_else(|| CliError::input(format!("--op {} needs --{flag}", args.op)))?;
        series(flag, text, ctx)
    };
    Ok(match args.op.to_ascii_lowercase().as_str() {
        "d" => OperatorSpec::d(ctx),
        "c" => OperatorSpec::c(lambda, b),
        "t" => OperatorSpec::t(lambda, b),
        "conv" => OperatorSpec::conv(need("phi", &args.phi)?),
        "l" => OperatorSpec::l(lambda, b, need("phi", &args.phi)?),
        "psit" => OperatorSpec::psi_of_t(need("psi", &args.psi)?, lambda, b),
        other => return Err(CliError::input(format!("unknown operator {other:?}; expected D, C, T, conv, L or psiT"))),
    })
}

pub fn disk(radius: f64) -> Result<Disk, CliError> {
    Ok(Disk::new(radius)?)
}

pub fn targets<S: Coeff>(texts: &[String], deg_max: usize, ctx: S::Ctx) -> Result<Vec<Poly<S>>, CliError> {
    if texts.is_empty() {
        return Ok(hyperop_core::dynamics::monomials(deg_max, ctx));
    }
    texts.iter().map(|t| poly_text("poly", t, ctx)).collect()
}
