use serde::Serialize;
use serde_json::{json, Value};

use hyperop_core::codec::JsonScalar;
use hyperop_core::dynamics::{
    coefficient_bound_check, criterion_check, decay_envelope_check, synthesize_hc_vector, truncated_exponential,
};
use hyperop_core::identities::{run_identities, Family, IdentityConfig};
use hyperop_core::inverses::{
    apply_psi_lambda_g, f_n, right_inverse_psi_t, s_mn, s_psi_lambda_g, s_psi_power_coeffs, RightInverse,
};
use hyperop_core::operators::{power_closed_form, OperatorSpec};
use hyperop_core::poly::{Disk, Poly};
use hyperop_core::real::Real;
use hyperop_core::report::{OrbitReport, OrbitStep, Verdict};
use hyperop_core::scalar::{Approx, Coeff, Exact};
use hyperop_core::text::parse_scalar;

use crate::args::{
    ApplyArgs, BackendArg, BoundsArgs, Cli, Command, CriterionArgs, DecayArgs, FamilyArg, IdentityArgs, InverseArgs,
    InverseKind, OrbitArgs, SynthesizeArgs,
};
use crate::inputs::{disk, operator, poly, scalar, scalar_or, series, targets};
use crate::CliError;

/// Relative residual accepted for float round trips.
const FLOAT_ROUND_TRIP: f64 = 1e-9;

/// One CSV row: row keys, then n, norm_upper, norm_boundary, envelope, pass.
pub struct Row {
    pub keys: Vec<String>,
    pub n: usize,
    pub norm_upper: String,
    pub norm_boundary: String,
    pub envelope: String,
    pub pass: String,
}

pub struct Table {
    pub keys: Vec<&'static str>,
    pub rows: Vec<Row>,
}

pub struct Outcome {
    pub report: Value,
    pub verdict: Verdict,
    pub table: Option<Table>,
}

trait Scalar: JsonScalar + Serialize + std::fmt::Display {}
impl<S: JsonScalar + Serialize + std::fmt::Display> Scalar for S {}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn flag(b: bool) -> String {
    b.to_string()
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match cli.backend {
        BackendArg::Exact => run::<Exact>(&cli.command, (), cli.seed),
        BackendArg::Float => {
            if !(2..=1 << 16).contains(&cli.precision) {
                return Err(CliError::input(format!("--precision must be in 2..=65536, got {}", cli.precision)));
            }
            run::<Approx>(&cli.command, cli.precision, cli.seed)
        }
    }
}

fn run<S: Scalar>(cmd: &Command, ctx: S::Ctx, seed: u64) -> Result<Outcome, CliError> {
    match cmd {
        Command::Orbit(a) => orbit::<S>(a, ctx),
        Command::Apply(a) => apply::<S>(a, ctx),
        Command::Inverse(a) => inverse::<S>(a, ctx),
        Command::Criterion(a) => criterion::<S>(a, ctx),
        Command::Synthesize(a) => synthesize::<S>(a, ctx),
        Command::Decay(a) => decay::<S>(a, ctx),
        Command::Bounds(a) => bounds::<S>(a, ctx),
        Command::VerifyIdentities(a) => identities::<S>(a, ctx, seed),
    }
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::input(format!("--{name} must be positive, got {x}")))
    }
}

fn orbit_rows(orbit: &OrbitReport, pass: impl Fn(&OrbitStep) -> String) -> Vec<Row> {
    orbit
        .steps()
        .iter()
        .map(|s| Row {
            keys: Vec::new(),
            n: s.n,
            norm_upper: s.norm_upper.to_string(),
            norm_boundary: s.norm_boundary.to_string(),
            envelope: orbit.envelope_at(s.n).map(Real::to_string).unwrap_or_default(),
            pass: pass(s),
        })
        .collect()
}

fn orbit<S: Scalar>(a: &OrbitArgs, ctx: S::Ctx) -> Result<Outcome, CliError> {
    let op = operator::<S>(&a.op, ctx)?;
    let p = poly::<S>(&a.poly, ctx)?;
    let disk = disk(a.radius)?;
    let rep = match a.samples {
        None => op.orbit(&p, a.n, &disk)?,
        Some(0) => return Err(CliError::input("--samples must be positive")),
        Some(m) => {
            let mut steps = Vec::with_capacity(a.n + 1);
            let mut q = p.clone();
            for n in 0..=a.n {
                steps.push(OrbitStep::measure(n, &q, &disk, m)?);
                if n < a.n {
                    q = op.apply(&q);
                }
            }
            OrbitReport::new(disk, steps)
        }
    };
    let rows = orbit_rows(&rep, |_| String::new());
    Ok(Outcome {
        report: json!({ "operator": op, "input": p, "orbit": rep }),
        verdict: Verdict::Pass,
        table: Some(Table { keys: Vec::new(), rows }),
    })
}

fn apply<S: Scalar>(a: &ApplyArgs, ctx: S::Ctx) -> Result<Outcome, CliError> {
    let op = operator::<S>(&a.op, ctx)?;
    let p = poly::<S>(&a.poly, ctx)?;
    let q = op.power(a.n, &p);
    Ok(Outcome {
        report: json!({ "operator": op, "input": p, "n": a.n, "output": q, "text": q.to_string() }),
        verdict: Verdict::Pass,
        table: None,
    })
}

/// Exact equality in the exact backend, a relative majorant residual otherwise.
fn round_trip<S: Coeff>(back: &Poly<S>, p: &Poly<S>) -> (bool, Real) {
    let unit = Disk::unit();
    let residual = (back - p).norm_upper(&unit);
    let ok = match p.ctx().or(back.ctx()) {
        Some(ctx) if !S::backend_of(ctx).is_exact() => {
            let scale = p.norm_upper(&unit).to_f64().max(f64::MIN_POSITIVE);
            residual.to_f64() <= FLOAT_ROUND_TRIP * scale
        }
        _ => back == p,
    };
    (ok, residual)
}

fn inverse<S: Scalar>(a: &InverseArgs, ctx: S::Ctx) -> Result<Outcome, CliError> {
    fn need<'a>(kind: InverseKind, flag: &str, v: &'a Option<String>) -> Result<&'a str, CliError> {
        v.as_deref()
            .ok_or_else(|| CliError::input(format!("--kind {kind:?} needs --{flag}").to_lowercase()))
    }
    if a.kind == InverseKind::Expansion {
        let psi = series::<S>("psi", need(a.kind, "psi", &a.op.psi)?, ctx)?;
        let e = s_psi_power_coeffs(&psi, a.m, a.n)?;
        return Ok(Outcome {
            report: json!({ "kind": "expansion", "m": a.m, "n": a.n, "psi": psi, "expansion": e }),
            verdict: Verdict::Pass,
            table: None,
        });
    }
    let p = poly::<S>(&a.poly, ctx)?;
    let lambda = || scalar_or::<S>("lambda", a.op.lambda.as_deref(), 1, ctx);
    let b = || scalar_or::<S>("b", a.op.b.as_deref(), 0, ctx);
    let (name, s, back) = match a.kind {
        InverseKind::Auto => {
            let op = operator::<S>(&a.op, ctx)?;
            let inv = RightInverse::for_operator(&op)?;
            let s = inv.apply(a.n, &p)?;
            let back = op.power(a.n, &s);
            (inv.name(), s, back)
        }
        InverseKind::Smn => {
            let (l, b) = (lambda()?, b()?);
            let s = s_mn(a.m, a.n, &l, &b, &p)?;
            let back = power_closed_form(&l, &b, a.m, a.n, &s)?;
            ("smn", s, back)
        }
        InverseKind::Spsi => {
            let psi = series::<S>("psi", need(a.kind, "psi", &a.op.psi)?, ctx)?;
            let mu = scalar_or::<S>("mu", a.mu.as_deref(), 1, ctx)?;
            let g = operator::<S>(&a.op, ctx)?;
            let s = s_psi_lambda_g(&psi, &mu, &g, &p)?;
            let back = apply_psi_lambda_g(&psi, &mu, &g, &s)?;
            ("spsi", s, back)
        }
        InverseKind::Fn => {
            let phi = series::<S>("phi", need(a.kind, "phi", &a.op.phi)?, ctx)?;
            let (l, b) = (lambda()?, b()?);
            let s = f_n(&phi, &l, &b, a.n, &p)?;
            let back = OperatorSpec::l(l, b, phi).power(a.n, &s);
            ("f_n", s, back)
        }
        InverseKind::Psit => {
            let psi = series::<S>("psi", need(a.kind, "psi", &a.op.psi)?, ctx)?;
            let (l, b) = (lambda()?, b()?);
            let s = right_inverse_psi_t(&psi, &l, &b, a.n, &p)?;
            let back = OperatorSpec::psi_of_t(psi, l, b).power(a.n, &s);
            ("psiT", s, back)
        }
        InverseKind::Expansion => unreachable!(),
    };
    let (ok, residual) = round_trip(&back, &p);
    Ok(Outcome {
        report: json!({
            "kind": name,
            "m": a.m,
            "n": a.n,
            "input": p,
            "inverse": s,
            "text": s.to_string(),
            "round_trip": ok,
            "residual": residual,
        }),
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        table: None,
    })
}

fn criterion<S: Scalar>(a: &CriterionArgs, ctx: S::Ctx) -> Result<Outcome, CliError> {
    let op = operator::<S>(&a.op, ctx)?;
    let targets = targets::<S>(&a.poly, a.deg_max, ctx)?;
    let eps = positive("eps", a.eps)?;
    let rep = criterion_check(&op, &targets, &disk(a.radius)?, eps, a.n_max)?;
    if let Some(want) = &a.inverse {
        if !want.eq_ignore_ascii_case(rep.inverse) {
            return Err(CliError::input(format!(
                "--inverse {want} does not match the operator's family {}",
                rep.inverse
            )));
        }
    }
    let mut rows = Vec::new();
    for (k, t) in rep.condition_b.per_target.iter().enumerate() {
        for (i, x) in t.norms.iter().enumerate() {
            rows.push(Row {
                keys: vec![k.to_string()],
                n: i + 1,
                norm_upper: x.to_string(),
                norm_boundary: String::new(),
                envelope: String::new(),
                pass: flag(x.lt_f64(eps)),
            });
        }
    }
    Ok(Outcome {
        verdict: rep.verdict,
        report: json!({ "operator": op, "targets": targets, "criterion": rep }),
        table: Some(Table { keys: vec!["target"], rows }),
    })
}

fn synthesize<S: Scalar>(a: &SynthesizeArgs, ctx: S::Ctx) -> Result<Outcome, CliError> {
    let op = operator::<S>(&a.op, ctx)?;
    let targets = targets::<S>(&a.poly, a.deg_max, ctx)?;
    let eps = positive("eps", a.eps)?;
    let plan = synthesize_hc_vector(&op, &targets, &disk(a.radius)?, eps, a.start)?;
    let rows = plan
        .indices
        .iter()
        .zip(&plan.visit_errors)
        .enumerate()
        .map(|(k, (&n, e))| Row {
            keys: vec![k.to_string()],
            n,
            norm_upper: e.to_string(),
            norm_boundary: String::new(),
            envelope: String::new(),
            pass: flag(e.lt_f64(eps)),
        })
        .collect();
    Ok(Outcome {
        verdict: plan.verdict,
        report: json!({ "operator": op, "plan": plan, "text": plan.vector.to_string() }),
        table: Some(Table { keys: vec!["target"], rows }),
    })
}

fn decay<S: Scalar>(a: &DecayArgs, ctx: S::Ctx) -> Result<Outcome, CliError> {
    let psi = series::<S>("psi", &a.psi, ctx)?;
    let lambda = scalar::<S>("lambda", &a.lambda, ctx)?;
    let b = scalar::<S>("b", &a.b, ctx)?;
    let f = match a.exp_order {
        Some(k) => truncated_exponential(k, ctx),
        None => poly::<S>(&a.poly, ctx)?,
    };
    let rep = decay_envelope_check(&psi, &lambda, &b, &f, &disk(a.radius)?, (a.n_min, a.n_max), a.exp_order)?;
    let rows = orbit_rows(&rep.orbit, |s| {
        rep.orbit
            .envelope_at(s.n)
            .map(|e| flag(s.norm_boundary.total_cmp(e).is_le()))
            .unwrap_or_default()
    });
    Ok(Outcome {
        verdict: rep.verdict,
        report: json!({ "psi": psi, "lambda": lambda, "b": b, "input": f, "decay": rep }),
        table: Some(Table { keys: Vec::new(), rows }),
    })
}

fn bounds<S: Scalar>(a: &BoundsArgs, ctx: S::Ctx) -> Result<Outcome, CliError> {
    let psi = series::<S>("psi", &a.psi, ctx)?;
    let lambda = a.lambda.as_deref().map(|t| scalar::<S>("lambda", t, ctx)).transpose()?;
    let rep = coefficient_bound_check(&psi, a.d, (a.n_min, a.n_max), lambda.as_ref())?;
    Ok(Outcome {
        verdict: rep.verdict,
        report: json!({ "psi": psi, "bounds": rep }),
        table: None,
    })
}

fn family(f: FamilyArg) -> Family {
    match f {
        FamilyArg::SmnRoundTrip => Family::SmnRoundTrip,
        FamilyArg::FnRoundTrip => Family::FnRoundTrip,
        FamilyArg::PsiTRoundTrip => Family::PsiTRoundTrip,
        FamilyArg::ClosedFormVsIteration => Family::ClosedFormVsIteration,
        FamilyArg::Commutation => Family::Commutation,
        FamilyArg::KernelDelta => Family::KernelDelta,
        FamilyArg::DegreeSmn => Family::DegreeSmn,
        FamilyArg::SpsiRoundTrip => Family::SpsiRoundTrip,
    }
}

fn identities<S: Scalar>(a: &IdentityArgs, ctx: S::Ctx, seed: u64) -> Result<Outcome, CliError> {
    let parse = |flag: &str, v: &[String]| -> Result<Vec<Exact>, CliError> {
        v.iter()
            .map(|t| parse_scalar(t).map_err(|e| CliError::input(format!("--{flag}: {e}"))))
            .collect()
    };
    let mut cfg = IdentityConfig::for_grid(parse("lambda", &a.lambda)?, parse("b", &a.b)?, seed);
    cfg.ms = a.m.clone();
    cfg.deg_max = a.deg_max;
    cfg.n_max = a.n_max;
    cfg.samples = a.samples;
    let families: Vec<Family> = if a.family.is_empty() {
        Family::ALL.to_vec()
    } else {
        a.family.iter().copied().map(family).collect()
    };
    let rep = run_identities::<S>(&cfg, ctx, &families)?;
    Ok(Outcome {
        verdict: rep.verdict,
        report: to_value(&rep),
        table: None,
    })
}
