//! Orbit dynamics: the three criterion conditions, vanishing of right-inverse
//! images, synthesis of approximate hypercyclic vectors, decay below the
//! factorial envelope when `|λ| < 1`, and coefficient bounds.
//!
//! Norm sequences are computed in whichever backend the inputs use. Checks
//! that are equalities (forward orbits reaching zero, `T^n S_n p = p`) are
//! always run on the exact values the inputs denote.

use rug::float::Round;
use rug::ops::MulAssignRound;
use rug::Float;
use serde::Serialize;

use crate::combinatorics::{binom, factorial};
use crate::error::{Error, Result};
use crate::inverses::{power_expansion, root_data, RightInverse};
use crate::operators::{OperatorKind, OperatorSpec};
use crate::poly::{default_samples, Degree, Disk, Poly};
use crate::real::Real;
use crate::report::{EnvelopePoint, OrbitReport, OrbitStep, Verdict};
use crate::scalar::{Coeff, Exact, MEASURE_PRECISION};
use crate::series::Series;

/// Consecutive indices below ε needed to certify convergence.
pub const CONSECUTIVE: usize = 5;

/// Largest index the synthesizer may use.
pub const INDEX_BUDGET: usize = 1 << 14;

/// Slack for comparing bounds computed in double precision.
const BOUND_SLACK: f64 = 1e-12;

/// Tolerance on bounds that depend on numerically computed roots.
pub const ROOT_TOLERANCE: f64 = 1e-9;

/// `1, z, …, z^d`.
pub fn monomials<S: Coeff>(d: usize, ctx: S::Ctx) -> Vec<Poly<S>> {
    (0..=d).map(|k| Poly::monomial(S::one(ctx), k)).collect()
}

/// `Σ_{k ≤ order} z^k / k!`.
pub fn truncated_exponential<S: Coeff>(order: usize, ctx: S::Ctx) -> Poly<S> {
    let coeffs = (0..=order)
        .map(|k| S::one(ctx).div_integer(&factorial(k as u64)))
        .collect();
    Poly::new(coeffs)
}

fn to_exact_poly<S: Coeff>(p: &Poly<S>) -> Poly<Exact> {
    p.map(Coeff::to_exact)
}

fn to_exact_op<S: Coeff>(op: &OperatorSpec<S>) -> OperatorSpec<Exact> {
    op.map(Coeff::to_exact)
}

fn abs_lambda<S: Coeff>(lambda: &S) -> Float {
    lambda.to_approx(MEASURE_PRECISION).abs()
}

/// Start of the first run of [`CONSECUTIVE`] values below `eps`.
fn certified_from(norms: &[Real], eps: f64, first_n: usize) -> Option<usize> {
    let mut run = 0;
    for (i, x) in norms.iter().enumerate() {
        if x.lt_f64(eps) {
            run += 1;
            if run == CONSECUTIVE {
                return Some(first_n + i + 1 - CONSECUTIVE);
            }
        } else {
            run = 0;
        }
    }
    None
}

fn first_below(norms: &[Real], eps: f64, first_n: usize) -> Option<usize> {
    norms.iter().position(|x| x.lt_f64(eps)).map(|i| first_n + i)
}

// ---------------------------------------------------------------------------
// Criterion
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ForwardOrbit {
    pub degree: Degree,
    /// First `n` with `T^n p = 0`.
    pub first_zero: Option<usize>,
    /// `⌊d/ℓ⌋ + 1`.
    pub latest_allowed: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InverseNorms {
    pub degree: Degree,
    /// `norm_upper(S_n p)` for `n = 1, 2, …`.
    pub norms: Vec<Real>,
    pub first_below: Option<usize>,
    pub certified_from: Option<usize>,
    /// Norms never increase from `certified_from` to the last computed index.
    pub monotone_tail: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionA {
    pub pass: bool,
    pub per_target: Vec<ForwardOrbit>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionB {
    pub verdict: Verdict,
    pub per_target: Vec<InverseNorms>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionC {
    pub pass: bool,
    pub checked: usize,
    /// `(target index, n)` of the first failed identity.
    pub first_failure: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub inverse: &'static str,
    pub radius: f64,
    pub eps: f64,
    pub n_max: usize,
    pub condition_a: ConditionA,
    pub condition_b: ConditionB,
    pub condition_c: ConditionC,
    pub verdict: Verdict,
}

/// Checks the three criterion conditions for `op` on the given targets
/// (typically [`monomials`]).
///
/// (a) `T^n p` reaches 0 by `n = ⌊deg p/ℓ⌋ + 1`, exactly.
/// (b) `norm_upper(S_n p, R) < ε` for [`CONSECUTIVE`] indices within `n_max`.
/// (c) `T^n S_n p = p` exactly for `1 ≤ n ≤ n_max`.
///
/// An uncertified (b) is inconclusive rather than failed when `|λ| < 1`.
pub fn criterion_check<S: Coeff>(
    op: &OperatorSpec<S>,
    targets: &[Poly<S>],
    disk: &Disk,
    eps: f64,
    n_max: usize,
) -> Result<CriterionReport> {
    let inverse = RightInverse::for_operator(op)?;
    let ell = inverse.step();
    let exact_op = to_exact_op(op);
    let exact_inverse = RightInverse::for_operator(&exact_op)?;
    let exact_targets: Vec<Poly<Exact>> = targets.iter().map(to_exact_poly).collect();

    let per_a: Vec<ForwardOrbit> = exact_targets
        .iter()
        .map(|p| {
            let latest_allowed = p.degree().finite().map_or(0, |d| d / ell + 1);
            let mut cur = p.clone();
            let mut first_zero = None;
            for n in 0..=latest_allowed.max(n_max) {
                if cur.is_zero() {
                    first_zero = Some(n);
                    break;
                }
                cur = exact_op.apply(&cur);
            }
            ForwardOrbit {
                degree: p.degree(),
                first_zero,
                latest_allowed,
                pass: first_zero.is_some_and(|n| n <= latest_allowed),
            }
        })
        .collect();
    let condition_a = ConditionA {
        pass: per_a.iter().all(|x| x.pass),
        per_target: per_a,
    };

    let mut per_b = Vec::with_capacity(targets.len());
    for p in targets {
        let mut norms = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            norms.push(inverse.apply(n, p)?.norm_upper(disk));
        }
        let certified = certified_from(&norms, eps, 1);
        let monotone_tail = certified.is_some_and(|c| norms[c - 1..].windows(2).all(|w| w[1] <= w[0]));
        per_b.push(InverseNorms {
            degree: p.degree(),
            first_below: first_below(&norms, eps, 1),
            certified_from: certified,
            monotone_tail,
            norms,
        });
    }
    let b_ok = per_b.iter().all(|x| x.certified_from.is_some());
    let b_verdict = if b_ok {
        Verdict::Pass
    } else if abs_lambda(op.lambda()) < 1 {
        Verdict::Inconclusive
    } else {
        Verdict::Fail
    };
    let condition_b = ConditionB {
        verdict: b_verdict,
        per_target: per_b,
    };

    let mut checked = 0;
    let mut first_failure = None;
    'outer: for (i, p) in exact_targets.iter().enumerate() {
        for n in 1..=n_max {
            checked += 1;
            let s = exact_inverse.apply(n, p)?;
            if exact_op.power(n, &s) != *p {
                first_failure = Some((i, n));
                break 'outer;
            }
        }
    }
    let condition_c = ConditionC {
        pass: first_failure.is_none(),
        checked,
        first_failure,
    };

    let verdict = Verdict::all([
        if condition_a.pass { Verdict::Pass } else { Verdict::Fail },
        condition_b.verdict,
        if condition_c.pass { Verdict::Pass } else { Verdict::Fail },
    ]);
    Ok(CriterionReport {
        inverse: inverse.name(),
        radius: disk.radius(),
        eps,
        n_max,
        condition_a,
        condition_b,
        condition_c,
        verdict,
    })
}

// ---------------------------------------------------------------------------
// Right-inverse images of geometrically bounded multiples
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct SlimitReport {
    pub m: usize,
    pub ell: usize,
    /// `norm_upper(S_{m,ℓn}(t^n p), R)` for `n = 1, 2, …` until certified.
    pub norms: Vec<Real>,
    pub first_below: Option<usize>,
    pub certified_from: Option<usize>,
    pub verdict: Verdict,
}

/// `S_{m,ℓn}(t^n p) → 0` on the disk: certified once the majorant stays
/// below `eps` for [`CONSECUTIVE`] indices, within `n_max`.
#[allow(clippy::too_many_arguments)]
pub fn slimit_check<S: Coeff>(
    m: usize,
    ell: usize,
    lambda: &S,
    b: &S,
    t: &S,
    p: &Poly<S>,
    disk: &Disk,
    eps: f64,
    n_max: usize,
) -> Result<SlimitReport> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda("slimit_check"));
    }
    if abs_lambda(lambda) < 1 {
        return Err(Error::InvalidArgument("slimit_check needs |λ| ≥ 1".into()));
    }
    if m == 0 || ell == 0 {
        return Err(Error::InvalidArgument("slimit_check needs m, ℓ ≥ 1".into()));
    }
    let mut norms = Vec::new();
    let mut certified = None;
    let mut scaled = p.clone();
    for n in 1..=n_max {
        scaled = scaled.scale(t);
        norms.push(crate::inverses::s_mn(m, ell * n, lambda, b, &scaled)?.norm_upper(disk));
        certified = certified_from(&norms, eps, 1);
        if certified.is_some() {
            break;
        }
    }
    Ok(SlimitReport {
        m,
        ell,
        first_below: first_below(&norms, eps, 1),
        certified_from: certified,
        verdict: if certified.is_some() { Verdict::Pass } else { Verdict::Fail },
        norms,
    })
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct SynthesisPlan<S: Coeff + Serialize> {
    pub targets: Vec<Poly<S>>,
    pub indices: Vec<usize>,
    pub gap: usize,
    pub vector: Poly<S>,
    /// `norm_upper(T^{n_k} f − p_k, R)`.
    pub visit_errors: Vec<Real>,
    /// `Σ_{j ≠ k} norm_upper(T^{n_k} S_{n_j} p_j, R)`.
    pub tail_bounds: Vec<Real>,
    /// `T^{n_k} S_{n_k} p_k = p_k` held exactly for every `k`.
    pub exact_visits: bool,
    pub eps: f64,
    pub verdict: Verdict,
}

/// Vector, visit errors and tail bounds for a fixed schedule.
///
/// The visit error is the majorant of `Σ_{j≠k} T^{n_k} S_{n_j} p_j`, which is
/// `T^{n_k} f − p_k` once `T^{n_k} S_{n_k} p_k = p_k` (checked exactly by
/// the synthesizer). Summing the cross terms avoids cancelling `p_k` against
/// itself in floating point.
#[allow(clippy::type_complexity)]
pub fn evaluate_schedule<S: Coeff>(
    op: &OperatorSpec<S>,
    targets: &[Poly<S>],
    indices: &[usize],
    disk: &Disk,
) -> Result<(Poly<S>, Vec<Real>, Vec<Real>)> {
    if targets.len() != indices.len() {
        return Err(Error::InvalidArgument("one index per target".into()));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("indices must be strictly increasing".into()));
    }
    let inverse = RightInverse::for_operator(op)?;
    let pieces: Vec<Poly<S>> = targets
        .iter()
        .zip(indices)
        .map(|(p, &n)| inverse.apply(n, p))
        .collect::<Result<_>>()?;
    let vector = pieces.iter().fold(Poly::zero(), |acc, s| &acc + s);
    let prec = S::measure_precision(op.lambda().ctx());
    let mut visit_errors = Vec::with_capacity(targets.len());
    let mut tail_bounds = Vec::with_capacity(targets.len());
    for (k, &nk) in indices.iter().enumerate() {
        let mut cross = Poly::zero();
        let mut norms = Vec::new();
        for (j, s) in pieces.iter().enumerate() {
            if j == k {
                continue;
            }
            let term = op.power(nk, s);
            norms.push(term.norm_upper(disk));
            cross = &cross + &term;
        }
        visit_errors.push(cross.norm_upper(disk));
        tail_bounds.push(Real::sum_up(&norms, prec));
    }
    Ok((vector, visit_errors, tail_bounds))
}

/// `f = Σ_k S_{n_k} p_k` with `n_k = n_1 + (k−1)·g`, doubling the gap `g`
/// from 1 until every visit error is below `eps` or the largest index would
/// exceed [`INDEX_BUDGET`]. `n_1` defaults to `g`.
pub fn synthesize_hc_vector<S: Coeff + Serialize>(
    op: &OperatorSpec<S>,
    targets: &[Poly<S>],
    disk: &Disk,
    eps: f64,
    start: Option<usize>,
) -> Result<SynthesisPlan<S>> {
    if op.lambda().is_zero() {
        return Err(Error::ZeroLambda("synthesize_hc_vector"));
    }
    if abs_lambda(op.lambda()) < 1 {
        return Err(Error::InvalidArgument("synthesis needs |λ| ≥ 1".into()));
    }
    if targets.is_empty() {
        return Err(Error::InvalidArgument("no targets".into()));
    }
    let exact_op = to_exact_op(op);
    let exact_inverse = RightInverse::for_operator(&exact_op)?;
    let k = targets.len();
    let mut gap = 1usize;
    let mut last = None;
    while gap <= INDEX_BUDGET {
        let n1 = start.unwrap_or(gap);
        let top = n1 + (k - 1) * gap;
        if top > INDEX_BUDGET {
            break;
        }
        let indices: Vec<usize> = (0..k).map(|i| n1 + i * gap).collect();
        let (vector, visit_errors, tail_bounds) = evaluate_schedule(op, targets, &indices, disk)?;
        let ok = visit_errors.iter().all(|e| e.lt_f64(eps));
        last = Some((indices, gap, vector, visit_errors, tail_bounds));
        if ok || k == 1 {
            break;
        }
        gap *= 2;
    }
    let (indices, gap, vector, visit_errors, tail_bounds) =
        last.ok_or_else(|| Error::BudgetExhausted("start index exceeds the index budget".into()))?;
    let mut exact_visits = true;
    for (p, &n) in targets.iter().zip(&indices) {
        let p = to_exact_poly(p);
        if exact_op.power(n, &exact_inverse.apply(n, &p)?) != p {
            exact_visits = false;
        }
    }
    let met = visit_errors.iter().all(|e| e.lt_f64(eps));
    let verdict = match (met, exact_visits) {
        (_, false) => Verdict::Fail,
        (true, true) => Verdict::Pass,
        (false, true) => Verdict::Inconclusive,
    };
    Ok(SynthesisPlan {
        targets: targets.to_vec(),
        indices,
        gap,
        vector,
        visit_errors,
        tail_bounds,
        exact_visits,
        eps,
        verdict,
    })
}

// ---------------------------------------------------------------------------
// Decay for |λ| < 1
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub orbit: OrbitReport,
    /// `max |f|` on the unit circle, sampled.
    pub c: Real,
    pub n_range: (usize, usize),
    /// Smallest `n_0` in range with `norm_boundary ≤ envelope` on `[n_0, hi]`.
    pub n0: Option<usize>,
    pub envelope_holds: bool,
    /// Index of the largest `norm_upper` on `[0, hi]`.
    pub n_peak: usize,
    /// `norm_upper` strictly decreases from `n_peak` to `hi` (until it hits 0).
    pub decreasing_after_peak: bool,
    pub verdict: Verdict,
}

/// `C · n! · 2^n · |λ|^{n(n−1)/2}`, rounded upward.
pub fn decay_envelope(c: &Real, abs_lambda: &Float, n: usize) -> Real {
    let prec = MEASURE_PRECISION.max(c.as_float().prec());
    let mut x = Float::with_val_round(prec, factorial(n as u64), Round::Up).0;
    x.mul_assign_round(Float::with_val(prec, Float::u_exp(1, n as i32)), Round::Up);
    let tri = (n * n.saturating_sub(1) / 2) as u32;
    let lam = Float::with_val_round(prec, rug::ops::Pow::pow(abs_lambda, tri), Round::Up).0;
    x.mul_assign_round(&lam, Round::Up);
    x.mul_assign_round(c.as_float(), Round::Up);
    Real::new(x)
}

/// Orbit of `ψ(T_{λ,b})` on `f` against the factorial envelope, for
/// `0 < |λ| < 1` and `ψ(0) = 0`.
///
/// When `f` stands for a truncated entire function, `truncation` is its
/// order, which must be at least `hi + 10`.
pub fn decay_envelope_check<S: Coeff>(
    psi: &Series<S>,
    lambda: &S,
    b: &S,
    f: &Poly<S>,
    disk: &Disk,
    n_range: (usize, usize),
    truncation: Option<usize>,
) -> Result<DecayReport> {
    let (lo, hi) = n_range;
    if lo > hi {
        return Err(Error::InvalidArgument("empty n range".into()));
    }
    if lambda.is_zero() {
        return Err(Error::ZeroLambda("decay_envelope_check"));
    }
    let abs = abs_lambda(lambda);
    if abs >= 1 {
        return Err(Error::InvalidArgument("decay check needs |λ| < 1".into()));
    }
    match psi.vanish_order() {
        None => return Err(Error::ZeroSeries("decay_envelope_check")),
        Some(0) => return Err(Error::NonvanishingAtOrigin("decay_envelope_check")),
        Some(_) => {}
    }
    if let Some(k) = truncation {
        if k < hi + 10 {
            return Err(Error::InvalidArgument(format!(
                "truncation order {k} must be at least {}",
                hi + 10
            )));
        }
    }
    let op = OperatorSpec::new(OperatorKind::PsiOfT(psi.clone()), lambda.clone(), b.clone());
    let mut orbit = op.orbit(f, hi, disk)?;
    let c = f.norm_boundary(&Disk::unit(), default_samples(f.degree()))?;
    let envelope: Vec<EnvelopePoint> = (lo..=hi)
        .map(|n| EnvelopePoint {
            n,
            bound: decay_envelope(&c, &abs, n),
        })
        .collect();
    let above: Vec<usize> = envelope
        .iter()
        .filter(|e| orbit.steps[e.n].norm_boundary > e.bound)
        .map(|e| e.n)
        .collect();
    let n0 = match above.last() {
        None => Some(lo),
        Some(&n) if n < hi => Some(n + 1),
        Some(_) => None,
    };
    orbit.envelope = Some(envelope);
    let steps: &[OrbitStep] = orbit.steps();
    let n_peak = steps
        .iter()
        .enumerate()
        .fold(0, |best, (i, s)| if s.norm_upper > steps[best].norm_upper { i } else { best });
    let decreasing_after_peak = steps[n_peak..]
        .windows(2)
        .all(|w| w[1].norm_upper < w[0].norm_upper || (w[0].norm_upper.is_zero() && w[1].norm_upper.is_zero()));
    let envelope_holds = n0 == Some(lo);
    Ok(DecayReport {
        c,
        n_range,
        n0,
        envelope_holds,
        n_peak,
        decreasing_after_peak,
        verdict: if envelope_holds && decreasing_after_peak { Verdict::Pass } else { Verdict::Fail },
        orbit,
    })
}

// ---------------------------------------------------------------------------
// Coefficient bounds
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub n: usize,
    /// `|a_{i,n}|`, `1 ≤ i ≤ d`.
    pub a: Vec<f64>,
    /// `(r d n)^d`.
    pub a_bound: Option<f64>,
    pub a_ok: Option<bool>,
    /// `|c_{j,n}|` for `ξ^n`, `1 ≤ j ≤ d`.
    pub xi_c: Vec<f64>,
    /// `r^j C(n+j−1, j)` with `r = sup |ξ_k|`.
    pub xi_bound: Vec<f64>,
    pub xi_ok: bool,
    /// `|c_{j,n}|` for the product of the dilated inverse factors.
    pub prod_c: Vec<f64>,
    /// `C(j+n−1, n−1) α^j`.
    pub prod_bound: Vec<f64>,
    /// `n^j α^j`.
    pub prod_relaxed: Vec<f64>,
    pub prod_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub d: usize,
    /// `max(1, 1/|α_i|)` from the roots of the degree-`d` truncation.
    pub r_roots: Option<f64>,
    pub root_error: Option<String>,
    /// `sup |ξ_k|`.
    pub r_xi: f64,
    /// `max(1, |a_i|)` for the coefficients of `w_0/ψ`.
    pub alpha: f64,
    pub rows: Vec<BoundRow>,
    pub verdict: Verdict,
}

fn binom_f64(n: usize, k: usize) -> f64 {
    binom(n as u64, k as u64).to_f64()
}

fn within(x: f64, bound: f64, slack: f64) -> bool {
    x <= bound * (1.0 + slack)
}

/// Checks, for each `n` in `n_range`:
///
/// * `|a_{i,n}| ≤ (r d n)^d`, `a_{i,n}` the coefficients of `(w_0/ψ)^n`;
/// * `|c_{j,n}| ≤ r^j C(n+j−1, j)` for `ξ^n`, `ξ = ψ/(ψ_ℓ z^ℓ)`, `r = sup |ξ_k|`;
/// * `|c_{j,n}| ≤ C(j+n−1, n−1) α^j ≤ n^j α^j` for
///   `Π_{k=1}^{n} (1 + Σ_i a_i λ^{−ki} x^i)`, `a_i` the coefficients of `w_0/ψ`.
///
/// The last family needs `|λ| ≥ 1` (default `λ = 1`).
pub fn coefficient_bound_check<S: Coeff>(
    psi: &Series<S>,
    d: usize,
    n_range: (usize, usize),
    lambda: Option<&S>,
) -> Result<BoundsReport> {
    let (lo, hi) = n_range;
    if lo == 0 || lo > hi {
        return Err(Error::InvalidArgument("n range must be 1 ≤ lo ≤ hi".into()));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    let ctx = psi.ctx();
    let one = S::one(ctx);
    let lambda = lambda.cloned().unwrap_or_else(|| one.clone());
    if lambda.is_zero() || abs_lambda(&lambda) < 1 {
        return Err(Error::InvalidArgument("product bound needs |λ| ≥ 1".into()));
    }
    let ell = psi.vanish_order().ok_or(Error::ZeroSeries("coefficient_bound_check"))?;
    let w0 = psi.constant_term().clone();
    let has_inverse = !w0.is_zero();

    let (r_roots, root_error) = if has_inverse {
        match root_data(psi, d) {
            Ok((_, r)) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, Some("ψ(0) = 0: no inverse expansion".into()))
    };

    let lead = psi.coeff(ell);
    let xi = psi.shift_down(ell).scale(&(one.clone() / &lead)).with_order(d);
    let r_xi = xi.coeffs().iter().map(Coeff::abs_f64).fold(0.0, f64::max);

    let base_inv = if has_inverse {
        Some(psi.scale(&(one.clone() / &w0)).reciprocal(d)?)
    } else {
        None
    };
    let alpha = base_inv
        .as_ref()
        .map(|t| t.coeffs()[1..].iter().map(Coeff::abs_f64).fold(1.0, f64::max))
        .unwrap_or(1.0);

    let inv_lambda = one.clone() / &lambda;
    let mut rows = Vec::new();
    let mut prod = Series::one(d, ctx);
    let mut mu = one.clone();
    let mut built = 0;
    for n in lo..=hi {
        let (a, a_bound, a_ok) = if has_inverse {
            let e = power_expansion(psi, d, n)?;
            let a: Vec<f64> = e.a.iter().map(Coeff::abs_f64).collect();
            let bound = r_roots.map(|r| (r * (d * n) as f64).powi(d as i32));
            let ok = bound.map(|bd| a.iter().all(|&x| within(x, bd, ROOT_TOLERANCE)));
            (a, bound, ok)
        } else {
            (Vec::new(), None, None)
        };

        let pw = xi.pow_trunc(n as u64, d);
        let xi_c: Vec<f64> = pw.coeffs()[1..].iter().map(Coeff::abs_f64).collect();
        let xi_bound: Vec<f64> = (1..=d).map(|j| r_xi.powi(j as i32) * binom_f64(n + j - 1, j)).collect();
        let xi_ok = xi_c.iter().zip(&xi_bound).all(|(&c, &b)| within(c, b, BOUND_SLACK));

        let (prod_c, prod_bound, prod_relaxed, prod_ok) = match &base_inv {
            Some(t) => {
                while built < n {
                    mu = mu * &inv_lambda;
                    prod = prod.mul_trunc(&t.dilate(&mu), d);
                    built += 1;
                }
                let c: Vec<f64> = prod.coeffs()[1..].iter().map(Coeff::abs_f64).collect();
                let bound: Vec<f64> = (1..=d)
                    .map(|j| binom_f64(j + n - 1, n - 1) * alpha.powi(j as i32))
                    .collect();
                let relaxed: Vec<f64> = (1..=d).map(|j| (n as f64 * alpha).powi(j as i32)).collect();
                let ok = c.iter().zip(&bound).all(|(&c, &b)| within(c, b, BOUND_SLACK))
                    && bound.iter().zip(&relaxed).all(|(&b, &r)| within(b, r, BOUND_SLACK));
                (c, bound, relaxed, ok)
            }
            None => (Vec::new(), Vec::new(), Vec::new(), true),
        };

        rows.push(BoundRow {
            n,
            a,
            a_bound,
            a_ok,
            xi_c,
            xi_bound,
            xi_ok,
            prod_c,
            prod_bound,
            prod_relaxed,
            prod_ok,
        });
    }
    let failed = rows
        .iter()
        .any(|r| r.a_ok == Some(false) || !r.xi_ok || !r.prod_ok);
    let verdict = if failed {
        Verdict::Fail
    } else if has_inverse && r_roots.is_none() {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(BoundsReport {
        d,
        r_roots,
        root_error,
        r_xi,
        alpha,
        rows,
        verdict,
    })
}
