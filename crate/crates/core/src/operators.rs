//! Composition–differentiation operators acting on polynomials.
//!
//! Every operator here is `C_{λ,b} ∘ V` for a convolution part `V` that is a
//! power series in `D`, or a power series in `T_{λ,b} = C_{λ,b} ∘ D`:
//!
//! | kind     | action on `p`                      |
//! |----------|------------------------------------|
//! | `D`      | `p'`                               |
//! | `C`      | `p(λz + b)`                        |
//! | `T`      | `p'(λz + b)`                       |
//! | `Conv`   | `φ(D) p`                           |
//! | `L`      | `(φ(D) p)(λz + b)`                 |
//! | `PsiOfT` | `ψ(T_{λ,b}) p = Σ_k ψ_k T_{λ,b}^k p` |
//!
//! Series are applied only up to the degree of `p`; every higher term
//! annihilates it.

use crate::error::{Error, Result};
use crate::poly::{default_samples, Disk, Poly};
use crate::report::{OrbitReport, OrbitStep};
use crate::scalar::{log10_abs_pow, Approx, Coeff};
use crate::series::Series;

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorKind<S> {
    D,
    C,
    T,
    Conv(Series<S>),
    L(Series<S>),
    PsiOfT(Series<S>),
}

impl<S> OperatorKind<S> {
    pub fn tag(&self) -> &'static str {
        match self {
            OperatorKind::D => "D",
            OperatorKind::C => "C",
            OperatorKind::T => "T",
            OperatorKind::Conv(_) => "conv",
            OperatorKind::L(_) => "L",
            OperatorKind::PsiOfT(_) => "psiT",
        }
    }
}

/// One operator from the composition–differentiation families.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSpec<S> {
    kind: OperatorKind<S>,
    lambda: S,
    b: S,
}

/// Reporting-only facts about an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct OperatorMeta {
    pub is_convolution: bool,
    pub lambda_is_zero: bool,
}

impl<S: Coeff> OperatorSpec<S> {
    pub fn new(kind: OperatorKind<S>, lambda: S, b: S) -> Self {
        OperatorSpec { kind, lambda, b }
    }

    pub fn d(ctx: S::Ctx) -> Self {
        Self::new(OperatorKind::D, S::one(ctx), S::zero(ctx))
    }

    pub fn c(lambda: S, b: S) -> Self {
        Self::new(OperatorKind::C, lambda, b)
    }

    pub fn t(lambda: S, b: S) -> Self {
        Self::new(OperatorKind::T, lambda, b)
    }

    pub fn conv(phi: Series<S>) -> Self {
        let ctx = phi.ctx();
        Self::new(OperatorKind::Conv(phi), S::one(ctx), S::zero(ctx))
    }

    pub fn l(lambda: S, b: S, phi: Series<S>) -> Self {
        Self::new(OperatorKind::L(phi), lambda, b)
    }

    pub fn psi_of_t(psi: Series<S>, lambda: S, b: S) -> Self {
        Self::new(OperatorKind::PsiOfT(psi), lambda, b)
    }

    pub fn kind(&self) -> &OperatorKind<S> {
        &self.kind
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    pub fn b(&self) -> &S {
        &self.b
    }

    pub fn meta(&self) -> OperatorMeta {
        OperatorMeta {
            is_convolution: self.lambda.is_one(),
            lambda_is_zero: self.lambda.is_zero(),
        }
    }

    pub fn map<T: Coeff>(&self, f: impl Fn(&S) -> T) -> OperatorSpec<T> {
        let series = |s: &Series<S>| {
            let coeffs: Vec<T> = s.coeffs().iter().map(&f).collect();
            let ctx = coeffs[0].ctx();
            Series::new(coeffs, s.order(), ctx)
        };
        let kind = match &self.kind {
            OperatorKind::D => OperatorKind::D,
            OperatorKind::C => OperatorKind::C,
            OperatorKind::T => OperatorKind::T,
            OperatorKind::Conv(phi) => OperatorKind::Conv(series(phi)),
            OperatorKind::L(phi) => OperatorKind::L(series(phi)),
            OperatorKind::PsiOfT(psi) => OperatorKind::PsiOfT(series(psi)),
        };
        OperatorSpec {
            kind,
            lambda: f(&self.lambda),
            b: f(&self.b),
        }
    }

    pub fn to_approx(&self, prec: u32) -> OperatorSpec<Approx> {
        self.map(|c| c.to_approx(prec))
    }

    /// The series attached to the operator, if any.
    pub fn series(&self) -> Option<&Series<S>> {
        match &self.kind {
            OperatorKind::Conv(s) | OperatorKind::L(s) | OperatorKind::PsiOfT(s) => Some(s),
            _ => None,
        }
    }

    /// Guaranteed degree drop per application, `None` if the operator can
    /// preserve degree.
    pub fn degree_drop(&self) -> Option<usize> {
        match &self.kind {
            OperatorKind::D | OperatorKind::T => Some(1),
            OperatorKind::C => None,
            OperatorKind::Conv(s) | OperatorKind::L(s) | OperatorKind::PsiOfT(s) => {
                s.vanish_order().filter(|&k| k >= 1)
            }
        }
    }

    pub fn apply(&self, p: &Poly<S>) -> Poly<S> {
        match &self.kind {
            OperatorKind::D => p.derivative(1),
            OperatorKind::C => p.compose_affine(&self.lambda, &self.b),
            OperatorKind::T => p.derivative(1).compose_affine(&self.lambda, &self.b),
            OperatorKind::Conv(phi) => series_of_d(phi, p),
            OperatorKind::L(phi) => series_of_d(phi, p).compose_affine(&self.lambda, &self.b),
            OperatorKind::PsiOfT(psi) => {
                let mut acc = Poly::zero();
                let mut cur = p.clone();
                for k in 0..=psi.order() {
                    if cur.is_zero() {
                        break;
                    }
                    let w = &psi.coeffs()[k];
                    if !w.is_zero() {
                        acc = &acc + &cur.scale(w);
                    }
                    cur = cur.derivative(1).compose_affine(&self.lambda, &self.b);
                }
                acc
            }
        }
    }

    /// `n`-fold application, step by step.
    pub fn iterate(&self, n: usize, p: &Poly<S>) -> Poly<S> {
        let mut cur = p.clone();
        for _ in 0..n {
            if cur.is_zero() {
                break;
            }
            cur = self.apply(&cur);
        }
        cur
    }

    /// `op^n p` through closed forms where they exist; equal to
    /// [`OperatorSpec::iterate`] but much cheaper for large `n`.
    pub fn power(&self, n: usize, p: &Poly<S>) -> Poly<S> {
        if n == 0 || p.is_zero() {
            return p.clone();
        }
        if self.lambda.is_zero() {
            return self.iterate(n, p);
        }
        let (lambda, b) = (&self.lambda, &self.b);
        match &self.kind {
            OperatorKind::D => p.derivative(n),
            OperatorKind::C => {
                let r = shift_r(lambda, b, n);
                p.compose_affine(&lambda.powu(n as u64), &-r)
            }
            OperatorKind::T => power_closed_form(lambda, b, 1, n, p).expect("λ ≠ 0"),
            OperatorKind::Conv(phi) => {
                let d = p.degree().finite().unwrap_or(0);
                series_of_d(&phi.pow_trunc(n as u64, d), p)
            }
            OperatorKind::L(phi) => {
                // L^n = φ(λ^{-1}D) ⋯ φ(λ^{-n}D) C^n
                let r = shift_r(lambda, b, n);
                let mut q = p.compose_affine(&lambda.powu(n as u64), &-r);
                let inv = S::one(lambda.ctx()) / lambda;
                let mut mu = S::one(lambda.ctx());
                for _ in 0..n {
                    if q.is_zero() {
                        break;
                    }
                    mu = mu * &inv;
                    q = series_of_d(&phi.dilate(&mu), &q);
                }
                q
            }
            OperatorKind::PsiOfT(psi) => {
                let Some(ell) = psi.vanish_order() else {
                    return Poly::zero();
                };
                let q = power_closed_form(lambda, b, 1, ell * n, p).expect("λ ≠ 0");
                let Some(d) = q.degree().finite() else {
                    return q;
                };
                let xi = psi.shift_down(ell).pow_trunc(n as u64, d);
                OperatorSpec::psi_of_t(xi, lambda.clone(), b.clone()).apply(&q)
            }
        }
    }

    /// Orbit `op^n p` for `n = 0..=steps`, by iterated application.
    pub fn orbit(&self, p: &Poly<S>, steps: usize, disk: &Disk) -> Result<OrbitReport> {
        orbit(self, p, steps, disk)
    }
}

/// `φ(D) p = Σ_{k ≤ deg p} φ_k D^k p`.
pub(crate) fn series_of_d<S: Coeff>(phi: &Series<S>, p: &Poly<S>) -> Poly<S> {
    let mut acc = Poly::zero();
    let mut cur = p.clone();
    for k in 0..=phi.order() {
        if cur.is_zero() {
            break;
        }
        let w = &phi.coeffs()[k];
        if !w.is_zero() {
            acc = &acc + &cur.scale(w);
        }
        cur = cur.derivative(1);
    }
    acc
}

/// Accumulated shift of `C_{λ,b}^n`: `C^n f(z) = f(λ^n z − r_n)`.
///
/// `r_n = −b(1 − λ^n)/(1 − λ)`, and `r_n = −n b` when `λ = 1`.
pub fn shift_r<S: Coeff>(lambda: &S, b: &S, n: usize) -> S {
    let ctx = lambda.ctx();
    if b.is_zero() || n == 0 {
        return S::zero(ctx);
    }
    if lambda.is_one() {
        return -(b.clone().mul_integer(&rug::Integer::from(n)));
    }
    let one = S::one(ctx);
    let num = one.clone() - &lambda.powu(n as u64);
    let den = one - lambda;
    -(b.clone() * &num / &den)
}

/// `r_0, r_1, …` from the recursion `r_{n+1} = λ r_n − b`.
#[derive(Clone, Debug)]
pub struct ShiftSequence<S> {
    lambda: S,
    b: S,
    next: S,
}

impl<S: Coeff> ShiftSequence<S> {
    pub fn new(lambda: S, b: S) -> Self {
        let next = S::zero(lambda.ctx());
        ShiftSequence { lambda, b, next }
    }
}

impl<S: Coeff> Iterator for ShiftSequence<S> {
    type Item = S;
    fn next(&mut self) -> Option<S> {
        let out = self.next.clone();
        self.next = out.clone() * &self.lambda - &self.b;
        Some(out)
    }
}

/// `L_{λ,b,z^m}^n p = λ^{mn(n−1)/2} p^{(mn)}(λ^n z − r_n)`.
pub fn power_closed_form<S: Coeff>(lambda: &S, b: &S, m: usize, n: usize, p: &Poly<S>) -> Result<Poly<S>> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda("power_closed_form"));
    }
    if n == 0 {
        return Ok(p.clone());
    }
    let tri = (m as u64) * (n as u64) * (n as u64 - 1) / 2;
    let ctx = S::working_ctx(lambda.ctx(), log10_abs_pow(lambda, tri as f64));
    let lambda = lambda.recast(ctx);
    let b = b.recast(ctx);
    let q = p.derivative(m * n);
    if q.is_zero() {
        return Ok(q);
    }
    let q = q.map(|c| c.recast(ctx));
    let r = shift_r(&lambda, &b, n);
    let shifted = q.compose_affine(&lambda.powu(n as u64), &-r);
    Ok(shifted.scale(&lambda.powu(tri)))
}

/// Right-hand side of `C_{λ,b} ∘ φ(D) = φ(λ^{-1}D) ∘ C_{λ,b}` applied to `p`.
pub fn commute_rhs<S: Coeff>(phi: &Series<S>, lambda: &S, b: &S, p: &Poly<S>) -> Result<Poly<S>> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda("commute_rhs"));
    }
    let q = p.compose_affine(lambda, b);
    let inv = S::one(lambda.ctx()) / lambda;
    Ok(series_of_d(&phi.dilate(&inv), &q))
}

/// Orbit table `(n, norm_upper, norm_boundary, degree)` for `n = 0..=steps`.
pub fn orbit<S: Coeff>(op: &OperatorSpec<S>, p: &Poly<S>, steps: usize, disk: &Disk) -> Result<OrbitReport> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut cur = p.clone();
    for n in 0..=steps {
        if n > 0 {
            cur = op.apply(&cur);
        }
        out.push(OrbitStep::measure(n, &cur, disk, default_samples(cur.degree()))?);
    }
    Ok(OrbitReport::new(*disk, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int_poly;
    use crate::scalar::Exact;

    fn ex(c: &[i64]) -> Poly<Exact> {
        int_poly(c, ())
    }

    fn ser(c: &[i64]) -> Series<Exact> {
        Series::exact_poly(&ex(c), ())
    }

    fn r(n: i64) -> Exact {
        Exact::real(n)
    }

    #[test]
    fn apply_examples() {
        assert_eq!(OperatorSpec::t(r(2), r(1)).apply(&ex(&[0, 0, 1])), ex(&[2, 4]));
        let p = ex(&[5, -3, 2, 7]);
        assert_eq!(OperatorSpec::t(r(1), r(0)).apply(&p), p.derivative(1));
        let psi_t = OperatorSpec::psi_of_t(ser(&[1, 1]), r(1), r(0));
        assert_eq!(psi_t.apply(&ex(&[0, 0, 1])), ex(&[0, 2, 1]));
        assert_eq!(OperatorSpec::d(()).apply(&ex(&[1])), Poly::zero());
    }

    #[test]
    fn conv_series_shorter_than_degree_is_zero_extended() {
        let phi = Series::from_poly(&ex(&[0, 1]), 1, ());
        let p = ex(&[0, 0, 0, 0, 1]);
        assert_eq!(OperatorSpec::conv(phi).apply(&p), ex(&[0, 0, 0, 4]));
    }

    #[test]
    fn zero_lambda_is_allowed_for_apply() {
        let op = OperatorSpec::t(r(0), r(3));
        assert!(op.meta().lambda_is_zero);
        // p'(3) for p = z²
        assert_eq!(op.apply(&ex(&[0, 0, 1])), ex(&[6]));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift_r(&r(2), &r(1), 2), r(-3));
        assert_eq!(shift_r(&Exact::i(), &r(0), 7), r(0));
        assert_eq!(shift_r(&r(1), &r(1), 3), r(-3));
    }

    #[test]
    fn shift_sequence_matches_closed_form() {
        for lambda in [r(1), r(2), Exact::i(), Exact::new(1, 1), Exact::ratio(3, 2), Exact::ratio(1, 2)] {
            for b in [r(0), r(1), Exact::i()] {
                let seq = ShiftSequence::new(lambda.clone(), b.clone());
                for (n, rn) in seq.take(65).enumerate() {
                    assert_eq!(rn, shift_r(&lambda, &b, n), "λ={lambda} b={b} n={n}");
                }
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let p = ex(&[0, 0, 0, 1]);
        assert_eq!(power_closed_form(&r(1), &r(0), 1, 2, &p).unwrap(), ex(&[0, 6]));
        assert_eq!(power_closed_form(&r(2), &r(1), 1, 2, &p).unwrap(), ex(&[36, 48]));
        assert_eq!(power_closed_form(&r(2), &r(1), 2, 2, &p).unwrap(), Poly::zero());
        assert!(power_closed_form(&r(0), &r(1), 1, 2, &p).is_err());
    }

    #[test]
    fn commute_examples() {
        let p = ex(&[0, 0, 1]);
        assert_eq!(commute_rhs(&ser(&[0, 1]), &r(2), &r(0), &p).unwrap(), ex(&[0, 4]));
        let q = ex(&[1, 2, 3]);
        assert_eq!(
            commute_rhs(&ser(&[1]), &Exact::i(), &r(1), &q).unwrap(),
            q.compose_affine(&Exact::i(), &r(1))
        );
        let phi = ser(&[0, 0, 1]);
        let lhs = OperatorSpec::l(Exact::i(), r(0), phi.clone()).apply(&p);
        assert_eq!(lhs, ex(&[2]));
        assert_eq!(commute_rhs(&phi, &Exact::i(), &r(0), &p).unwrap(), ex(&[2]));
    }

    #[test]
    fn orbit_example() {
        let op = OperatorSpec::t(Exact::ratio(1, 2), r(0));
        let rep = orbit(&op, &ex(&[0, 0, 0, 1]), 4, &Disk::unit()).unwrap();
        let norms: Vec<f64> = rep.steps().iter().map(|s| s.norm_upper.to_f64()).collect();
        assert_eq!(norms, vec![1.0, 0.75, 0.75, 0.75, 0.0]);
        let zero = orbit(&op, &Poly::zero(), 3, &Disk::unit()).unwrap();
        assert!(zero.steps().iter().all(|s| s.norm_upper.is_zero()));
    }

    #[test]
    fn power_agrees_with_iteration_for_every_kind() {
        let p = Poly::new(vec![r(3), Exact::new(1, -2), r(0), Exact::ratio(5, 3), r(-1), r(2), Exact::i()]);
        let lam = Exact::new(Exact::ratio(3, 2).re().clone(), 1);
        let b = Exact::new(1, 1);
        let ops = vec![
            OperatorSpec::d(()),
            OperatorSpec::c(lam.clone(), b.clone()),
            OperatorSpec::t(lam.clone(), b.clone()),
            OperatorSpec::conv(ser(&[0, 1, 2])),
            OperatorSpec::conv(ser(&[1, 1])),
            OperatorSpec::l(lam.clone(), b.clone(), ser(&[0, 1, 0, 1])),
            OperatorSpec::l(lam.clone(), b.clone(), ser(&[2, 1])),
            OperatorSpec::psi_of_t(ser(&[0, 0, 1, 1]), lam.clone(), b.clone()),
            OperatorSpec::psi_of_t(ser(&[1, -1]), lam.clone(), b.clone()),
        ];
        for op in &ops {
            for n in 0..5 {
                assert_eq!(op.power(n, &p), op.iterate(n, &p), "{} n={n}", op.kind().tag());
            }
        }
    }
}
