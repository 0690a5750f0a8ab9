//! Right inverses on polynomials.
//!
//! * [`s_mn`] inverts `L_{λ,b,z^m}^n` (the closed-form power) monomial by
//!   monomial.
//! * [`s_psi_lambda_g`] inverts `ψ(λG)` for `ψ(0) ≠ 0` and any
//!   degree-lowering `G`, by a truncated series reciprocal.
//! * [`f_n`] inverts `L_{λ,b,φ}^n` for `φ = z^m ψ`.
//! * [`right_inverse_psi_t`] inverts `ψ(T_{λ,b})^n` for `ψ = z^ℓ ξ`.
//!
//! [`s_psi_lambda_g_factored`] is a second, root-based construction of
//! `S_{ψ(λG)}` in floating point, kept as an independent cross-check.

use serde::Serialize;

use crate::combinatorics::{binom, falling_factorial};
use crate::error::{Error, Result};
use crate::operators::{series_of_d, shift_r, OperatorKind, OperatorSpec};
use crate::poly::Poly;
use crate::roots::{self, C64};
use crate::scalar::{log10_abs_pow, Approx, Coeff, DEFAULT_PRECISION};
use crate::series::Series;

fn check_lambda<S: Coeff>(lambda: &S, what: &'static str) -> Result<()> {
    if lambda.is_zero() {
        Err(Error::ZeroLambda(what))
    } else {
        Ok(())
    }
}

/// `S_{m,n}`: right inverse of `L_{λ,b,z^m}^n`, raising degree by `mn`.
///
/// On `z^k`:
/// `k!/((k+mn)! λ^{kn} λ^{mn(n−1)/2}) Σ_{j=0}^{k} C(k+mn, j) z^{k+mn−j} r_n^j`.
/// `n = 0` gives the identity.
pub fn s_mn<S: Coeff>(m: usize, n: usize, lambda: &S, b: &S, p: &Poly<S>) -> Result<Poly<S>> {
    check_lambda(lambda, "s_mn")?;
    if m == 0 {
        return Err(Error::InvalidArgument("s_mn needs m ≥ 1".into()));
    }
    if n == 0 || p.is_zero() {
        return Ok(p.clone());
    }
    let d = p.degree().finite().unwrap_or(0);
    let mn = (m * n) as u64;
    let tri = mn * (n as u64 - 1) / 2;
    let mag = log10_abs_pow(lambda, (d as u64 * n as u64 + tri) as f64);
    let ctx = S::working_ctx(lambda.ctx(), mag);
    let lambda = lambda.recast(ctx);
    let b = b.recast(ctx);

    let one = S::one(ctx);
    let inv_lam_n = one.clone() / &lambda.powu(n as u64);
    let inv_base = one / &lambda.powu(tri);
    let r = shift_r(&lambda, &b, n);
    let mut r_pow = Vec::with_capacity(d + 1);
    r_pow.push(S::one(ctx));
    for j in 1..=d {
        let next = r_pow[j - 1].clone() * &r;
        r_pow.push(next);
    }

    let mut out = vec![S::zero(ctx); d + mn as usize + 1];
    let mut lam_k = inv_base;
    for (k, c) in p.coeffs().iter().enumerate() {
        if k > 0 {
            lam_k = lam_k * &inv_lam_n;
        }
        if c.is_zero() {
            continue;
        }
        let top = k as u64 + mn;
        let base = (c.recast(ctx) * &lam_k).div_integer(&falling_factorial(top, mn));
        for (j, rj) in r_pow.iter().enumerate().take(k + 1) {
            if j > 0 && rj.is_zero() {
                break;
            }
            let term = (base.clone() * rj).mul_integer(&binom(top, j as u64));
            out[top as usize - j] += &term;
        }
    }
    Ok(Poly::new(out))
}

/// `Δ_{k,n} = [k!/((k+mn)! λ^{kn} λ^{mn(n−1)/2})] (z + r_n)^{k+mn} − S_{m,n} z^k`.
///
/// It has degree at most `mn − 1` and lies in the kernel of the closed-form power.
pub fn kernel_delta<S: Coeff>(m: usize, n: usize, lambda: &S, b: &S, k: usize) -> Result<Poly<S>> {
    check_lambda(lambda, "kernel_delta")?;
    let ctx = lambda.ctx();
    let mn = (m * n) as u64;
    let tri = mn * (n as u64).saturating_sub(1) / 2;
    let top = k as u64 + mn;
    let lam = lambda.powu(k as u64 * n as u64 + tri);
    let coef = (S::one(ctx) / &lam).div_integer(&falling_factorial(top, mn));
    let r = shift_r(lambda, b, n);
    let full = Poly::new(vec![r, S::one(ctx)]);
    let mut pw = Poly::constant(S::one(ctx));
    for _ in 0..top {
        pw = pw.mul(&full);
    }
    let zk = Poly::monomial(S::one(ctx), k);
    Ok(&pw.scale(&coef) - &s_mn(m, n, lambda, b, &zk)?)
}

/// Walks `G^k p` for `k = 0..=deg p`, failing if some step does not lower
/// the degree.
fn g_powers<S: Coeff>(g: &OperatorSpec<S>, p: &Poly<S>) -> Result<Vec<Poly<S>>> {
    let mut out = vec![p.clone()];
    let mut cur = p.clone();
    while !cur.is_zero() {
        let next = g.apply(&cur);
        if next.degree() >= cur.degree() {
            return Err(Error::DegreeNotLowered {
                before: cur.degree().to_string(),
                after: next.degree().to_string(),
            });
        }
        out.push(next.clone());
        cur = next;
    }
    Ok(out)
}

/// `ψ(λG) p = Σ_k ψ_k λ^k G^k p`.
pub fn apply_psi_lambda_g<S: Coeff>(psi: &Series<S>, lambda: &S, g: &OperatorSpec<S>, p: &Poly<S>) -> Result<Poly<S>> {
    let powers = g_powers(g, p)?;
    Ok(weighted_sum(&powers, psi, lambda))
}

fn weighted_sum<S: Coeff>(powers: &[Poly<S>], w: &Series<S>, lambda: &S) -> Poly<S> {
    let mut acc = Poly::zero();
    let mut lam_k = S::one(lambda.ctx());
    for (k, gp) in powers.iter().enumerate() {
        if k > 0 {
            lam_k = lam_k * lambda;
        }
        let c = w.coeff(k);
        if !c.is_zero() && !gp.is_zero() {
            acc = &acc + &gp.scale(&(c * &lam_k));
        }
    }
    acc
}

/// `S_{ψ(λG)} p`: the unique preimage of `p` under `ψ(λG)` among polynomials
/// of degree at most `deg p`.
pub fn s_psi_lambda_g<S: Coeff>(psi: &Series<S>, lambda: &S, g: &OperatorSpec<S>, p: &Poly<S>) -> Result<Poly<S>> {
    check_lambda(lambda, "s_psi_lambda_g")?;
    if psi.constant_term().is_zero() {
        return Err(Error::VanishesAtOrigin("s_psi_lambda_g"));
    }
    let powers = g_powers(g, p)?;
    let t = psi.reciprocal(powers.len().saturating_sub(1))?;
    Ok(weighted_sum(&powers, &t, lambda))
}

/// Coefficients of `S^n_{ψ(λG)} = w_0^{−n} (I + Σ_{i=1}^{m} a_{i,n} λ^i G^i)`
/// on polynomials of degree at most `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseExpansion<S> {
    pub w0: S,
    pub m: usize,
    pub n: usize,
    /// `a[i-1] = a_{i,n}`.
    pub a: Vec<S>,
    /// `(r m n)^m`, present when roots were found.
    pub bound: Option<f64>,
    pub roots: Option<Vec<Approx>>,
    /// `max(1, 1/|α_i|)`.
    pub r: Option<f64>,
    /// `(r m)^m`.
    pub bound_c: Option<f64>,
}

impl<S: Coeff + Serialize> Serialize for InverseExpansion<S> {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("InverseExpansion", 6)?;
        st.serialize_field("w0", &self.w0)?;
        st.serialize_field("a", &self.triples())?;
        st.serialize_field("bound", &self.bound)?;
        st.serialize_field("roots", &self.roots)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("bound_c", &self.bound_c)?;
        st.end()
    }
}

impl<S: Coeff> InverseExpansion<S> {
    /// `a_{i,n}` for `1 ≤ i ≤ m`.
    pub fn a(&self, i: usize) -> &S {
        &self.a[i - 1]
    }

    /// `(i, n, a_{i,n})` triples.
    pub fn triples(&self) -> Vec<(usize, usize, &S)> {
        self.a.iter().enumerate().map(|(i, c)| (i + 1, self.n, c)).collect()
    }
}

/// `a_{i,n}` as the coefficients of `(w_0/ψ)^n` up to degree `m`, no roots.
pub fn power_expansion<S: Coeff>(psi: &Series<S>, m: usize, n: usize) -> Result<InverseExpansion<S>> {
    let w0 = psi.constant_term().clone();
    if w0.is_zero() {
        return Err(Error::VanishesAtOrigin("s_psi_power_coeffs"));
    }
    let inv = S::one(w0.ctx()) / &w0;
    let u = psi.scale(&inv).reciprocal(m)?.pow_trunc(n as u64, m);
    Ok(InverseExpansion {
        w0,
        m,
        n,
        a: u.coeffs()[1..].to_vec(),
        bound: None,
        roots: None,
        r: None,
        bound_c: None,
    })
}

/// Roots of the degree-`m` truncation of `ψ` and the constant
/// `r = max(1, 1/|α_1|, …)`.
pub fn root_data<S: Coeff>(psi: &Series<S>, m: usize) -> Result<(Vec<C64>, f64)> {
    let coeffs: Vec<C64> = (0..=m)
        .map(|k| {
            let (re, im) = psi.coeff(k).to_approx(DEFAULT_PRECISION).to_c64();
            C64::new(re, im)
        })
        .collect();
    let alphas = roots::roots(&coeffs)?;
    let r = alphas.iter().fold(1.0f64, |acc, a| acc.max(1.0 / a.norm()));
    Ok((alphas, r))
}

/// [`power_expansion`] plus the root data and the bound `(r m n)^m`.
pub fn s_psi_power_coeffs<S: Coeff>(psi: &Series<S>, m: usize, n: usize) -> Result<InverseExpansion<S>> {
    let mut out = power_expansion(psi, m, n)?;
    let (alphas, r) = root_data(psi, m)?;
    out.roots = Some(
        alphas
            .iter()
            .map(|a| Approx::from_f64(a.re, a.im, DEFAULT_PRECISION))
            .collect(),
    );
    out.r = Some(r);
    out.bound_c = Some((r * m as f64).powi(m as i32));
    out.bound = Some((r * (m * n) as f64).powi(m as i32));
    Ok(out)
}

/// Root-factored `S_{ψ(λG)} p` in floating point:
/// `q(z) = a_0 Π (1 − z/α_i)` with `q` the truncation of `ψ` at `deg p`, and
/// each factor inverted by its geometric series in `λG/α_i`.
pub fn s_psi_lambda_g_factored(
    psi: &Series<Approx>,
    lambda: &Approx,
    g: &OperatorSpec<Approx>,
    p: &Poly<Approx>,
) -> Result<Poly<Approx>> {
    check_lambda(lambda, "s_psi_lambda_g_factored")?;
    if psi.constant_term().is_zero() {
        return Err(Error::VanishesAtOrigin("s_psi_lambda_g_factored"));
    }
    let Some(d) = p.degree().finite() else {
        return Ok(Poly::zero());
    };
    g_powers(g, p)?;
    let prec = lambda.precision().max(p.ctx().unwrap_or(DEFAULT_PRECISION));
    let (alphas, _) = root_data(psi, d)?;
    let one = Approx::from_f64(1.0, 0.0, prec);
    let geo = Series::new(vec![one.clone(); d + 1], d, prec);
    let mut q = p.clone();
    for alpha in alphas {
        // (I − λG/α)^{-1} = Σ_k (λ/α)^k G^k on degree ≤ d
        let mu = lambda.clone() / &Approx::from_f64(alpha.re, alpha.im, prec);
        let powers = g_powers(g, &q)?;
        q = weighted_sum(&powers, &geo, &mu);
    }
    Ok(q.scale(&(one / psi.constant_term())))
}

/// `F_n p = S_{m,n} S_{ψ(λ^{-1}D)} ⋯ S_{ψ(λ^{-n}D)} p` for `φ = z^m ψ`, a right
/// inverse of `L_{λ,b,φ}^n`.
pub fn f_n<S: Coeff>(phi: &Series<S>, lambda: &S, b: &S, n: usize, p: &Poly<S>) -> Result<Poly<S>> {
    check_lambda(lambda, "f_n")?;
    let m = phi.vanish_order().ok_or(Error::ZeroSeries("f_n"))?;
    if m == 0 {
        return Err(Error::NonvanishingAtOrigin("f_n"));
    }
    let mut q = p.clone();
    if let Some(d) = p.degree().finite() {
        let t = phi.shift_down(m).reciprocal(d)?;
        let inv = S::one(lambda.ctx()) / lambda;
        let inv_n = inv.powu(n as u64);
        let mut mu = inv_n;
        for _ in 0..n {
            if q.is_zero() {
                break;
            }
            q = series_of_d(&t.dilate(&mu), &q);
            mu = mu * lambda;
        }
    }
    s_mn(m, n, lambda, b, &q)
}

/// `S_{1,ℓn} S^n_{ξ(T)} p` for `ψ = z^ℓ ξ`, a right inverse of `ψ(T_{λ,b})^n`.
pub fn right_inverse_psi_t<S: Coeff>(psi: &Series<S>, lambda: &S, b: &S, n: usize, p: &Poly<S>) -> Result<Poly<S>> {
    check_lambda(lambda, "right_inverse_psi_t")?;
    let ell = psi.vanish_order().ok_or(Error::ZeroSeries("right_inverse_psi_t"))?;
    if ell == 0 {
        return Err(Error::NonvanishingAtOrigin("right_inverse_psi_t"));
    }
    let g = match p.degree().finite() {
        Some(d) => {
            let u = psi.shift_down(ell).reciprocal(d)?.pow_trunc(n as u64, d);
            OperatorSpec::psi_of_t(u, lambda.clone(), b.clone()).apply(p)
        }
        None => Poly::zero(),
    };
    s_mn(1, ell * n, lambda, b, &g)
}

/// The right-inverse family attached to an operator.
#[derive(Clone, Debug, PartialEq)]
pub enum RightInverse<S> {
    /// `S_{1,ℓn} S^n_{ξ(T)}` for `ψ(T_{λ,b})`.
    PsiOfT { psi: Series<S>, lambda: S, b: S },
    /// `F_n` for `L_{λ,b,φ}`.
    Composite { phi: Series<S>, lambda: S, b: S },
}

impl<S: Coeff> RightInverse<S> {
    /// Family for `op`; `T` and `D` are `ψ(T)` with `ψ = z`, and a convolution
    /// `φ(D)` is `L_{1,0,φ}`.
    pub fn for_operator(op: &OperatorSpec<S>) -> Result<Self> {
        let ctx = op.lambda().ctx();
        let z = Series::new(vec![S::zero(ctx), S::one(ctx)], 1, ctx);
        let (lambda, b) = (op.lambda().clone(), op.b().clone());
        check_lambda(&lambda, "right inverse")?;
        let inv = match op.kind() {
            OperatorKind::D | OperatorKind::T => RightInverse::PsiOfT { psi: z, lambda, b },
            OperatorKind::PsiOfT(psi) => RightInverse::PsiOfT { psi: psi.clone(), lambda, b },
            OperatorKind::L(phi) | OperatorKind::Conv(phi) => RightInverse::Composite { phi: phi.clone(), lambda, b },
            OperatorKind::C => {
                return Err(Error::InvalidArgument("C_{λ,b} does not lower degree; no right-inverse family".into()))
            }
        };
        let series = inv.series();
        match series.vanish_order() {
            None => Err(Error::ZeroSeries("right inverse")),
            Some(0) => Err(Error::NonvanishingAtOrigin("right inverse")),
            Some(_) => Ok(inv),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RightInverse::PsiOfT { .. } => "psiT",
            RightInverse::Composite { .. } => "f_n",
        }
    }

    pub fn series(&self) -> &Series<S> {
        match self {
            RightInverse::PsiOfT { psi, .. } => psi,
            RightInverse::Composite { phi, .. } => phi,
        }
    }

    /// Vanishing order `ℓ` (or `m`): the degree each application of the
    /// operator removes at least.
    pub fn step(&self) -> usize {
        self.series().vanish_order().unwrap_or(1)
    }

    pub fn apply(&self, n: usize, p: &Poly<S>) -> Result<Poly<S>> {
        match self {
            RightInverse::PsiOfT { psi, lambda, b } => right_inverse_psi_t(psi, lambda, b, n, p),
            RightInverse::Composite { phi, lambda, b } => f_n(phi, lambda, b, n, p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::power_closed_form;
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

    fn q(n: i64, d: i64) -> Exact {
        Exact::ratio(n, d)
    }

    #[test]
    fn s_mn_examples() {
        for k in 0..6 {
            let got = s_mn(1, 1, &r(1), &r(0), &Poly::monomial(r(1), k)).unwrap();
            assert_eq!(got, Poly::monomial(q(1, k as i64 + 1), k + 1));
        }
        let got = s_mn(1, 1, &r(2), &r(1), &ex(&[0, 1])).unwrap();
        assert_eq!(got, Poly::new(vec![r(0), q(-1, 2), q(1, 4)]));
        assert_eq!(s_mn(1, 1, &r(2), &r(1), &ex(&[1])).unwrap(), ex(&[0, 1]));
        assert!(s_mn(1, 1, &r(0), &r(1), &ex(&[1])).is_err());
    }

    #[test]
    fn s_mn_round_trip_and_degree() {
        let p = Poly::new(vec![q(1, 3), Exact::new(2, -1), r(0), q(-5, 2), Exact::i()]);
        for lambda in [r(1), r(2), Exact::i(), Exact::new(1, 1), q(3, 2), q(1, 2)] {
            for b in [r(0), r(1), Exact::i(), Exact::new(1, 1)] {
                for m in 1..=3 {
                    for n in 1..=5 {
                        let s = s_mn(m, n, &lambda, &b, &p).unwrap();
                        assert_eq!(s.degree().finite(), Some(4 + m * n));
                        assert_eq!(power_closed_form(&lambda, &b, m, n, &s).unwrap(), p);
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_delta_properties() {
        for (lambda, b) in [(r(2), r(1)), (Exact::i(), Exact::new(1, 1)), (q(1, 2), r(1))] {
            for m in 1..=3 {
                for n in 1..=4 {
                    for k in 0..5 {
                        let delta = kernel_delta(m, n, &lambda, &b, k).unwrap();
                        assert!(delta.degree() < crate::poly::Degree::Finite(m * n));
                        assert!(power_closed_form(&lambda, &b, m, n, &delta).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn s_psi_lambda_g_examples() {
        let d = OperatorSpec::d(());
        let p = ex(&[3, 1, 4]);
        assert_eq!(s_psi_lambda_g(&ser(&[1]), &r(5), &d, &p).unwrap(), p);
        assert_eq!(s_psi_lambda_g(&ser(&[1, 1]), &r(1), &d, &ex(&[0, 0, 1])).unwrap(), ex(&[2, -2, 1]));
        assert_eq!(
            s_psi_lambda_g(&ser(&[2]), &r(1), &d, &ex(&[0, 1])).unwrap(),
            Poly::new(vec![r(0), q(1, 2)])
        );
        assert!(s_psi_lambda_g(&ser(&[0, 1]), &r(1), &d, &p).is_err());
        assert!(s_psi_lambda_g(&ser(&[1, 1]), &r(0), &d, &p).is_err());
        let c = OperatorSpec::c(r(2), r(0));
        assert!(matches!(
            s_psi_lambda_g(&ser(&[1, 1]), &r(1), &c, &p),
            Err(Error::DegreeNotLowered { .. })
        ));
    }

    #[test]
    fn s_psi_lambda_g_round_trip() {
        let p = Poly::new(vec![q(1, 3), Exact::new(2, -1), r(7), q(-5, 2), Exact::i(), r(1)]);
        let psi = ser(&[3, -1, 2, 0, 5]);
        for g in [OperatorSpec::d(()), OperatorSpec::t(q(3, 2), Exact::i()), OperatorSpec::psi_of_t(ser(&[0, 1, 1]), r(2), r(1))] {
            let lambda = Exact::new(1, 2);
            let s = s_psi_lambda_g(&psi, &lambda, &g, &p).unwrap();
            assert_eq!(s.degree(), p.degree());
            assert_eq!(apply_psi_lambda_g(&psi, &lambda, &g, &s).unwrap(), p);
        }
    }

    #[test]
    fn power_coeff_examples() {
        let e = s_psi_power_coeffs(&ser(&[1, 1]), 2, 3).unwrap();
        assert_eq!((e.a(1), e.a(2)), (&r(-3), &r(6)));
        let e = s_psi_power_coeffs(&ser(&[1, 1]), 2, 1).unwrap();
        assert_eq!((e.a(1), e.a(2)), (&r(-1), &r(1)));
        assert_eq!(e.r, Some(1.0));
        let e = s_psi_power_coeffs(&ser(&[1]), 4, 7).unwrap();
        assert!(e.a.iter().all(Exact::is_zero));
        assert!(s_psi_power_coeffs(&ser(&[0, 1]), 2, 2).is_err());
    }

    #[test]
    fn power_expansion_inverts_psi_power() {
        // w0^{-n}(I + Σ a_{i,n} λ^i G^i) ψ(λG)^n = I on degree ≤ m
        let psi = ser(&[2, 1, -3]);
        let lambda = Exact::new(1, 1);
        let g = OperatorSpec::t(r(2), r(1));
        let m = 4;
        let p = ex(&[1, -2, 0, 3, 1]);
        for n in 1..5 {
            let e = power_expansion(&psi, m, n).unwrap();
            let mut img = p.clone();
            for _ in 0..n {
                img = apply_psi_lambda_g(&psi, &lambda, &g, &img).unwrap();
            }
            let mut w = vec![r(1)];
            w.extend(e.a.iter().cloned());
            let back = apply_psi_lambda_g(&Series::new(w, m, ()), &lambda, &g, &img).unwrap();
            let w0n = e.w0.powu(n as u64);
            assert_eq!(back.scale(&(r(1) / &w0n)), p);
        }
    }

    #[test]
    fn factored_route_matches_series_route() {
        let psi = ser(&[2, 1, -3, 1]);
        let lambda = Exact::new(q(3, 2).re().clone(), 1);
        let g = OperatorSpec::t(r(2), r(1));
        let p = ex(&[1, -2, 0, 3, 1, 2]);
        let exact = s_psi_lambda_g(&psi, &lambda, &g, &p).unwrap();
        let approx = s_psi_lambda_g_factored(&psi.to_approx(53), &lambda.to_approx(53), &g.to_approx(53), &p.to_approx(53)).unwrap();
        let want = exact.to_approx(53);
        let diff = (&approx - &want).norm_upper(&crate::poly::Disk::unit()).to_f64();
        let scale = want.norm_upper(&crate::poly::Disk::unit()).to_f64();
        assert!(diff / scale < 1e-9, "{diff} / {scale}");
    }

    #[test]
    fn f_n_examples() {
        let p = ex(&[2, -1, 0, 3]);
        for n in 1..4 {
            assert_eq!(f_n(&ser(&[0, 0, 1]), &r(2), &r(1), n, &p).unwrap(), s_mn(2, n, &r(2), &r(1), &p).unwrap());
        }
        // L = D(I + D): the constructed preimage of 1 is z; z − 1 is another.
        let phi = ser(&[0, 1, 1]);
        let got = f_n(&phi, &r(1), &r(0), 1, &ex(&[1])).unwrap();
        let l = OperatorSpec::l(r(1), r(0), phi.clone());
        assert_eq!(l.apply(&got), ex(&[1]));
        assert_eq!(l.apply(&ex(&[-1, 1])), ex(&[1]));
        let phi2 = ser(&[0, 0, 1]);
        let f = f_n(&phi2, &r(2), &r(0), 1, &ex(&[5])).unwrap();
        assert_eq!(OperatorSpec::l(r(2), r(0), phi2).apply(&f), ex(&[5]));
        assert!(f_n(&ser(&[0]), &r(2), &r(0), 1, &p).is_err());
        assert!(f_n(&phi, &r(0), &r(0), 1, &p).is_err());
    }

    #[test]
    fn f_n_round_trip_with_non_unit_lambda() {
        // z(1+z) with λ = 2: the ψ-factors need λ^{-1} … λ^{-n}
        let p = ex(&[1, 2, -1, 4]);
        for phi in [ser(&[0, 1, 1]), ser(&[0, 1, 0, 1]), ser(&[0, 0, 1])] {
            let l = OperatorSpec::l(r(2), r(1), phi.clone());
            for n in 1..5 {
                let f = f_n(&phi, &r(2), &r(1), n, &p).unwrap();
                assert_eq!(l.iterate(n, &f), p);
            }
        }
    }

    #[test]
    fn right_inverse_psi_t_examples() {
        let p = ex(&[3, 0, 1]);
        assert_eq!(
            right_inverse_psi_t(&ser(&[0, 1]), &r(2), &r(1), 3, &p).unwrap(),
            s_mn(1, 3, &r(2), &r(1), &p).unwrap()
        );
        let psi = ser(&[0, 1, 1]);
        let got = right_inverse_psi_t(&psi, &r(1), &r(0), 1, &ex(&[1])).unwrap();
        let op = OperatorSpec::psi_of_t(psi.clone(), r(1), r(0));
        assert_eq!(op.apply(&got), ex(&[1]));
        assert_eq!(op.apply(&ex(&[-1, 1])), ex(&[1]));
        assert!(right_inverse_psi_t(&ser(&[1, 1]), &r(1), &r(0), 1, &p).is_err());
        assert!(right_inverse_psi_t(&ser(&[0]), &r(1), &r(0), 1, &p).is_err());
        for psi in [ser(&[0, 1, 1]), ser(&[0, 0, 1, 1])] {
            let op = OperatorSpec::psi_of_t(psi.clone(), Exact::i(), Exact::new(1, 1));
            for n in 1..4 {
                let s = right_inverse_psi_t(&psi, &Exact::i(), &Exact::new(1, 1), n, &p).unwrap();
                assert_eq!(op.iterate(n, &s), p);
            }
        }
    }

    #[test]
    fn right_inverse_family_selection() {
        let t = OperatorSpec::t(r(2), r(1));
        assert_eq!(RightInverse::for_operator(&t).unwrap().name(), "psiT");
        let l = OperatorSpec::l(r(2), r(1), ser(&[0, 1, 1]));
        assert_eq!(RightInverse::for_operator(&l).unwrap().name(), "f_n");
        assert!(RightInverse::for_operator(&OperatorSpec::c(r(2), r(1))).is_err());
        assert!(RightInverse::for_operator(&OperatorSpec::l(r(2), r(1), ser(&[1, 1]))).is_err());
    }
}
