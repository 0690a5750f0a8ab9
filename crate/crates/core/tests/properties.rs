use proptest::prelude::*;
use rug::Rational;

use hyperop_core::dynamics::evaluate_schedule;
use hyperop_core::inverses::{
    apply_psi_lambda_g, f_n, kernel_delta, right_inverse_psi_t, s_mn, s_psi_lambda_g, s_psi_lambda_g_factored,
    RightInverse,
};
use hyperop_core::operators::{commute_rhs, power_closed_form, OperatorSpec};
use hyperop_core::poly::{Degree, Disk, Poly};
use hyperop_core::scalar::{Approx, Coeff, Exact};
use hyperop_core::series::Series;
use hyperop_core::text::{parse_poly, render};

const PREC: u32 = 53;

fn rational(bound: i64) -> impl Strategy<Value = Rational> {
    (-bound..=bound, 1i64..=9).prop_map(|(n, d)| Rational::from((n, d)))
}

fn scalar_within(bound: i64) -> impl Strategy<Value = Exact> {
    (rational(bound), rational(bound), any::<bool>()).prop_map(|(re, im, real)| {
        if real {
            Exact::real(re)
        } else {
            Exact::new(re, im)
        }
    })
}

fn scalar() -> impl Strategy<Value = Exact> {
    scalar_within(9)
}

fn nonzero() -> impl Strategy<Value = Exact> {
    scalar().prop_filter("nonzero", |c| !c.is_zero())
}

fn poly_within(deg_max: usize, bound: i64) -> impl Strategy<Value = Poly<Exact>> {
    prop::collection::vec(scalar_within(bound), 0..=deg_max + 1).prop_map(Poly::new)
}

fn poly(deg_max: usize) -> impl Strategy<Value = Poly<Exact>> {
    poly_within(deg_max, 9)
}

fn b_value() -> impl Strategy<Value = Exact> {
    prop_oneof![Just(Exact::real(0)), Just(Exact::real(1)), Just(Exact::i()), Just(Exact::new(1, 1))]
}

/// Series with `ψ(0) ≠ 0`.
fn unit_series(order: usize) -> impl Strategy<Value = Series<Exact>> {
    (nonzero(), prop::collection::vec(scalar(), order))
        .prop_map(move |(c0, rest)| Series::new(std::iter::once(c0).chain(rest).collect(), order, ()))
}

/// Series with `φ(0) = 0`, `φ ≠ 0`.
fn vanishing_series(order: usize) -> impl Strategy<Value = Series<Exact>> {
    (1..=order.min(3), unit_series(order))
        .prop_map(move |(ell, u)| Series::new(u.to_poly().shift_up(ell).into_coeffs(), order, ()))
}

fn approx(p: &Poly<Exact>) -> Poly<Approx> {
    p.to_approx(PREC)
}

fn ax(x: &Exact) -> Approx {
    Approx::from_exact(x, PREC)
}

/// `‖float − exact‖ ≤ tol · max(‖exact‖, tiny)` in the unit-disk majorant.
fn close(float: &Poly<Approx>, exact: &Poly<Exact>, tol: f64) -> bool {
    let e = approx(exact);
    let diff = (float - &e).norm_upper(&Disk::unit()).to_f64();
    let scale = e.norm_upper(&Disk::unit()).to_f64();
    diff <= tol * scale.max(f64::MIN_POSITIVE)
}

fn scalar_close(float: &Approx, exact: &Exact, tol: f64) -> bool {
    let (fr, fi) = float.to_c64();
    let (er, ei) = ax(exact).to_c64();
    let diff = (fr - er).hypot(fi - ei);
    diff <= tol * er.hypot(ei).max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------------------
// Polynomials and series
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eval_is_linear(a in scalar(), p in poly(8), q in poly(8), z in scalar()) {
        let lhs = (&p.scale(&a) + &q).eval(&z);
        prop_assert_eq!(lhs, a.clone() * &p.eval(&z) + &q.eval(&z));
    }

    #[test]
    fn two_step_composition(p in poly(8), lambda in scalar(), b in scalar()) {
        let twice = p.compose_affine(&lambda, &b).compose_affine(&lambda, &b);
        let l2 = lambda.clone() * &lambda;
        let b2 = lambda * &b + &b;
        prop_assert_eq!(twice, p.compose_affine(&l2, &b2));
    }

    #[test]
    fn chain_rule(p in poly(8), lambda in scalar(), b in scalar()) {
        let lhs = p.compose_affine(&lambda, &b).derivative(1);
        let rhs = p.derivative(1).compose_affine(&lambda, &b).scale(&lambda);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn boundary_within_upper(p in poly(10), r in 1u32..=12, samples in 1usize..=80) {
        let disk = Disk::new(f64::from(r) / 4.0).unwrap();
        let upper = p.norm_upper(&disk);
        let boundary = p.norm_boundary(&disk, samples).unwrap();
        prop_assert!(boundary.total_cmp(&upper).is_le(), "{} > {}", boundary.to_f64(), upper.to_f64());
        let pf = approx(&p);
        prop_assert!(pf.norm_boundary(&disk, samples).unwrap().total_cmp(&pf.norm_upper(&disk)).is_le());
    }

    #[test]
    fn reciprocal_inverts(s in unit_series(8), k in 0usize..=8) {
        let inv = s.reciprocal(k).unwrap();
        prop_assert_eq!(s.mul_trunc(&inv, k), Series::one(k, ()));
    }

    #[test]
    fn parse_render_round_trip(p in poly(10)) {
        prop_assert_eq!(parse_poly(&render(&p)).unwrap(), p);
    }

    #[test]
    fn backends_agree(
        p in poly_within(10, 10),
        q in poly_within(10, 10),
        lambda in scalar_within(10).prop_filter("nonzero", |c| !c.is_zero()),
        b in scalar_within(10),
        z in scalar_within(10),
        m in 1usize..=2,
        n in 1usize..=3,
    ) {
        let (pf, qf, lf, bf) = (approx(&p), approx(&q), ax(&lambda), ax(&b));
        prop_assert!(scalar_close(&pf.eval(&ax(&z)), &p.eval(&z), 1e-9));
        prop_assert!(close(&pf.compose_affine(&lf, &bf), &p.compose_affine(&lambda, &b), 1e-9));
        prop_assert!(close(&pf.derivative(2), &p.derivative(2), 1e-9));
        prop_assert!(close(&pf.mul(&qf), &p.mul(&q), 1e-9));
        let t = OperatorSpec::t(lambda.clone(), b.clone());
        prop_assert!(close(&t.to_approx(PREC).apply(&pf), &t.apply(&p), 1e-9));
        prop_assert!(close(
            &power_closed_form(&lf, &bf, m, n, &pf).unwrap(),
            &power_closed_form(&lambda, &b, m, n, &p).unwrap(),
            1e-9,
        ));
        prop_assert!(close(&s_mn(m, n, &lf, &bf, &pf).unwrap(), &s_mn(m, n, &lambda, &b, &p).unwrap(), 1e-9));
        let disk = Disk::new(2.0).unwrap();
        prop_assert!(pf.norm_upper(&disk).rel_diff(&p.norm_upper(&disk)) <= 1e-9);
    }
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_twice_is_substitution(p in poly(8), lambda in scalar(), b in scalar()) {
        let c = OperatorSpec::c(lambda.clone(), b.clone());
        let l2 = lambda.clone() * &lambda;
        prop_assert_eq!(c.apply(&c.apply(&p)), p.compose_affine(&l2, &(lambda * &b + &b)));
    }

    #[test]
    fn closed_form_matches_iteration(
        p in poly(8), lambda in nonzero(), b in scalar(), m in 1usize..=3, n in 1usize..=5,
    ) {
        let zm = Series::new(Poly::monomial(Exact::real(1), m).into_coeffs(), m, ());
        let l = OperatorSpec::l(lambda.clone(), b.clone(), zm);
        prop_assert_eq!(power_closed_form(&lambda, &b, m, n, &p).unwrap(), l.iterate(n, &p));
    }

    #[test]
    fn commutation_identity(p in poly(8), lambda in nonzero(), b in scalar(), phi in unit_series(4)) {
        let lhs = OperatorSpec::l(lambda.clone(), b.clone(), phi.clone()).apply(&p);
        prop_assert_eq!(lhs, commute_rhs(&phi, &lambda, &b, &p).unwrap());
    }

    #[test]
    fn degree_law(p in poly(8), lambda in nonzero(), b in scalar(), phi in vanishing_series(5)) {
        let m = phi.vanish_order().unwrap();
        let image = OperatorSpec::l(lambda, b, phi).apply(&p);
        match p.degree().finite() {
            Some(d) if d >= m => prop_assert_eq!(image.degree(), Degree::Finite(d - m)),
            _ => prop_assert!(image.is_zero()),
        }
    }

    #[test]
    fn apply_is_linear(
        p in poly(8), q in poly(8), a in scalar(), lambda in nonzero(), b in scalar(),
        phi in unit_series(4), kind in 0usize..6,
    ) {
        let op = match kind {
            0 => OperatorSpec::d(()),
            1 => OperatorSpec::c(lambda, b),
            2 => OperatorSpec::t(lambda, b),
            3 => OperatorSpec::conv(phi),
            4 => OperatorSpec::l(lambda, b, phi),
            _ => OperatorSpec::psi_of_t(Series::new(phi.to_poly().shift_up(1).into_coeffs(), 5, ()), lambda, b),
        };
        let lhs = op.apply(&(&p.scale(&a) + &q));
        prop_assert_eq!(lhs, &op.apply(&p).scale(&a) + &op.apply(&q));
    }
}

// ---------------------------------------------------------------------------
// Right inverses
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn s_mn_round_trip_and_degree(
        p in poly(8), lambda in nonzero(), b in b_value(), m in 1usize..=3, n in 1usize..=6,
    ) {
        let s = s_mn(m, n, &lambda, &b, &p).unwrap();
        prop_assert_eq!(power_closed_form(&lambda, &b, m, n, &s).unwrap(), p.clone());
        match p.degree().finite() {
            Some(d) => prop_assert_eq!(s.degree(), Degree::Finite(d + m * n)),
            None => prop_assert!(s.is_zero()),
        }
    }

    #[test]
    fn kernel_delta_is_killed(
        lambda in nonzero(), b in b_value(), m in 1usize..=3, n in 1usize..=4, k in 0usize..=8,
    ) {
        let delta = kernel_delta(m, n, &lambda, &b, k).unwrap();
        prop_assert!(delta.degree() < Degree::Finite(m * n));
        prop_assert!(power_closed_form(&lambda, &b, m, n, &delta).unwrap().is_zero());
    }

    #[test]
    fn s_psi_lambda_g_round_trip(
        p in poly(8), psi in unit_series(6), mu in nonzero(), lambda in nonzero(), b in b_value(),
        use_t in any::<bool>(),
    ) {
        let g = if use_t { OperatorSpec::t(lambda, b) } else { OperatorSpec::d(()) };
        let s = s_psi_lambda_g(&psi, &mu, &g, &p).unwrap();
        prop_assert_eq!(s.degree(), p.degree());
        prop_assert_eq!(apply_psi_lambda_g(&psi, &mu, &g, &s).unwrap(), p);
    }

    #[test]
    fn f_n_round_trip(
        p in poly(6), phi in vanishing_series(4), lambda in nonzero(), b in b_value(), n in 1usize..=4,
    ) {
        let f = f_n(&phi, &lambda, &b, n, &p).unwrap();
        prop_assert_eq!(OperatorSpec::l(lambda, b, phi).iterate(n, &f), p);
    }

    #[test]
    fn psi_t_round_trip(
        p in poly(6), psi in vanishing_series(4), lambda in nonzero(), b in b_value(), n in 1usize..=4,
    ) {
        let s = right_inverse_psi_t(&psi, &lambda, &b, n, &p).unwrap();
        prop_assert_eq!(OperatorSpec::psi_of_t(psi, lambda, b).iterate(n, &s), p);
    }

    #[test]
    fn factored_route_agrees_with_series(
        p in poly(6), psi in unit_series(6), mu in nonzero(), lambda in nonzero(), b in b_value(),
        use_t in any::<bool>(),
    ) {
        let g = if use_t { OperatorSpec::t(lambda, b) } else { OperatorSpec::d(()) };
        let exact = s_psi_lambda_g(&psi, &mu, &g, &p).unwrap();
        let factored = s_psi_lambda_g_factored(&psi.to_approx(PREC), &ax(&mu), &g.to_approx(PREC), &approx(&p));
        prop_assert!(close(&factored.unwrap(), &exact, 1e-9));
    }

    #[test]
    fn condition_c_is_exact_for_every_family(
        p in poly(6), phi in vanishing_series(3), lambda in nonzero(), b in b_value(),
        kind in 0usize..4, n in 1usize..=4,
    ) {
        let op = match kind {
            0 => OperatorSpec::d(()),
            1 => OperatorSpec::t(lambda, b),
            2 => OperatorSpec::conv(phi),
            _ => OperatorSpec::psi_of_t(phi, lambda, b),
        };
        let inverse = RightInverse::for_operator(&op).unwrap();
        prop_assert_eq!(op.power(n, &inverse.apply(n, &p).unwrap()), p);
    }

    #[test]
    fn forward_orbit_terminates(
        p in poly(8), psi in vanishing_series(4), lambda in nonzero(), b in scalar(),
    ) {
        let op = OperatorSpec::psi_of_t(psi, lambda, b);
        let d = p.degree().finite().unwrap_or(0);
        prop_assert!(op.iterate(d + 1, &p).is_zero());
    }
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn wider_gaps_never_raise_tail_bounds(
        targets in prop::collection::vec(poly(3).prop_filter("nonzero", |p| !p.is_zero()), 2..=3),
        lambda in prop_oneof![Just(Exact::real(2)), Just(Exact::new(1, 1)), Just(Exact::ratio(3, 2))],
        b in b_value(),
        gap in 8usize..=16,
    ) {
        let op = OperatorSpec::t(lambda, b).to_approx(PREC);
        let targets: Vec<Poly<Approx>> = targets.iter().map(approx).collect();
        let disk = Disk::new(2.0).unwrap();
        let schedule = |g: usize| (1..=targets.len()).map(|k| k * g).collect::<Vec<_>>();
        let (_, _, narrow) = evaluate_schedule(&op, &targets, &schedule(gap), &disk).unwrap();
        let (_, _, wide) = evaluate_schedule(&op, &targets, &schedule(2 * gap), &disk).unwrap();
        for (w, n) in wide.iter().zip(&narrow) {
            prop_assert!(w.total_cmp(n).is_le(), "{} > {}", w.to_f64(), n.to_f64());
        }
    }
}
