//! Seeded sweep of the algebraic identities over a `(λ, b, m, n)` grid.
//!
//! Every family draws fresh random polynomials per cell and compares both
//! sides. In the exact backend the comparison is equality; in the float
//! backend it is a relative majorant residual on the unit disk.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::map_cells;
use crate::inverses::{apply_psi_lambda_g, f_n, kernel_delta, right_inverse_psi_t, s_mn, s_psi_lambda_g};
use crate::operators::{commute_rhs, power_closed_form, OperatorSpec};
use crate::poly::{int_poly, Degree, Disk, Poly};
use crate::report::Verdict;
use crate::sample::{cell_rng, random_poly, random_unit_series};
use crate::scalar::{Backend, Coeff, Exact};
use crate::series::Series;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// closed-form power ∘ `S_{m,n}` = id
    SmnRoundTrip,
    /// `L_φ^n ∘ F_n` = id
    FnRoundTrip,
    /// `ψ(T)^n ∘ S_{1,ℓn} S^n_{ξ(T)}` = id
    PsiTRoundTrip,
    /// closed-form power = n-fold application of `L_{λ,b,z^m}`
    ClosedFormVsIteration,
    /// `C_{λ,b} φ(D) = φ(λ^{-1}D) C_{λ,b}`
    Commutation,
    /// `deg Δ_{k,n} ≤ mn − 1` and the closed-form power kills it (always exact)
    KernelDelta,
    /// `deg S_{m,n} p = deg p + mn`
    DegreeSmn,
    /// `ψ(λG) ∘ S_{ψ(λG)}` = id and `deg S_{ψ(λG)} p = deg p`
    SpsiRoundTrip,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::SmnRoundTrip,
        Family::FnRoundTrip,
        Family::PsiTRoundTrip,
        Family::ClosedFormVsIteration,
        Family::Commutation,
        Family::KernelDelta,
        Family::DegreeSmn,
        Family::SpsiRoundTrip,
    ];

    fn stream(self) -> u64 {
        Family::ALL.iter().position(|&f| f == self).expect("listed") as u64
    }
}

#[derive(Clone, Debug)]
pub struct IdentityConfig {
    pub lambdas: Vec<Exact>,
    pub bs: Vec<Exact>,
    pub ms: Vec<usize>,
    pub n_max: usize,
    pub deg_max: usize,
    /// Random polynomials per cell.
    pub samples: usize,
    pub seed: u64,
    /// `φ` for the `F_n` round trip.
    pub phis: Vec<Series<Exact>>,
    /// `ψ` for the `ψ(T)` round trip.
    pub psis: Vec<Series<Exact>>,
    /// `φ` for the commutation identity.
    pub commute_phis: Vec<Series<Exact>>,
    /// Relative residual allowed in the float backend.
    pub float_tolerance: f64,
}

fn series(c: &[i64]) -> Series<Exact> {
    Series::exact_poly(&int_poly(c, ()), ())
}

impl IdentityConfig {
    /// `λ ∈ {1, 2, i, 1+i, 3/2, 1/2}`, `b ∈ {0, 1, i}`, `m ≤ 3`, `n ≤ 12`,
    /// degree ≤ 8, 20 samples per cell.
    pub fn standard(seed: u64) -> Self {
        Self::for_grid(
            vec![
                Exact::real(1),
                Exact::real(2),
                Exact::i(),
                Exact::new(1, 1),
                Exact::ratio(3, 2),
                Exact::ratio(1, 2),
            ],
            vec![Exact::real(0), Exact::real(1), Exact::i()],
            seed,
        )
    }

    pub fn for_grid(lambdas: Vec<Exact>, bs: Vec<Exact>, seed: u64) -> Self {
        IdentityConfig {
            lambdas,
            bs,
            ms: vec![1, 2, 3],
            n_max: 12,
            deg_max: 8,
            samples: 20,
            seed,
            phis: vec![series(&[0, 0, 1]), series(&[0, 1, 1]), series(&[0, 1, 0, 1])],
            psis: vec![series(&[0, 1]), series(&[0, 1, 1]), series(&[0, 0, 1, 1])],
            commute_phis: vec![series(&[0, 1]), series(&[0, 0, 1]), series(&[1, 1]), series(&[0, 1, 1])],
            float_tolerance: 1e-8,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub family: Family,
    pub cells: usize,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub backend: Backend,
    pub seed: u64,
    pub families: Vec<FamilyReport>,
    pub verdict: Verdict,
}

impl IdentityReport {
    pub fn family(&self, f: Family) -> Option<&FamilyReport> {
        self.families.iter().find(|r| r.family == f)
    }
}

struct Judge {
    exact: bool,
    tol: f64,
}

impl Judge {
    fn same<S: Coeff>(&self, got: &Poly<S>, want: &Poly<S>) -> bool {
        if self.exact {
            return got == want;
        }
        let disk = Disk::unit();
        let diff = (got - want).norm_upper(&disk).to_f64();
        let scale = want.norm_upper(&disk).to_f64().max(got.norm_upper(&disk).to_f64());
        diff <= self.tol * scale.max(f64::MIN_POSITIVE)
    }

}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }
}

#[derive(Clone)]
struct Cell {
    lambda: Exact,
    b: Exact,
    m: usize,
    n: usize,
    series: Option<Series<Exact>>,
}

fn describe(c: &Cell) -> String {
    let mut s = format!("λ={} b={} m={} n={}", c.lambda, c.b, c.m, c.n);
    if let Some(x) = &c.series {
        s.push_str(&format!(" series={}", x.to_poly()));
    }
    s
}

fn cells_for(cfg: &IdentityConfig, family: Family) -> Vec<Cell> {
    let mut out = Vec::new();
    for lambda in &cfg.lambdas {
        if lambda.is_zero() {
            continue;
        }
        for b in &cfg.bs {
            let mut push = |m: usize, n: usize, series: Option<Series<Exact>>| {
                out.push(Cell {
                    lambda: lambda.clone(),
                    b: b.clone(),
                    m,
                    n,
                    series,
                })
            };
            match family {
                Family::SmnRoundTrip | Family::ClosedFormVsIteration | Family::KernelDelta | Family::DegreeSmn => {
                    for &m in &cfg.ms {
                        for n in 1..=cfg.n_max {
                            push(m, n, None);
                        }
                    }
                }
                Family::FnRoundTrip => {
                    for phi in &cfg.phis {
                        for n in 1..=cfg.n_max {
                            push(phi.vanish_order().unwrap_or(0), n, Some(phi.clone()));
                        }
                    }
                }
                Family::PsiTRoundTrip => {
                    for psi in &cfg.psis {
                        for n in 1..=cfg.n_max {
                            push(psi.vanish_order().unwrap_or(0), n, Some(psi.clone()));
                        }
                    }
                }
                Family::Commutation => {
                    for phi in &cfg.commute_phis {
                        push(0, 0, Some(phi.clone()));
                    }
                }
                Family::SpsiRoundTrip => push(0, 0, None),
            }
        }
    }
    out
}

fn run_cell<S: Coeff>(cfg: &IdentityConfig, family: Family, index: usize, cell: &Cell, ctx: S::Ctx, judge: &Judge) -> Result<Tally> {
    let mut rng = cell_rng(cfg.seed, family.stream(), index as u64);
    let lift = |x: &Exact| S::from_exact(x, ctx);
    let lambda = lift(&cell.lambda);
    let b = lift(&cell.b);
    let (m, n) = (cell.m, cell.n);
    let lift_series = |s: &Series<Exact>| {
        let coeffs: Vec<S> = s.coeffs().iter().map(lift).collect();
        Series::new(coeffs, s.order(), ctx)
    };
    let mut tally = Tally::default();
    if family == Family::KernelDelta {
        // Δ_{k,n} is a difference of nearly equal polynomials; it is checked
        // on the exact values of λ and b whatever the backend.
        let (lambda, b) = (lambda.to_exact(), b.to_exact());
        for k in 0..=cfg.deg_max {
            let delta = kernel_delta(m, n, &lambda, &b, k)?;
            let low = delta.degree() < Degree::Finite(m * n);
            let killed = power_closed_form(&lambda, &b, m, n, &delta)?.is_zero();
            tally.record(low && killed, || format!("{} k={k}", describe(cell)));
        }
        return Ok(tally);
    }
    for _ in 0..cfg.samples {
        let p_exact = random_poly(&mut rng, cfg.deg_max);
        let p: Poly<S> = p_exact.map(lift);
        let ok = match family {
            Family::SmnRoundTrip => {
                let s = s_mn(m, n, &lambda, &b, &p)?;
                judge.same(&power_closed_form(&lambda, &b, m, n, &s)?, &p)
            }
            Family::DegreeSmn => {
                let s = s_mn(m, n, &lambda, &b, &p)?;
                s.degree().finite() == p.degree().finite().map(|d| d + m * n)
            }
            Family::ClosedFormVsIteration => {
                let mut zm = vec![S::zero(ctx); m];
                zm.push(S::one(ctx));
                let mono = Series::new(zm, m, ctx);
                let op = OperatorSpec::l(lambda.clone(), b.clone(), mono);
                let lifted = s_mn(m, n, &lambda, &b, &p)?;
                [p.clone(), lifted].iter().all(|q| {
                    power_closed_form(&lambda, &b, m, n, q).is_ok_and(|c| judge.same(&c, &op.iterate(n, q)))
                })
            }
            Family::FnRoundTrip => {
                let phi = lift_series(cell.series.as_ref().expect("φ"));
                let f = f_n(&phi, &lambda, &b, n, &p)?;
                let op = OperatorSpec::l(lambda.clone(), b.clone(), phi);
                judge.same(&op.iterate(n, &f), &p)
            }
            Family::PsiTRoundTrip => {
                let psi = lift_series(cell.series.as_ref().expect("ψ"));
                let s = right_inverse_psi_t(&psi, &lambda, &b, n, &p)?;
                let op = OperatorSpec::psi_of_t(psi, lambda.clone(), b.clone());
                judge.same(&op.iterate(n, &s), &p)
            }
            Family::Commutation => {
                let phi = lift_series(cell.series.as_ref().expect("φ"));
                let lhs = OperatorSpec::l(lambda.clone(), b.clone(), phi.clone()).apply(&p);
                judge.same(&lhs, &commute_rhs(&phi, &lambda, &b, &p)?)
            }
            Family::SpsiRoundTrip => {
                let psi = lift_series(&random_unit_series(&mut rng, 4));
                let mu = lift(&crate::sample::random_scalar(&mut rng));
                let mu = if mu.is_zero() { S::one(ctx) } else { mu };
                [OperatorSpec::t(lambda.clone(), b.clone()), OperatorSpec::d(ctx)].iter().all(|g| {
                    s_psi_lambda_g(&psi, &mu, g, &p).is_ok_and(|s| {
                        s.degree() == p.degree()
                            && apply_psi_lambda_g(&psi, &mu, g, &s).is_ok_and(|back| judge.same(&back, &p))
                    })
                })
            }
            Family::KernelDelta => unreachable!(),
        };
        tally.record(ok, || format!("{} p={}", describe(cell), p_exact));
    }
    Ok(tally)
}

/// Runs the selected families over the grid in `cfg`, cells in parallel.
pub fn run_identities<S: Coeff>(cfg: &IdentityConfig, ctx: S::Ctx, families: &[Family]) -> Result<IdentityReport> {
    let backend = S::backend_of(ctx);
    let judge = Judge {
        exact: backend.is_exact(),
        tol: cfg.float_tolerance,
    };
    let mut reports = Vec::new();
    for &family in families {
        let cells = cells_for(cfg, family);
        let results = map_cells(&cells, |i, c| run_cell::<S>(cfg, family, i, c, ctx, &judge));
        let mut report = FamilyReport {
            family,
            cells: cells.len(),
            checks: 0,
            failures: 0,
            first_failure: None,
        };
        for r in results {
            let t = r?;
            report.checks += t.checks;
            report.failures += t.failures;
            if report.first_failure.is_none() {
                report.first_failure = t.first_failure;
            }
        }
        reports.push(report);
    }
    if reports.iter().all(|r| r.checks == 0) {
        return Err(Error::InvalidArgument("identity grid is empty".into()));
    }
    let verdict = if reports.iter().all(|r| r.failures == 0) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(IdentityReport {
        backend,
        seed: cfg.seed,
        families: reports,
        verdict,
    })
}
