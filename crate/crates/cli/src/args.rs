use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug, Clone, Serialize)]
#[command(
    name = "hyperop",
    version,
    about = "Orbits, right inverses and hypercyclicity certificates for composition-differentiation operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Arithmetic backend.
    #[arg(long, value_enum, default_value_t = BackendArg::Exact, global = true)]
    pub backend: BackendArg,

    /// Float precision in bits.
    #[arg(long, env = "HYPEROP_PRECISION", default_value_t = 53, global = true)]
    pub precision: u32,

    /// Seed for randomized suites.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<String>,

    /// Report format; `orbit` defaults to csv, everything else to json.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Sweep a flag over values, e.g. `--grid lambda=1,2,i`. Repeat for a product grid.
    #[arg(long = "grid", value_name = "FLAG=V1,V2,...", global = true)]
    #[serde(skip)]
    pub grid: Vec<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendArg {
    Exact,
    Float,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Orbit norms of a polynomial under an operator.
    Orbit(OrbitArgs),
    /// Apply an operator (or its n-th power) to a polynomial.
    Apply(ApplyArgs),
    /// Right inverses and inverse expansions.
    Inverse(InverseArgs),
    /// Check the three conditions of the hypercyclicity criterion.
    Criterion(CriterionArgs),
    /// Build a polynomial whose orbit visits each target within ε.
    Synthesize(SynthesizeArgs),
    /// Orbit of ψ(T) for |λ| < 1 against the factorial envelope.
    Decay(DecayArgs),
    /// Coefficient bounds for inverse and power expansions.
    Bounds(BoundsArgs),
    /// Seeded sweep of the exact right-inverse identities.
    VerifyIdentities(IdentityArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Orbit(_) => "orbit",
            Command::Apply(_) => "apply",
            Command::Inverse(_) => "inverse",
            Command::Criterion(_) => "criterion",
            Command::Synthesize(_) => "synthesize",
            Command::Decay(_) => "decay",
            Command::Bounds(_) => "bounds",
            Command::VerifyIdentities(_) => "verify-identities",
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OpArgs {
    /// Operator: D, C, T, conv, L or psiT.
    #[arg(long, default_value = "T")]
    pub op: String,

    /// λ, e.g. 2, 1/2, 1+i or 0.5.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,

    /// b.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,

    /// φ for conv and L, as a polynomial in z.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,

    /// ψ for psiT, as a polynomial in z.
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<String>,

    /// Operator as JSON, inline or `@path`; replaces the flags above.
    #[arg(long, value_name = "JSON")]
    pub op_json: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PolyArgs {
    /// Polynomial, e.g. `z^3 - 1/2*z + i`.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Option<String>,

    /// Polynomial as JSON, inline or `@path`.
    #[arg(long, value_name = "JSON", conflicts_with = "poly")]
    pub poly_json: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub op: OpArgs,
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Number of steps after n = 0.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Boundary samples; default 16·(deg+1)+32.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ApplyArgs {
    #[command(flatten)]
    pub op: OpArgs,
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Power of the operator.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InverseKind {
    /// The family attached to `--op`.
    Auto,
    /// S_{m,n}, right inverse of the n-th power of f ↦ f^{(m)}(λz+b).
    Smn,
    /// S_{ψ(μG)} with G given by `--op`.
    Spsi,
    /// Coefficients of the n-th power of the inverse of ψ(G) on degree ≤ m.
    Expansion,
    /// F_n for L_{λ,b,φ}.
    Fn,
    /// Right inverse of ψ(T)^n.
    Psit,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct InverseArgs {
    #[command(flatten)]
    pub op: OpArgs,
    #[command(flatten)]
    pub poly: PolyArgs,
    #[arg(long, value_enum, default_value_t = InverseKind::Auto)]
    pub kind: InverseKind,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// μ in S_{ψ(μG)}.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CriterionArgs {
    #[command(flatten)]
    pub op: OpArgs,
    /// Targets; monomials of degree ≤ --deg-max when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Vec<String>,
    #[arg(long, default_value_t = 3)]
    pub deg_max: usize,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    #[arg(long, default_value_t = 50)]
    pub n_max: usize,
    /// Expected inverse family (psiT or f_n); checked against the operator.
    #[arg(long)]
    pub inverse: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SynthesizeArgs {
    #[command(flatten)]
    pub op: OpArgs,
    /// Targets; monomials of degree ≤ --deg-max when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Vec<String>,
    #[arg(long, default_value_t = 2)]
    pub deg_max: usize,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    /// First index n_1; defaults to the gap.
    #[arg(long)]
    pub start: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DecayArgs {
    #[arg(long, default_value = "z", allow_hyphen_values = true)]
    pub psi: String,
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub b: String,
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Use the exponential series truncated at this order as f.
    #[arg(long, conflicts_with_all = ["poly", "poly_json"])]
    pub exp_order: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 5)]
    pub n_min: usize,
    #[arg(long, default_value_t = 30)]
    pub n_max: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BoundsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub psi: String,
    /// Degree d of the expansions.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    /// λ for the product bound (|λ| ≥ 1).
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    SmnRoundTrip,
    FnRoundTrip,
    PsiTRoundTrip,
    ClosedFormVsIteration,
    Commutation,
    KernelDelta,
    DegreeSmn,
    SpsiRoundTrip,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct IdentityArgs {
    /// Values of λ, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = ["2".to_string()], allow_hyphen_values = true)]
    pub lambda: Vec<String>,
    /// Values of b, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = ["1".to_string()], allow_hyphen_values = true)]
    pub b: Vec<String>,
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3])]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 8)]
    pub deg_max: usize,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    /// Random polynomials per cell.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Families to run; all when absent.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub family: Vec<FamilyArg>,
}
