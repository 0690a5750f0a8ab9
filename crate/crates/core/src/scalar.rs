//! Complex scalars over two interchangeable backends.
//!
//! [`Exact`] is a pair of arbitrary-precision rationals and never rounds.
//! [`Approx`] is a pair of MPFR binary floats whose precision travels with
//! the value; binary operations run at the larger of the operand precisions.
//! Generic code is written against [`Coeff`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use rug::float::Round;
use rug::ops::{AddAssignRound, Pow};
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

/// Default float precision in bits (IEEE double).
pub const DEFAULT_PRECISION: u32 = 53;

/// Precision used when measuring exact values (moduli, boundary samples).
pub const MEASURE_PRECISION: u32 = 128;

/// λ-powers above this magnitude (log10) trigger a precision bump.
pub(crate) const PROMOTE_LOG10: f64 = 300.0;

/// Which arithmetic a value lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Backend {
    Exact,
    Float { precision: u32 },
}

impl Backend {
    pub fn float() -> Self {
        Backend::Float {
            precision: DEFAULT_PRECISION,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Backend::Exact)
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float { precision } => write!(f, "float({precision})"),
        }
    }
}

/// Field operations shared by both backends.
///
/// Constants are built from a context (`Ctx`): nothing for [`Exact`], the
/// precision in bits for [`Approx`].
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    type Ctx: Copy + fmt::Debug + PartialEq + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn default_ctx() -> Self::Ctx;
    fn backend_of(ctx: Self::Ctx) -> Backend;

    fn zero(ctx: Self::Ctx) -> Self;
    fn from_integer(n: &Integer, ctx: Self::Ctx) -> Self;
    fn from_rational(q: &Rational, ctx: Self::Ctx) -> Self;
    fn from_exact(x: &Exact, ctx: Self::Ctx) -> Self;

    /// Same value carried in another context (a no-op for exact values).
    fn recast(&self, ctx: Self::Ctx) -> Self;

    /// Context to compute in when intermediate magnitudes reach
    /// `10^log10_magnitude`.
    fn working_ctx(ctx: Self::Ctx, _log10_magnitude: f64) -> Self::Ctx {
        ctx
    }

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;

    /// Upper bound on |self|, rounded towards +∞.
    fn abs_upper(&self, prec: u32) -> Float;

    fn to_approx(&self, prec: u32) -> Approx;

    /// The exact value denoted (binary floats are dyadic rationals).
    fn to_exact(&self) -> Exact;

    /// Precision at which moduli and norms of values in `ctx` are measured.
    fn measure_precision(ctx: Self::Ctx) -> u32;

    fn one(ctx: Self::Ctx) -> Self {
        Self::from_integer(&Integer::from(1), ctx)
    }

    fn backend(&self) -> Backend {
        Self::backend_of(self.ctx())
    }

    fn mul_integer(self, n: &Integer) -> Self {
        let k = Self::from_integer(n, self.ctx());
        self * &k
    }

    fn div_integer(self, n: &Integer) -> Self {
        let k = Self::from_integer(n, self.ctx());
        self / &k
    }

    fn powu(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }

    /// Modulus for display and comparisons, rounded to nearest.
    fn abs_f64(&self) -> f64 {
        self.to_approx(MEASURE_PRECISION).abs().to_f64()
    }
}

// ---------------------------------------------------------------------------
// Exact
// ---------------------------------------------------------------------------

/// Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Exact {
    re: Rational,
    im: Rational,
}

fn rat_is_zero(q: &Rational) -> bool {
    q.cmp0() == Ordering::Equal
}

impl Exact {
    pub fn new(re: impl Into<Rational>, im: impl Into<Rational>) -> Self {
        Exact {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn real(re: impl Into<Rational>) -> Self {
        Exact::new(re, 0)
    }

    /// `num/den`; panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Exact::real(Rational::from((num, den)))
    }

    pub fn i() -> Self {
        Exact::new(0, 1)
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        rat_is_zero(&self.im)
    }

    pub fn conj(&self) -> Self {
        Exact {
            re: self.re.clone(),
            im: Rational::from(-&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Rational {
        Rational::from(self.re.square_ref()) + Rational::from(self.im.square_ref())
    }

    pub fn recip(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            return None;
        }
        if self.is_real() {
            return Some(Exact::real(Rational::from(self.re.recip_ref())));
        }
        let n = self.norm_sqr();
        Some(Exact {
            re: Rational::from(&self.re / &n),
            im: -Rational::from(&self.im / &n),
        })
    }

    /// Integer power with negative exponents allowed; `None` for `0^-k`.
    pub fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.powu(e as u64))
        } else {
            self.recip().map(|r| r.powu(e.unsigned_abs()))
        }
    }

    fn scale_real(mut self, q: &Rational) -> Self {
        self.re *= q;
        self.im *= q;
        self
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (rat_is_zero(&self.re), rat_is_zero(&self.im)) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}*i", self.im),
            (false, false) => write!(f, "({}+{}*i)", self.re, self.im),
        }
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl<'a> Add<&'a Exact> for Exact {
    type Output = Exact;
    fn add(mut self, rhs: &'a Exact) -> Exact {
        self += rhs;
        self
    }
}

impl<'a> AddAssign<&'a Exact> for Exact {
    fn add_assign(&mut self, rhs: &'a Exact) {
        self.re += &rhs.re;
        if !rat_is_zero(&rhs.im) {
            self.im += &rhs.im;
        }
    }
}

impl<'a> Sub<&'a Exact> for Exact {
    type Output = Exact;
    fn sub(mut self, rhs: &'a Exact) -> Exact {
        self -= rhs;
        self
    }
}

impl<'a> SubAssign<&'a Exact> for Exact {
    fn sub_assign(&mut self, rhs: &'a Exact) {
        self.re -= &rhs.re;
        if !rat_is_zero(&rhs.im) {
            self.im -= &rhs.im;
        }
    }
}

impl<'a> Mul<&'a Exact> for Exact {
    type Output = Exact;
    fn mul(self, rhs: &'a Exact) -> Exact {
        if rhs.is_real() {
            return self.scale_real(&rhs.re);
        }
        if self.is_real() {
            return rhs.clone().scale_real(&self.re);
        }
        let re = Rational::from(&self.re * &rhs.re) - Rational::from(&self.im * &rhs.im);
        let im = Rational::from(&self.re * &rhs.im) + Rational::from(&self.im * &rhs.re);
        Exact { re, im }
    }
}

impl<'a> Div<&'a Exact> for Exact {
    type Output = Exact;
    fn div(self, rhs: &'a Exact) -> Exact {
        if rhs.is_real() {
            assert!(!rat_is_zero(&rhs.re), "division by zero");
            let inv = Rational::from(rhs.re.recip_ref());
            return self.scale_real(&inv);
        }
        let inv = rhs.recip().expect("division by zero");
        self * &inv
    }
}

impl Coeff for Exact {
    type Ctx = ();

    fn ctx(&self) {}
    fn default_ctx() {}
    fn backend_of(_: ()) -> Backend {
        Backend::Exact
    }

    fn zero(_: ()) -> Self {
        Exact::default()
    }

    fn from_integer(n: &Integer, _: ()) -> Self {
        Exact::real(Rational::from(n))
    }

    fn from_rational(q: &Rational, _: ()) -> Self {
        Exact::real(q.clone())
    }

    fn from_exact(x: &Exact, _: ()) -> Self {
        x.clone()
    }

    fn recast(&self, _: ()) -> Self {
        self.clone()
    }

    fn is_zero(&self) -> bool {
        rat_is_zero(&self.re) && rat_is_zero(&self.im)
    }

    fn is_one(&self) -> bool {
        self.re == 1 && rat_is_zero(&self.im)
    }

    fn mul_integer(self, n: &Integer) -> Self {
        let mut out = self;
        out.re *= n;
        out.im *= n;
        out
    }

    fn div_integer(self, n: &Integer) -> Self {
        let mut out = self;
        out.re /= n;
        out.im /= n;
        out
    }

    fn abs_upper(&self, prec: u32) -> Float {
        if self.is_real() {
            return Float::with_val_round(prec, &Rational::from(self.re.abs_ref()), Round::Up).0;
        }
        let mut s = Float::with_val_round(prec, &self.norm_sqr(), Round::Up).0;
        s.sqrt_round(Round::Up);
        s
    }

    fn to_approx(&self, prec: u32) -> Approx {
        Approx::new(Float::with_val(prec, &self.re), Float::with_val(prec, &self.im))
    }

    fn to_exact(&self) -> Exact {
        self.clone()
    }

    fn measure_precision(_: ()) -> u32 {
        MEASURE_PRECISION
    }
}

// ---------------------------------------------------------------------------
// Approx
// ---------------------------------------------------------------------------

/// Complex binary float `re + im·i` at a per-value precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Approx {
    re: Float,
    im: Float,
}

impl Approx {
    pub fn new(re: Float, im: Float) -> Self {
        Approx { re, im }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Approx::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn precision(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Modulus rounded to nearest.
    pub fn abs(&self) -> Float {
        let p = self.precision();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    fn joint(&self, rhs: &Approx) -> u32 {
        self.precision().max(rhs.precision())
    }
}

impl fmt::Display for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_c64();
        if im == 0.0 {
            write!(f, "{re}")
        } else {
            write!(f, "({re}+{im}*i)")
        }
    }
}

impl Neg for Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        Approx {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl<'a> Add<&'a Approx> for Approx {
    type Output = Approx;
    fn add(mut self, rhs: &'a Approx) -> Approx {
        self += rhs;
        self
    }
}

impl<'a> AddAssign<&'a Approx> for Approx {
    fn add_assign(&mut self, rhs: &'a Approx) {
        let p = self.joint(rhs);
        self.re = Float::with_val(p, &self.re + &rhs.re);
        self.im = Float::with_val(p, &self.im + &rhs.im);
    }
}

impl<'a> Sub<&'a Approx> for Approx {
    type Output = Approx;
    fn sub(mut self, rhs: &'a Approx) -> Approx {
        self -= rhs;
        self
    }
}

impl<'a> SubAssign<&'a Approx> for Approx {
    fn sub_assign(&mut self, rhs: &'a Approx) {
        let p = self.joint(rhs);
        self.re = Float::with_val(p, &self.re - &rhs.re);
        self.im = Float::with_val(p, &self.im - &rhs.im);
    }
}

impl<'a> Mul<&'a Approx> for Approx {
    type Output = Approx;
    fn mul(self, rhs: &'a Approx) -> Approx {
        let p = self.joint(rhs);
        if rhs.im.is_zero() {
            return Approx {
                re: Float::with_val(p, &self.re * &rhs.re),
                im: Float::with_val(p, &self.im * &rhs.re),
            };
        }
        let re = Float::with_val(p, &self.re * &rhs.re) - Float::with_val(p, &self.im * &rhs.im);
        let im = Float::with_val(p, &self.re * &rhs.im) + Float::with_val(p, &self.im * &rhs.re);
        Approx { re, im }
    }
}

impl<'a> Div<&'a Approx> for Approx {
    type Output = Approx;
    fn div(self, rhs: &'a Approx) -> Approx {
        let p = self.joint(rhs);
        if rhs.im.is_zero() {
            return Approx {
                re: Float::with_val(p, &self.re / &rhs.re),
                im: Float::with_val(p, &self.im / &rhs.re),
            };
        }
        let den = Float::with_val(p, rhs.re.square_ref()) + Float::with_val(p, rhs.im.square_ref());
        let re = Float::with_val(p, &self.re * &rhs.re) + Float::with_val(p, &self.im * &rhs.im);
        let im = Float::with_val(p, &self.im * &rhs.re) - Float::with_val(p, &self.re * &rhs.im);
        Approx {
            re: re / &den,
            im: im / &den,
        }
    }
}

impl Coeff for Approx {
    type Ctx = u32;

    fn ctx(&self) -> u32 {
        self.precision()
    }

    fn default_ctx() -> u32 {
        DEFAULT_PRECISION
    }

    fn backend_of(precision: u32) -> Backend {
        Backend::Float { precision }
    }

    fn zero(prec: u32) -> Self {
        Approx::new(Float::new(prec), Float::new(prec))
    }

    fn from_integer(n: &Integer, prec: u32) -> Self {
        Approx::new(Float::with_val(prec, n), Float::new(prec))
    }

    fn from_rational(q: &Rational, prec: u32) -> Self {
        Approx::new(Float::with_val(prec, q), Float::new(prec))
    }

    fn from_exact(x: &Exact, prec: u32) -> Self {
        x.to_approx(prec)
    }

    fn recast(&self, prec: u32) -> Self {
        Approx::new(Float::with_val(prec, &self.re), Float::with_val(prec, &self.im))
    }

    fn working_ctx(prec: u32, log10_magnitude: f64) -> u32 {
        if log10_magnitude > PROMOTE_LOG10 {
            prec.saturating_mul(2)
        } else {
            prec
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_one(&self) -> bool {
        self.re == 1 && self.im.is_zero()
    }

    fn abs_upper(&self, prec: u32) -> Float {
        if self.im.is_zero() {
            return Float::with_val_round(prec, self.re.abs_ref(), Round::Up).0;
        }
        let mut s = Float::with_val_round(prec, self.re.square_ref(), Round::Up).0;
        let im2 = Float::with_val_round(prec, self.im.square_ref(), Round::Up).0;
        s.add_assign_round(&im2, Round::Up);
        s.sqrt_round(Round::Up);
        s
    }

    fn to_approx(&self, prec: u32) -> Approx {
        self.recast(prec)
    }

    fn to_exact(&self) -> Exact {
        let q = |x: &Float| x.to_rational().expect("finite float");
        Exact::new(q(&self.re), q(&self.im))
    }

    fn measure_precision(prec: u32) -> u32 {
        prec
    }
}

/// `|z|^e` as a decimal exponent, for precision decisions.
pub(crate) fn log10_abs_pow<S: Coeff>(z: &S, e: f64) -> f64 {
    let a = z.abs_f64();
    if a == 0.0 || e == 0.0 {
        0.0
    } else {
        a.log10().abs() * e
    }
}

/// Exact rational `2^e` or its reciprocal, used by tests and samplers.
pub fn pow2(e: i32) -> Rational {
    let two = Rational::from(2);
    if e >= 0 {
        two.pow(e as u32)
    } else {
        Rational::from(two.pow((-e) as u32).recip_ref())
    }
}

/// Converts any finite `f64` into the exact rational it denotes.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_f64(x)
}
