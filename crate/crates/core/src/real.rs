//! Non-negative reals produced by norm estimates.
//!
//! Orbit and right-inverse norms routinely leave the `f64` range (factorials
//! of several hundred against huge λ-powers), so they are kept as MPFR floats
//! and only narrowed for display.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::AddAssignRound;
use rug::Float;
use serde::{Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Real(Float);

impl Real {
    pub fn new(x: Float) -> Self {
        Real(x)
    }

    pub fn zero(prec: u32) -> Self {
        Real(Float::new(prec))
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        Real(Float::with_val(prec, x))
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// `log10` of the value; `-inf` for zero.
    pub fn log10(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        Float::with_val(64, self.0.log10_ref()).to_f64()
    }

    pub fn lt_f64(&self, eps: f64) -> bool {
        self.0 < eps
    }

    pub fn total_cmp(&self, other: &Real) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    /// |a − b| / max(|a|, |b|), zero when both vanish.
    pub fn rel_diff(&self, other: &Real) -> f64 {
        let scale = if self.0 > other.0 { &self.0 } else { &other.0 };
        if scale.is_zero() {
            return 0.0;
        }
        let p = self.0.prec().max(other.0.prec());
        let d = Float::with_val(p, &self.0 - &other.0).abs();
        Float::with_val(p, d / scale).to_f64()
    }

    /// Sum rounded towards +∞, at the widest input precision.
    pub fn sum_up<'a>(items: impl IntoIterator<Item = &'a Real>, prec: u32) -> Real {
        let mut acc = Float::new(prec);
        for x in items {
            acc.add_assign_round(&x.0, Round::Up);
        }
        Real(acc)
    }

    fn fits_f64(&self) -> bool {
        let f = self.0.to_f64();
        self.0.is_zero() || (f.is_normal() && f.is_finite())
    }
}

impl From<Float> for Real {
    fn from(x: Float) -> Self {
        Real(x)
    }
}

/// Shortest `f64` rendering when representable, otherwise 17 significant
/// digits in scientific notation.
impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.fits_f64() {
            write!(f, "{}", self.0.to_f64())
        } else {
            f.write_str(&self.0.to_string_radix(10, Some(17)))
        }
    }
}

/// JSON number when representable as a normal `f64`, otherwise a string in
/// scientific notation.
impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.fits_f64() {
            s.serialize_f64(self.0.to_f64())
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}
