//! Dense univariate polynomials with complex coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::{AddAssignRound, MulAssignRound};
use rug::{Float, Integer};
use serde::{Serialize, Serializer};

use crate::combinatorics::falling_factorial;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::scalar::{Approx, Coeff, Exact};

/// Polynomial degree; the zero polynomial has degree −∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Degree::NegInfinity => s.serialize_str("-inf"),
            Degree::Finite(d) => s.serialize_u64(*d as u64),
        }
    }
}

/// Closed disk `|z| ≤ R` centred at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Disk {
    radius: f64,
}

impl Disk {
    pub fn new(radius: f64) -> Result<Self> {
        if radius.is_finite() && radius > 0.0 {
            Ok(Disk { radius })
        } else {
            Err(Error::InvalidRadius(radius))
        }
    }

    pub fn unit() -> Self {
        Disk { radius: 1.0 }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Default sample count for [`Poly::norm_boundary`].
pub fn default_samples(degree: Degree) -> usize {
    16 * (degree.finite().map_or(0, |d| d + 1)) + 32
}

/// Coefficients `c_0..c_d` in ascending order; the leading one is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Coeff> Default for Poly<S> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<S: Coeff> Poly<S> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: S) -> Self {
        Poly::new(vec![c])
    }

    /// `c·z^k`.
    pub fn monomial(c: S, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![S::zero(c.ctx()); k];
        coeffs.push(c);
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&S> {
        self.coeffs.get(k)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn ctx(&self) -> Option<S::Ctx> {
        self.coeffs.first().map(Coeff::ctx)
    }

    pub fn map<T: Coeff>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_approx(&self, prec: u32) -> Poly<Approx> {
        self.map(|c| c.to_approx(prec))
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &S) -> S {
        let mut acc = S::zero(z.ctx());
        for c in self.coeffs.iter().rev() {
            acc = acc * z;
            acc += c;
        }
        acc
    }

    pub fn scale(&self, a: &S) -> Self {
        if a.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|c| c.clone() * a).collect())
    }

    /// `z^k · self`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let zero = S::zero(self.coeffs[0].ctx());
        let mut coeffs = vec![zero; k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// k-th derivative.
    pub fn derivative(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= k {
            return Poly::zero();
        }
        let coeffs = self.coeffs[k..]
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let j = (i + k) as u64;
                c.clone().mul_integer(&falling_factorial(j, k as u64))
            })
            .collect();
        Poly::new(coeffs)
    }

    /// `p(λz + b)`, by a Taylor shift `p(w + b)` followed by `w = λz`.
    pub fn compose_affine(&self, lambda: &S, b: &S) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut a = self.coeffs.clone();
        let n = a.len();
        if !b.is_zero() {
            for i in 0..n - 1 {
                for j in (i..n - 1).rev() {
                    let t = a[j + 1].clone() * b;
                    a[j] += &t;
                }
            }
        }
        if !lambda.is_one() {
            let mut pw = lambda.clone();
            for c in a.iter_mut().skip(1) {
                *c = c.clone() * &pw;
                pw = pw * lambda;
            }
        }
        Poly::new(a)
    }

    /// Rigorous majorant `Σ |c_k| R^k ≥ sup_{|z|≤R} |p(z)|`, rounded upward.
    pub fn norm_upper(&self, disk: &Disk) -> Real {
        let prec = self.measure_precision();
        let r = Float::with_val(prec, disk.radius());
        let mut acc = Float::new(prec);
        for c in self.coeffs.iter().rev() {
            acc.mul_assign_round(&r, Round::Up);
            acc.add_assign_round(&c.abs_upper(prec), Round::Up);
        }
        Real::new(acc)
    }

    /// max |p(R e^{iθ_j})| over `samples` equispaced angles starting at θ = 0.
    ///
    /// Quarter-turn angles use exact unit values. The result is capped by
    /// [`Poly::norm_upper`], which it can only exceed through rounding.
    pub fn norm_boundary(&self, disk: &Disk, samples: usize) -> Result<Real> {
        if samples == 0 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        let prec = self.measure_precision();
        if self.is_zero() {
            return Ok(Real::zero(prec));
        }
        let p = self.to_approx(prec);
        let radius = Float::with_val(prec, disk.radius());
        let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
        let mut best = Float::new(prec);
        for j in 0..samples {
            let (cos, sin) = unit_root(j, samples, &two_pi, prec);
            let z = Approx::new(Float::with_val(prec, &radius * &cos), Float::with_val(prec, &radius * &sin));
            let v = p.eval(&z).abs();
            if v > best {
                best = v;
            }
        }
        let upper = self.norm_upper(disk);
        if best.partial_cmp(upper.as_float()) == Some(Ordering::Greater) {
            return Ok(upper);
        }
        Ok(Real::new(best))
    }

    fn measure_precision(&self) -> u32 {
        S::measure_precision(self.ctx().unwrap_or_else(S::default_ctx))
    }

    /// Polynomial product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let ctx = self.coeffs[0].ctx();
        let mut out = vec![S::zero(ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = a.clone() * b;
                out[i + j] += &t;
            }
        }
        Poly::new(out)
    }
}

impl Poly<Exact> {
    /// Text form accepted back by [`crate::text::parse_poly`].
    pub fn render(&self) -> String {
        crate::text::render(self)
    }
}

fn unit_root(j: usize, n: usize, two_pi: &Float, prec: u32) -> (Float, Float) {
    if (4 * j).is_multiple_of(n) {
        let (c, s) = match (4 * j / n) % 4 {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        return (Float::with_val(prec, c), Float::with_val(prec, s));
    }
    let theta = Float::with_val(prec, two_pi * j as u32) / n as u32;
    let mut sin = theta;
    let mut cos = Float::new(prec);
    sin.sin_cos_mut(&mut cos);
    (cos, sin)
}

fn zip_with<S: Coeff>(a: &Poly<S>, b: &Poly<S>, sub: bool) -> Poly<S> {
    let (long, short, flip) = if a.coeffs.len() >= b.coeffs.len() {
        (a, b, false)
    } else {
        (b, a, true)
    };
    let mut out = long.coeffs.clone();
    if sub && flip {
        for c in out.iter_mut() {
            *c = -c.clone();
        }
    }
    for (i, c) in short.coeffs.iter().enumerate() {
        match (sub, flip) {
            (false, _) => out[i] += c,
            (true, false) => out[i] -= c,
            (true, true) => out[i] += c,
        }
    }
    Poly::new(out)
}

impl<S: Coeff> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        zip_with(self, rhs, false)
    }
}

impl<S: Coeff> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        zip_with(self, rhs, true)
    }
}

impl<S: Coeff> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<S: Coeff> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        Poly::mul(self, rhs)
    }
}

impl<S: Coeff + fmt::Display> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{k}")?,
            }
        }
        Ok(())
    }
}

/// `Σ_i coeffs[i] z^i` from integer coefficients, for tests and examples.
pub fn int_poly<S: Coeff>(coeffs: &[i64], ctx: S::Ctx) -> Poly<S> {
    Poly::new(coeffs.iter().map(|&c| S::from_integer(&Integer::from(c), ctx)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use rug::Rational;

    fn ex(coeffs: &[i64]) -> Poly<Exact> {
        int_poly(coeffs, ())
    }

    fn q(n: i64, d: i64) -> Exact {
        Exact::ratio(n, d)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(ex(&[0, 0, 1]).eval(&Exact::real(2)), Exact::real(4));
        assert_eq!(Poly::<Exact>::zero().eval(&Exact::new(3, 7)), Exact::real(0));
        // 4z²+4z+1 at i = 4i − 3
        assert_eq!(ex(&[1, 4, 4]).eval(&Exact::i()), Exact::new(-3, 4));
    }

    #[test]
    fn zero_has_negative_infinite_degree() {
        assert_eq!(Poly::<Exact>::zero().degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert_eq!(ex(&[0, 0, 0]).degree(), Degree::NegInfinity);
        assert_eq!(ex(&[1, 2, 0]).degree(), Degree::Finite(1));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(ex(&[0, 0, 0, 1]).derivative(1), ex(&[0, 0, 3]));
        assert_eq!(ex(&[7]).derivative(1), Poly::zero());
        assert_eq!(ex(&[0, 0, 0, 1]).derivative(3), ex(&[6]));
        assert_eq!(ex(&[0, 0, 0, 1]).derivative(4), Poly::zero());
    }

    #[test]
    fn compose_affine_examples() {
        let two = Exact::real(2);
        let one = Exact::real(1);
        assert_eq!(ex(&[0, 0, 1]).compose_affine(&two, &one), ex(&[1, 4, 4]));
        let p = ex(&[3, -1, 4, 1, 5]);
        assert_eq!(p.compose_affine(&one, &Exact::real(0)), p);
        let i = Exact::i();
        let got = ex(&[0, 1]).compose_affine(&i, &-i.clone());
        assert_eq!(got, Poly::new(vec![-Exact::i(), Exact::i()]));
    }

    #[test]
    fn norm_upper_examples() {
        let d2 = Disk::new(2.0).unwrap();
        let d1 = Disk::unit();
        assert_eq!(ex(&[0, 0, 1]).norm_upper(&d2).to_f64(), 4.0);
        assert_eq!(ex(&[-1, 1]).norm_upper(&d1).to_f64(), 2.0);
        let p = Poly::new(vec![q(0, 1), q(-1, 2), q(1, 4)]);
        assert_eq!(p.norm_upper(&d2).to_f64(), 2.0);
    }

    #[test]
    fn norm_boundary_examples() {
        let d2 = Disk::new(2.0).unwrap();
        for m in [1, 3, 7, 64] {
            assert_eq!(ex(&[0, 0, 1]).norm_boundary(&d2, m).unwrap().to_f64(), 4.0);
        }
        assert!(Poly::<Exact>::zero().norm_boundary(&d2, 5).unwrap().is_zero());
        assert_eq!(ex(&[-1, 1]).norm_boundary(&Disk::unit(), 2).unwrap().to_f64(), 2.0);
        assert!(ex(&[1]).norm_boundary(&d2, 0).is_err());
    }

    #[test]
    fn disk_rejects_bad_radius() {
        assert!(Disk::new(0.0).is_err());
        assert!(Disk::new(-1.0).is_err());
        assert!(Disk::new(f64::NAN).is_err());
    }

    #[test]
    fn default_sample_count() {
        assert_eq!(default_samples(Degree::Finite(3)), 96);
        assert_eq!(default_samples(Degree::NegInfinity), 32);
    }

    #[test]
    fn arithmetic() {
        let a = ex(&[1, 2, 3]);
        let b = ex(&[1, -2, -3]);
        assert_eq!(&a + &b, ex(&[2]));
        assert_eq!(&a - &a, Poly::zero());
        assert_eq!(&b - &a, ex(&[0, -4, -6]));
        assert_eq!(&ex(&[1, 1]) * &ex(&[-1, 1]), ex(&[-1, 0, 1]));
        assert_eq!(ex(&[1, 1]).shift_up(2), ex(&[0, 0, 1, 1]));
        let half = Exact::real(Rational::from((1, 2)));
        assert_eq!(ex(&[2, 4]).scale(&half), ex(&[1, 2]));
    }
}
