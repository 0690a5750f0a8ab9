//! Truncated power series `w_0 + w_1 z + ⋯ + w_K z^K`.
//!
//! Coefficients past the stored order are treated as zero whenever an
//! operation asks for a higher order, so a series built from a polynomial
//! behaves as that polynomial.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Approx, Coeff};

#[derive(Clone, Debug, PartialEq)]
pub struct Series<S> {
    /// Always `order + 1` entries.
    coeffs: Vec<S>,
}

impl<S: Coeff> Series<S> {
    /// Pads with zeros or truncates so that exactly `order + 1` terms remain.
    pub fn new(mut coeffs: Vec<S>, order: usize, ctx: S::Ctx) -> Self {
        coeffs.resize(order + 1, S::zero(ctx));
        Series { coeffs }
    }

    pub fn from_poly(p: &Poly<S>, order: usize, ctx: S::Ctx) -> Self {
        Series::new(p.coeffs().to_vec(), order, ctx)
    }

    /// Series of `p` with order equal to its degree (zero gives order 0).
    pub fn exact_poly(p: &Poly<S>, ctx: S::Ctx) -> Self {
        let order = p.degree().finite().unwrap_or(0);
        Series::from_poly(p, order, ctx)
    }

    pub fn one(order: usize, ctx: S::Ctx) -> Self {
        Series::new(vec![S::one(ctx)], order, ctx)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn ctx(&self) -> S::Ctx {
        self.coeffs[0].ctx()
    }

    /// `w_k`, zero beyond the stored order.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(|| S::zero(self.ctx()))
    }

    pub fn constant_term(&self) -> &S {
        &self.coeffs[0]
    }

    /// Smallest `k` with `w_k ≠ 0`; `None` for the zero series.
    pub fn vanish_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.vanish_order().is_none()
    }

    pub fn to_poly(&self) -> Poly<S> {
        Poly::new(self.coeffs.clone())
    }

    pub fn with_order(&self, order: usize) -> Self {
        Series::new(self.coeffs.clone(), order, self.ctx())
    }

    pub fn to_approx(&self, prec: u32) -> Series<Approx> {
        Series {
            coeffs: self.coeffs.iter().map(|c| c.to_approx(prec)).collect(),
        }
    }

    pub fn scale(&self, a: &S) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|c| c.clone() * a).collect(),
        }
    }

    /// `self / z^k`, dropping the first `k` terms (they must be zero).
    pub fn shift_down(&self, k: usize) -> Self {
        let ctx = self.ctx();
        let order = self.order().saturating_sub(k);
        Series::new(self.coeffs.iter().skip(k).cloned().collect(), order, ctx)
    }

    /// Cauchy product truncated at `order`.
    pub fn mul_trunc(&self, other: &Self, order: usize) -> Self {
        let ctx = self.ctx();
        let mut out = vec![S::zero(ctx); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                let t = a.clone() * b;
                out[i + j] += &t;
            }
        }
        Series { coeffs: out }
    }

    /// `t` with `self · t ≡ 1 mod z^{order+1}`.
    pub fn reciprocal(&self, order: usize) -> Result<Self> {
        let w0 = self.constant_term();
        if w0.is_zero() {
            return Err(Error::VanishesAtOrigin("series reciprocal"));
        }
        let ctx = self.ctx();
        let inv0 = S::one(ctx) / w0;
        let mut t: Vec<S> = Vec::with_capacity(order + 1);
        t.push(inv0.clone());
        for n in 1..=order {
            let mut acc = S::zero(ctx);
            for k in 1..=n.min(self.order()) {
                let w = &self.coeffs[k];
                if w.is_zero() {
                    continue;
                }
                let term = w.clone() * &t[n - k];
                acc += &term;
            }
            t.push(-(acc * &inv0));
        }
        Ok(Series { coeffs: t })
    }

    /// `self^n mod z^{order+1}` by repeated squaring.
    pub fn pow_trunc(&self, mut n: u64, order: usize) -> Self {
        let mut base = self.with_order(order);
        let mut acc = Series::one(order, self.ctx());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_trunc(&base, order);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_trunc(&base, order);
            }
        }
        acc
    }

    /// `Σ w_k μ^k z^k`, i.e. the series of `ψ(μ z)`.
    pub fn dilate(&self, mu: &S) -> Self {
        let mut pw = S::one(self.ctx());
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c.clone() * &pw;
                pw = pw.clone() * mu;
                v
            })
            .collect();
        Series { coeffs }
    }
}
