//! Two-shape Burr XII law with unit scale:
//! `f(t) = c k t^(c-1) (1 + t^c)^-(k+1)`, `S(t) = (1 + t^c)^-k`.
//!
//! Everything is evaluated through `ln t` and `softplus(c ln t) = ln(1 + t^c)`
//! so extreme lifetimes neither overflow nor cancel.

use rand::Rng;
use rand_distr::Open01;

use crate::error::{domain, Result};
use crate::scalar::{softplus, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurrParams<T> {
    pub c: T,
    pub k: T,
}

impl<T: Real> BurrParams<T> {
    pub fn new(c: T, k: T) -> Result<Self> {
        if !(c.is_finite() && c > T::zero()) {
            return Err(domain(format!("Burr shape c must be positive and finite, got {c}")));
        }
        if !(k.is_finite() && k > T::zero()) {
            return Err(domain(format!("Burr shape k must be positive and finite, got {k}")));
        }
        Ok(Self { c, k })
    }

    /// ln(1 + t^c) given ln t.
    #[inline]
    pub fn log1p_tc(&self, ln_t: T) -> T {
        if ln_t == T::neg_infinity() {
            T::zero()
        } else {
            softplus(self.c * ln_t)
        }
    }

    /// Log density at `t = exp(ln_t)`.
    pub fn ln_pdf_log_time(&self, ln_t: T) -> T {
        if ln_t == T::neg_infinity() {
            return ln_pdf_at_zero(self);
        }
        self.c.ln() + self.k.ln() + (self.c - T::one()) * ln_t - (self.k + T::one()) * self.log1p_tc(ln_t)
    }

    /// Log survival `-k ln(1 + t^c)` at `t = exp(ln_t)`.
    #[inline]
    pub fn ln_survival_log_time(&self, ln_t: T) -> T {
        -self.k * self.log1p_tc(ln_t)
    }

    pub fn ln_pdf(&self, t: T) -> T {
        self.ln_pdf_log_time(t.ln())
    }

    pub fn pdf(&self, t: T) -> T {
        if t == T::zero() && self.c == T::one() {
            return self.k;
        }
        self.ln_pdf(t).exp()
    }

    pub fn survival(&self, t: T) -> T {
        self.ln_survival_log_time(t.ln()).exp()
    }

    pub fn cdf(&self, t: T) -> T {
        -self.ln_survival_log_time(t.ln()).exp_m1()
    }

    /// `ln Q(u)` for the quantile `Q(u) = ((1-u)^(-1/k) - 1)^(1/c)`.
    pub fn ln_quantile(&self, u: T) -> T {
        let a = -(-u).ln_1p() / self.k;
        // ln(e^a - 1) without overflowing e^a
        let ln_e = if a > T::lit(30.0) { a + (-(-a).exp()).ln_1p() } else { a.exp_m1().ln() };
        ln_e / self.c
    }

    pub fn quantile(&self, u: T) -> T {
        self.ln_quantile(u).exp()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        self.quantile(T::lit(rng.sample::<f64, _>(Open01)))
    }

    /// Draws `ln t`; stays finite where `t` itself would over- or underflow.
    pub fn sample_log_time<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        self.ln_quantile(T::lit(rng.sample::<f64, _>(Open01)))
    }
}

fn ln_pdf_at_zero<T: Real>(p: &BurrParams<T>) -> T {
    if p.c > T::one() {
        T::neg_infinity()
    } else if p.c == T::one() {
        p.k.ln()
    } else {
        T::infinity()
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if t.is_finite() && t >= T::zero() {
        Ok(())
    } else {
        Err(domain(format!("lifetime must be finite and nonnegative, got {t}")))
    }
}

pub fn burr_pdf<T: Real>(t: T, p: &BurrParams<T>) -> Result<T> {
    check_time(t)?;
    Ok(p.pdf(t))
}

pub fn burr_ln_pdf<T: Real>(t: T, p: &BurrParams<T>) -> Result<T> {
    check_time(t)?;
    Ok(p.ln_pdf(t))
}

pub fn burr_cdf<T: Real>(t: T, p: &BurrParams<T>) -> Result<T> {
    check_time(t)?;
    Ok(p.cdf(t))
}

pub fn burr_survival<T: Real>(t: T, p: &BurrParams<T>) -> Result<T> {
    check_time(t)?;
    Ok(p.survival(t))
}

pub fn burr_sample<T: Real, R: Rng + ?Sized>(p: &BurrParams<T>, rng: &mut R) -> T {
    p.sample(rng)
}
