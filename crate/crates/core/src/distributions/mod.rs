//! Densities, distribution functions and samplers for every law the model
//! touches.
//!
//! Conventions used throughout the crate:
//! * `Gamma { shape, rate }` has density `rate^shape x^(shape-1) e^(-rate x) / Γ(shape)`.
//! * `InverseGamma { shape, scale }` is the law of `scale / Gamma(shape, rate 1)`.
//! * `Pareto { shape, scale }` has density `shape scale^shape / x^(shape+1)` on `x > scale`.
//! * `Exponential { mean }` has density `e^(-x/mean) / mean`.
//! * `LogNormal { mu, sigma2 }` is parameterised by the log-scale variance.

mod burr;
mod parse;

use rand::Rng;
use rand_distr::{Distribution, Open01, StandardNormal};
use statrs::function::{beta as sbeta, erf, gamma as sgamma};

pub use burr::{burr_cdf, burr_ln_pdf, burr_pdf, burr_sample, burr_survival, BurrParams};

use crate::error::{domain, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistSpec<T> {
    LogNormal { mu: T, sigma2: T },
    Gamma { shape: T, rate: T },
    InverseGamma { shape: T, scale: T },
    Pareto { shape: T, scale: T },
    Beta { alpha: T, beta: T },
    Uniform { lo: T, hi: T },
    Exponential { mean: T },
    BurrXII(BurrParams<T>),
}

fn positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive and finite, got {v}")))
    }
}

impl<T: Real> DistSpec<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DistSpec::LogNormal { mu, sigma2 } => {
                if !mu.is_finite() {
                    return Err(domain(format!("log-normal mu must be finite, got {mu}")));
                }
                positive("log-normal sigma2", sigma2)
            }
            DistSpec::Gamma { shape, rate } => {
                positive("gamma shape", shape)?;
                positive("gamma rate", rate)
            }
            DistSpec::InverseGamma { shape, scale } => {
                positive("inverse-gamma shape", shape)?;
                positive("inverse-gamma scale", scale)
            }
            DistSpec::Pareto { shape, scale } => {
                positive("pareto shape", shape)?;
                positive("pareto scale", scale)
            }
            DistSpec::Beta { alpha, beta } => {
                positive("beta alpha", alpha)?;
                positive("beta beta", beta)
            }
            DistSpec::Uniform { lo, hi } => {
                if lo.is_finite() && hi.is_finite() && lo < hi {
                    Ok(())
                } else {
                    Err(domain(format!("uniform needs finite lo < hi, got ({lo}, {hi})")))
                }
            }
            DistSpec::Exponential { mean } => positive("exponential mean", mean),
            DistSpec::BurrXII(p) => BurrParams::new(p.c, p.k).map(|_| ()),
        }
    }

    /// Validated constructor-style helper for call sites that build specs
    /// from user input.
    pub fn checked(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Log density; `-∞` outside the support.
    pub fn ln_pdf(&self, x: T) -> T {
        let ninf = T::neg_infinity();
        if x.is_nan() {
            return T::nan();
        }
        match *self {
            DistSpec::LogNormal { mu, sigma2 } => {
                if x <= T::zero() {
                    return ninf;
                }
                let z = x.ln() - mu;
                -z * z / (T::lit(2.0) * sigma2) - x.ln() - T::lit(0.5) * (T::lit(2.0) * T::PI() * sigma2).ln()
            }
            DistSpec::Gamma { shape, rate } => {
                if x < T::zero() {
                    return ninf;
                }
                let norm = shape * rate.ln() - T::lit(sgamma::ln_gamma(shape.as_f64()));
                if x == T::zero() {
                    return if shape < T::one() {
                        T::infinity()
                    } else if shape == T::one() {
                        norm
                    } else {
                        ninf
                    };
                }
                norm + (shape - T::one()) * x.ln() - rate * x
            }
            DistSpec::InverseGamma { shape, scale } => {
                if x <= T::zero() {
                    return ninf;
                }
                shape * scale.ln() - T::lit(sgamma::ln_gamma(shape.as_f64())) - (shape + T::one()) * x.ln() - scale / x
            }
            DistSpec::Pareto { shape, scale } => {
                if x < scale {
                    return ninf;
                }
                shape.ln() + shape * scale.ln() - (shape + T::one()) * x.ln()
            }
            DistSpec::Beta { alpha, beta } => {
                if x < T::zero() || x > T::one() {
                    return ninf;
                }
                let lb = T::lit(sbeta::ln_beta(alpha.as_f64(), beta.as_f64()));
                let term = |p: T, v: T| {
                    if p == T::one() {
                        T::zero()
                    } else {
                        (p - T::one()) * v.ln()
                    }
                };
                term(alpha, x) + term(beta, T::one() - x) - lb
            }
            DistSpec::Uniform { lo, hi } => {
                if x < lo || x > hi {
                    ninf
                } else {
                    -(hi - lo).ln()
                }
            }
            DistSpec::Exponential { mean } => {
                if x < T::zero() {
                    ninf
                } else {
                    -x / mean - mean.ln()
                }
            }
            DistSpec::BurrXII(p) => {
                if x < T::zero() {
                    ninf
                } else {
                    p.ln_pdf(x)
                }
            }
        }
    }

    pub fn pdf(&self, x: T) -> T {
        self.ln_pdf(x).exp()
    }

    /// Distribution function, clamped to `[0, 1]` outside the support.
    pub fn cdf(&self, x: T) -> T {
        let zero = T::zero();
        let one = T::one();
        if x.is_nan() {
            return T::nan();
        }
        if x == T::infinity() {
            return one;
        }
        match *self {
            DistSpec::LogNormal { mu, sigma2 } => {
                if x <= zero {
                    return zero;
                }
                let z = (x.ln() - mu) / (T::lit(2.0) * sigma2).sqrt();
                T::lit(0.5 * erf::erfc(-z.as_f64()))
            }
            DistSpec::Gamma { shape, rate } => {
                if x <= zero {
                    return zero;
                }
                T::lit(sgamma::gamma_lr(shape.as_f64(), (rate * x).as_f64()))
            }
            DistSpec::InverseGamma { shape, scale } => {
                if x <= zero {
                    return zero;
                }
                T::lit(sgamma::gamma_ur(shape.as_f64(), (scale / x).as_f64()))
            }
            DistSpec::Pareto { shape, scale } => {
                if x <= scale {
                    zero
                } else {
                    one - (scale / x).powf(shape)
                }
            }
            DistSpec::Beta { alpha, beta } => {
                if x <= zero {
                    zero
                } else if x >= one {
                    one
                } else {
                    T::lit(sbeta::beta_reg(alpha.as_f64(), beta.as_f64(), x.as_f64()))
                }
            }
            DistSpec::Uniform { lo, hi } => ((x - lo) / (hi - lo)).max(zero).min(one),
            DistSpec::Exponential { mean } => {
                if x <= zero {
                    zero
                } else {
                    -(-x / mean).exp_m1()
                }
            }
            DistSpec::BurrXII(p) => {
                if x <= zero {
                    zero
                } else {
                    p.cdf(x)
                }
            }
        }
    }

    pub fn ln_cdf(&self, x: T) -> T {
        self.cdf(x).ln()
    }

    pub fn mean(&self) -> T {
        let one = T::one();
        match *self {
            DistSpec::LogNormal { mu, sigma2 } => (mu + sigma2 / T::lit(2.0)).exp(),
            DistSpec::Gamma { shape, rate } => shape / rate,
            DistSpec::InverseGamma { shape, scale } => {
                if shape > one {
                    scale / (shape - one)
                } else {
                    T::infinity()
                }
            }
            DistSpec::Pareto { shape, scale } => {
                if shape > one {
                    shape * scale / (shape - one)
                } else {
                    T::infinity()
                }
            }
            DistSpec::Beta { alpha, beta } => alpha / (alpha + beta),
            DistSpec::Uniform { lo, hi } => (lo + hi) / T::lit(2.0),
            DistSpec::Exponential { mean } => mean,
            DistSpec::BurrXII(p) => {
                // k B(k - 1/c, 1 + 1/c), finite only when c k > 1
                if p.c * p.k <= one {
                    return T::infinity();
                }
                let (c, k) = (p.c.as_f64(), p.k.as_f64());
                T::lit(k * sbeta::beta(k - 1.0 / c, 1.0 + 1.0 / c))
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match *self {
            DistSpec::LogNormal { mu, sigma2 } => {
                let z: f64 = rng.sample(StandardNormal);
                (mu + sigma2.sqrt() * T::lit(z)).exp()
            }
            DistSpec::Gamma { shape, rate } => gamma_rate(shape, rate, rng),
            DistSpec::InverseGamma { shape, scale } => scale / gamma_rate(shape, T::one(), rng),
            DistSpec::Pareto { shape, scale } => scale * open01::<T, _>(rng).powf(-shape.recip()),
            DistSpec::Beta { alpha, beta } => {
                let d = rand_distr::Beta::new(alpha.as_f64(), beta.as_f64()).expect("validated beta");
                T::lit(d.sample(rng))
            }
            DistSpec::Uniform { lo, hi } => lo + (hi - lo) * open01::<T, _>(rng),
            DistSpec::Exponential { mean } => -mean * open01::<T, _>(rng).ln(),
            DistSpec::BurrXII(p) => p.sample(rng),
        }
    }
}

/// Uniform draw on the open interval (0, 1).
#[inline]
pub fn open01<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(Open01))
}

/// Gamma draw with shape/rate parameterisation.
pub fn gamma_rate<T: Real, R: Rng + ?Sized>(shape: T, rate: T, rng: &mut R) -> T {
    let d = rand_distr::Gamma::new(shape.as_f64(), 1.0).expect("validated gamma shape");
    T::lit(d.sample(rng)) / rate
}

/// Beta draw.
pub fn beta_draw<T: Real, R: Rng + ?Sized>(alpha: T, beta: T, rng: &mut R) -> T {
    let d = rand_distr::Beta::new(alpha.as_f64(), beta.as_f64()).expect("validated beta");
    T::lit(d.sample(rng))
}

pub fn sample<T: Real, R: Rng + ?Sized>(spec: &DistSpec<T>, rng: &mut R) -> Result<T> {
    spec.validate()?;
    Ok(spec.sample(rng))
}

pub fn pdf<T: Real>(spec: &DistSpec<T>, x: T) -> T {
    spec.pdf(x)
}

pub fn cdf<T: Real>(spec: &DistSpec<T>, x: T) -> T {
    spec.cdf(x)
}
