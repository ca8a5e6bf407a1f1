//! Weight functions and weighted densities `g(x) = w(x) f(x) / E_f[w(X)]`.

use std::fmt;
use std::str::FromStr;

use crate::distributions::DistSpec;
use crate::error::{domain, Error, Result};
use crate::numerics::{integrate_positive_axis, Integrability};
use crate::scalar::Real;

/// Running-sum cap past which a dyadic-window integral is called divergent.
pub const DIVERGENCE_CAP: f64 = 1e12;

/// Anything usable as a sampling weight. Only `ln w` is required; every
/// consumer works on the log scale.
pub trait Weight<T: Real> {
    fn ln_weight(&self, x: T) -> T;

    fn weight(&self, x: T) -> T {
        self.ln_weight(x).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightFn<T> {
    /// `w(x) = x` (length bias).
    Identity,
    /// `w(x) = x^a e^(-x/b)`; `b` may be `+∞`.
    PowerExp { a: T, b: T },
    /// `w(x) = 1`.
    Unit,
}

impl<T: Real> WeightFn<T> {
    pub fn power_exp(a: T, b: T) -> Result<Self> {
        if !(a.is_finite() && a >= T::zero()) {
            return Err(domain(format!("power-exp exponent a must be finite and >= 0, got {a}")));
        }
        if !(b > T::zero()) || b.is_nan() {
            return Err(domain(format!("power-exp scale b must be positive (or inf), got {b}")));
        }
        Ok(WeightFn::PowerExp { a, b })
    }

    /// `(a, 1/b)` for the weight written as `x^a e^(-x/b)`.
    fn exponents(&self) -> (T, T) {
        match *self {
            WeightFn::Identity => (T::one(), T::zero()),
            WeightFn::PowerExp { a, b } => (a, b.recip()),
            WeightFn::Unit => (T::zero(), T::zero()),
        }
    }
}

impl<T: Real> Weight<T> for WeightFn<T> {
    fn ln_weight(&self, x: T) -> T {
        match *self {
            WeightFn::Identity => x.ln(),
            WeightFn::Unit => T::zero(),
            WeightFn::PowerExp { a, b } => {
                let pow = if a == T::zero() { T::zero() } else { a * x.ln() };
                pow - x / b
            }
        }
    }

    fn weight(&self, x: T) -> T {
        match *self {
            WeightFn::Identity => x,
            WeightFn::Unit => T::one(),
            WeightFn::PowerExp { .. } => self.ln_weight(x).exp(),
        }
    }
}

impl<T: Real, W: Weight<T> + ?Sized> Weight<T> for &W {
    fn ln_weight(&self, x: T) -> T {
        (**self).ln_weight(x)
    }
}

fn check_point<T: Real>(x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("weights are defined for finite x > 0, got {x}")))
    }
}

pub fn weight_eval<T: Real>(w: &WeightFn<T>, x: T) -> Result<T> {
    check_point(x)?;
    Ok(w.weight(x))
}

pub fn ln_weight_eval<T: Real>(w: &WeightFn<T>, x: T) -> Result<T> {
    check_point(x)?;
    Ok(w.ln_weight(x))
}

/// Base law `f`, its weight, and the normalised weighted law `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPair<T> {
    pub base: DistSpec<T>,
    pub weight: WeightFn<T>,
    /// `g` in closed form when the pair is one of the conjugate families.
    pub closed_form: Option<DistSpec<T>>,
    /// `E_f[w(X)]`, computed by quadrature.
    pub normalizer: T,
}

impl<T: Real> WeightedPair<T> {
    pub fn weighted_pdf(&self, x: T) -> T {
        if !(x > T::zero()) {
            return T::zero();
        }
        (self.weight.ln_weight(x) + self.base.ln_pdf(x) - self.normalizer.ln()).exp()
    }

    /// `g` as a [`DistSpec`] when available.
    pub fn weighted(&self) -> Option<DistSpec<T>> {
        self.closed_form
    }
}

/// Closed-form `g` for length-biased log-normals and power-exp weighted
/// gammas (rate convention: shape `α + a`, rate `β + 1/b`).
pub fn closed_form_weighted<T: Real>(f: &DistSpec<T>, w: &WeightFn<T>) -> Option<DistSpec<T>> {
    match (f, w) {
        (_, WeightFn::Unit) => Some(*f),
        (DistSpec::LogNormal { mu, sigma2 }, WeightFn::Identity) => {
            Some(DistSpec::LogNormal { mu: *mu + *sigma2, sigma2: *sigma2 })
        }
        (DistSpec::Gamma { shape, rate }, WeightFn::Identity | WeightFn::PowerExp { .. }) => {
            let (a, inv_b) = w.exponents();
            Some(DistSpec::Gamma { shape: *shape + a, rate: *rate + inv_b })
        }
        _ => None,
    }
}

pub fn make_weighted<T: Real>(f: DistSpec<T>, w: WeightFn<T>, tol: T) -> Result<WeightedPair<T>> {
    f.validate()?;
    let normalizer = if w == WeightFn::Unit {
        T::one()
    } else {
        let integrand = |x: T| (w.ln_weight(x) + f.ln_pdf(x)).exp();
        match integrate_positive_axis(integrand, tol, T::lit(DIVERGENCE_CAP)) {
            Integrability::Finite(q) if q.value > T::zero() => q.value,
            Integrability::Finite(q) => {
                return Err(Error::WeightingInfeasible(format!("E[w(X)] = {} is not positive", q.value)))
            }
            Integrability::Divergent { partial_sum } => {
                return Err(Error::WeightingInfeasible(format!("partial sums reached {partial_sum}")))
            }
        }
    };
    Ok(WeightedPair { base: f, weight: w, closed_form: closed_form_weighted(&f, &w), normalizer })
}

/// `∫ g(x) / w(x) dx` over `(0, ∞)`, or a divergence verdict.
pub fn check_integrability<T, G, W>(g: G, w: &W, tol: T) -> Integrability<T>
where
    T: Real,
    G: Fn(T) -> T,
    W: Weight<T> + ?Sized,
{
    check_integrability_with_cap(g, w, tol, T::lit(DIVERGENCE_CAP))
}

pub fn check_integrability_with_cap<T, G, W>(g: G, w: &W, tol: T, cap: T) -> Integrability<T>
where
    T: Real,
    G: Fn(T) -> T,
    W: Weight<T> + ?Sized,
{
    integrate_positive_axis(
        |x: T| {
            let gx = g(x);
            if gx == T::zero() {
                T::zero()
            } else {
                gx * (-w.ln_weight(x)).exp()
            }
        },
        tol,
        cap,
    )
}

impl<T: Real> FromStr for WeightFn<T> {
    type Err = Error;

    /// `unit`, `length`, or `powexp:a,b` (`b` may be `inf`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "unit" => return Ok(WeightFn::Unit),
            "length" | "identity" => return Ok(WeightFn::Identity),
            _ => {}
        }
        let args = s
            .strip_prefix("powexp:")
            .ok_or_else(|| domain(format!("weight `{s}` must be unit, length or powexp:a,b")))?;
        let (a, b) = args
            .split_once(',')
            .ok_or_else(|| domain(format!("weight `{s}` must be powexp:a,b")))?;
        let parse = |v: &str| v.trim().parse::<f64>().map(T::lit).map_err(|_| domain(format!("bad number `{v}` in `{s}`")));
        WeightFn::power_exp(parse(a)?, parse(b)?)
    }
}

impl<T: Real> fmt::Display for WeightFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFn::Identity => write!(f, "length"),
            WeightFn::Unit => write!(f, "unit"),
            WeightFn::PowerExp { a, b } => write!(f, "powexp:{a},{b}"),
        }
    }
}
