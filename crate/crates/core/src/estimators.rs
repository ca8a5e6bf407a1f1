//! Reference kernel density estimators: the plain Gaussian KDE and the
//! harmonic-mean reweighted KDE for length-biased samples. Both are
//! truncated to `(0, ∞)` and renormalised there.

use std::fmt;
use std::str::FromStr;

use statrs::function::erf::erfc;

use crate::error::{domain, Error, Result};
use crate::numerics::{harmonic_mean, quantile_sorted, sort_reals, variance};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KdeVariant {
    Classic,
    Indirect,
}

impl FromStr for KdeVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "classic" => Ok(KdeVariant::Classic),
            "indirect" => Ok(KdeVariant::Indirect),
            other => Err(domain(format!("unknown KDE variant `{other}` (classic|indirect)"))),
        }
    }
}

impl fmt::Display for KdeVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KdeVariant::Classic => "classic",
            KdeVariant::Indirect => "indirect",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdeSpec<T> {
    pub bandwidth: T,
    pub variant: KdeVariant,
}

/// A fitted estimator: kernel centres, their weights (summing to one) and
/// the mass the truncated mixture keeps on `(0, ∞)`.
#[derive(Debug, Clone)]
pub struct Kde<T> {
    centres: Vec<T>,
    weights: Vec<T>,
    bandwidth: T,
    retained_mass: T,
}

fn std_normal_upper<T: Real>(z: T) -> T {
    // P(Z > -z) = Φ(z)
    T::lit(0.5 * erfc(-z.as_f64() / std::f64::consts::SQRT_2))
}

impl<T: Real> Kde<T> {
    pub fn new(sample: &[T], spec: KdeSpec<T>) -> Result<Self> {
        if sample.is_empty() {
            return Err(domain("kernel density estimate of an empty sample"));
        }
        let h = spec.bandwidth;
        if !(h > T::zero() && h.is_finite()) {
            return Err(domain(format!("bandwidth must be positive, got {h}")));
        }
        if sample.iter().any(|x| !x.is_finite()) {
            return Err(domain("sample contains non-finite values"));
        }
        let n = T::from_usize_lossy(sample.len());
        let weights: Vec<T> = match spec.variant {
            KdeVariant::Classic => vec![n.recip(); sample.len()],
            KdeVariant::Indirect => {
                let mu = harmonic_mean(sample)?;
                sample.iter().map(|&x| mu / (n * x)).collect()
            }
        };
        let retained_mass = sample.iter().zip(&weights).map(|(&x, &w)| w * std_normal_upper(x / h)).sum::<T>();
        if !(retained_mass > T::zero()) {
            return Err(Error::DegenerateSample("no kernel mass on (0, inf)".into()));
        }
        Ok(Self { centres: sample.to_vec(), weights, bandwidth: h, retained_mass })
    }

    /// Mixture value before truncation and renormalisation.
    pub fn raw_value(&self, x: T) -> T {
        let h = self.bandwidth;
        let norm = (T::lit(2.0) * T::PI()).sqrt() * h;
        self.centres
            .iter()
            .zip(&self.weights)
            .map(|(&c, &w)| {
                let z = (x - c) / h;
                w * (-T::lit(0.5) * z * z).exp() / norm
            })
            .sum()
    }

    pub fn eval(&self, x: T) -> T {
        if x < T::zero() {
            return T::zero();
        }
        self.raw_value(x) / self.retained_mass
    }

    pub fn eval_grid(&self, grid: &[T]) -> Vec<T> {
        grid.iter().map(|&x| self.eval(x)).collect()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn bandwidth(&self) -> T {
        self.bandwidth
    }
}

pub fn classic_kde<T: Real>(sample: &[T], h: T, x: T) -> Result<T> {
    Ok(Kde::new(sample, KdeSpec { bandwidth: h, variant: KdeVariant::Classic })?.eval(x))
}

pub fn indirect_kde<T: Real>(sample: &[T], h: T, x: T) -> Result<T> {
    if sample.iter().any(|&x| !(x > T::zero())) {
        return Err(domain("indirect estimator needs a strictly positive sample"));
    }
    Ok(Kde::new(sample, KdeSpec { bandwidth: h, variant: KdeVariant::Indirect })?.eval(x))
}

/// Silverman's rule `0.9 min(sd, IQR/1.34) n^(-1/5)`.
pub fn silverman_bandwidth<T: Real>(sample: &[T]) -> Result<T> {
    if sample.len() < 2 {
        return Err(Error::DegenerateSample("Silverman's rule needs at least two points".into()));
    }
    let sd = variance(sample).sqrt();
    let mut sorted = sample.to_vec();
    sort_reals(&mut sorted);
    let iqr = quantile_sorted(&sorted, T::lit(0.75)) - quantile_sorted(&sorted, T::lit(0.25));
    let spread = sd.min(iqr / T::lit(1.34));
    if !(spread > T::zero()) {
        return Err(Error::DegenerateSample(format!("zero spread (sd = {sd}, IQR = {iqr})")));
    }
    Ok(T::lit(0.9) * spread * T::from_usize_lossy(sample.len()).powf(T::lit(-0.2)))
}
