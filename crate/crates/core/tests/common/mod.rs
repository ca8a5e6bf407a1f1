//! Independent numerical oracles for the integration tests. Nothing here
//! calls into the library's own quadrature or samplers.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

const DE_STEP: f64 = 1.0 / 64.0;
const DE_RANGE: f64 = 4.5;

/// Double-exponential (tanh-sinh) rule on `[a, b]`; endpoint singularities
/// are tolerated because nodes never touch the ends.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let n = (DE_RANGE / DE_STEP) as i64;
    let mut sum = 0.0;
    for j in -n..=n {
        let u = j as f64 * DE_STEP;
        let s = FRAC_PI_2 * u.sinh();
        let th = s.tanh();
        let w = FRAC_PI_2 * u.cosh() / (s.cosh() * s.cosh());
        if w == 0.0 {
            continue;
        }
        // distance to the nearer end, computed without cancellation
        let gap = half / ((2.0 * s.abs()).exp() + 1.0) * 2.0;
        let x = if th < 0.0 { a + gap } else { b - gap };
        let x = if j == 0 { mid } else { x };
        if x <= a || x >= b {
            continue;
        }
        sum += f(x) * w;
    }
    sum * half * DE_STEP
}

/// Exp-sinh rule on `(0, ∞)`.
pub fn exp_sinh(f: impl Fn(f64) -> f64) -> f64 {
    let n = (DE_RANGE / DE_STEP) as i64;
    let mut sum = 0.0;
    for j in -n..=n {
        let u = j as f64 * DE_STEP;
        let x = (FRAC_PI_2 * u.sinh()).exp();
        if !(x > 0.0 && x.is_finite()) {
            continue;
        }
        let v = f(x);
        if v == 0.0 {
            continue;
        }
        sum += v * FRAC_PI_2 * u.cosh() * x;
    }
    sum * DE_STEP
}

/// `q0` for an observed lifetime as the raw double integral over `(c, k)`.
pub fn q0_observed_oracle(t: f64, nu: f64, phi: f64, gamma: f64) -> f64 {
    let inner = |c: f64| {
        exp_sinh(|k| {
            let ln_tc = c * t.ln();
            let log1p = if ln_tc > 0.0 { ln_tc + (-ln_tc).exp().ln_1p() } else { ln_tc.exp().ln_1p() };
            let ln_pdf = c.ln() + k.ln() + (c - 1.0) * t.ln() - (k + 1.0) * log1p;
            (ln_pdf - k / gamma).exp()
        })
    };
    nu / (phi * gamma) * tanh_sinh(inner, 0.0, phi)
}

/// `q0` for a right-censored lifetime as the raw double integral.
pub fn q0_censored_oracle(t: f64, nu: f64, phi: f64, gamma: f64) -> f64 {
    let inner = |c: f64| {
        exp_sinh(|k| {
            let survival = (1.0 + t.powf(c)).powf(-k);
            survival * (-k / gamma).exp()
        })
    };
    nu / (phi * gamma) * tanh_sinh(inner, 0.0, phi)
}

/// Normalised cdf of an unnormalised density on `[a, b]`, tabulated with
/// tanh-sinh per cell on a uniform partition.
pub struct TabulatedCdf {
    pub edges: Vec<f64>,
    pub cum: Vec<f64>,
}

impl TabulatedCdf {
    pub fn new(density: impl Fn(f64) -> f64, a: f64, b: f64, cells: usize) -> Self {
        let edges: Vec<f64> = (0..=cells).map(|i| a + (b - a) * i as f64 / cells as f64).collect();
        let mut cum = vec![0.0];
        for w in edges.windows(2) {
            let m = tanh_sinh(&density, w[0], w[1]);
            cum.push(cum.last().unwrap() + m);
        }
        let total = *cum.last().unwrap();
        for v in &mut cum {
            *v /= total;
        }
        Self { edges, cum }
    }

    /// Cell probabilities.
    pub fn masses(&self) -> Vec<f64> {
        self.cum.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Cdf with linear interpolation inside a cell.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.edges[0] {
            return 0.0;
        }
        let n = self.edges.len() - 1;
        if x >= self.edges[n] {
            return 1.0;
        }
        let h = self.edges[1] - self.edges[0];
        let i = (((x - self.edges[0]) / h) as usize).min(n - 1);
        let f = (x - self.edges[i]) / h;
        self.cum[i] + f * (self.cum[i + 1] - self.cum[i])
    }
}

/// One-sample Kolmogorov-Smirnov distance.
pub fn ks(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks2(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Histogram L1 distance between a sample and cell masses on `edges`.
pub fn histogram_l1(sample: &[f64], edges: &[f64], masses: &[f64]) -> f64 {
    let mut counts = vec![0usize; masses.len()];
    let h = edges[1] - edges[0];
    for &x in sample {
        let i = (((x - edges[0]) / h) as usize).min(masses.len() - 1);
        counts[i] += 1;
    }
    let n = sample.len() as f64;
    counts.iter().zip(masses).map(|(&c, &m)| (c as f64 / n - m).abs()).sum()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean of an autocorrelated series by batch means.
pub fn batch_means_se(xs: &[f64], batches: usize) -> f64 {
    let size = xs.len() / batches;
    let means: Vec<f64> = (0..batches).map(|b| mean(&xs[b * size..(b + 1) * size])).collect();
    let m = mean(&means);
    let var = means.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (var / batches as f64).sqrt()
}

pub fn normal_cdf(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-z / std::f64::consts::SQRT_2)
}

pub fn lognormal_cdf(x: f64, mu: f64, sigma2: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        normal_cdf((x.ln() - mu) / sigma2.sqrt())
    }
}

pub fn lognormal_pdf(x: f64, mu: f64, sigma2: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let z = x.ln() - mu;
    (-z * z / (2.0 * sigma2)).exp() / (x * (2.0 * std::f64::consts::PI * sigma2).sqrt())
}
