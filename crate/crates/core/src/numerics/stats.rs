use crate::error::{domain, Result};
use crate::scalar::Real;

/// One-sample Kolmogorov–Smirnov distance of a sorted sample to `cdf`.
pub fn ks_statistic<T: Real, F: Fn(T) -> T>(sorted: &[T], cdf: F) -> T {
    let n = T::from_usize_lossy(sorted.len());
    sorted.iter().enumerate().fold(T::zero(), |d, (i, &x)| {
        let fx = cdf(x);
        let hi = T::from_usize_lossy(i + 1) / n - fx;
        let lo = fx - T::from_usize_lossy(i) / n;
        d.max(hi.abs()).max(lo.abs())
    })
}

/// Sorts a copy of `sample` and computes [`ks_statistic`].
pub fn ks_distance<T: Real, F: Fn(T) -> T>(sample: &[T], cdf: F) -> T {
    let mut v = sample.to_vec();
    sort_reals(&mut v);
    ks_statistic(&v, cdf)
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample<T: Real>(a: &[T], b: &[T]) -> T {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    sort_reals(&mut a);
    sort_reals(&mut b);
    let (na, nb) = (T::from_usize_lossy(a.len()), T::from_usize_lossy(b.len()));
    let (mut i, mut j) = (0, 0);
    let mut d = T::zero();
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((T::from_usize_lossy(i) / na - T::from_usize_lossy(j) / nb).abs());
    }
    d
}

pub fn sort_reals<T: Real>(v: &mut [T]) {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
}

pub fn harmonic_mean<T: Real>(xs: &[T]) -> Result<T> {
    if xs.is_empty() {
        return Err(domain("harmonic mean of an empty sample"));
    }
    let mut inv = T::zero();
    for &x in xs {
        if !(x > T::zero()) || !x.is_finite() {
            return Err(domain(format!("harmonic mean needs positive values, got {x}")));
        }
        inv = inv + x.recip();
    }
    Ok(T::from_usize_lossy(xs.len()) / inv)
}

/// Trapezoid rule over tabulated `(xs, ys)`.
pub fn trapezoid<T: Real>(xs: &[T], ys: &[T]) -> T {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| T::lit(0.5) * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

pub fn mean<T: Real>(xs: &[T]) -> T {
    xs.iter().copied().sum::<T>() / T::from_usize_lossy(xs.len())
}

/// Sample variance with the `n - 1` denominator.
pub fn variance<T: Real>(xs: &[T]) -> T {
    let m = mean(xs);
    xs.iter().map(|&x| (x - m) * (x - m)).sum::<T>() / T::from_usize_lossy(xs.len() - 1)
}

/// Linear-interpolation quantile (R type 7) of a sorted sample.
pub fn quantile_sorted<T: Real>(sorted: &[T], p: T) -> T {
    let h = (T::from_usize_lossy(sorted.len() - 1)) * p;
    let lo = h.floor().to_usize().unwrap_or(0).min(sorted.len() - 1);
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - T::from_usize_lossy(lo)) * (sorted[hi] - sorted[lo])
}
