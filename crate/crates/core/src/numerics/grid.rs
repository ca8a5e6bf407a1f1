use rand::Rng;

use crate::distributions::open01;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Piecewise-linear inverse CDF of an unnormalised density tabulated on a
/// uniform grid (trapezoid cumulative, linear interpolation between nodes).
#[derive(Debug, Clone)]
pub struct GridInverseCdf<T> {
    nodes: Vec<T>,
    cumulative: Vec<T>,
}

impl<T: Real> GridInverseCdf<T> {
    pub fn new<F: FnMut(T) -> T>(mut density: F, lo: T, hi: T, n_grid: usize) -> Result<Self> {
        Self::build(&mut density, lo, hi, n_grid, false)
    }

    /// Same as [`GridInverseCdf::new`] but takes a log density; values are
    /// shifted by their maximum before exponentiation.
    pub fn from_log_density<F: FnMut(T) -> T>(log_density: F, lo: T, hi: T, n_grid: usize) -> Result<Self> {
        Self::build(log_density, lo, hi, n_grid, true)
    }

    fn build<F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, n_grid: usize, log_scale: bool) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) || n_grid < 2 {
            return Err(Error::DegenerateDensity(format!("bad grid ({lo}, {hi}) with {n_grid} nodes")));
        }
        let step = (hi - lo) / T::from_usize_lossy(n_grid - 1);
        let nodes: Vec<T> = (0..n_grid)
            .map(|i| if i == n_grid - 1 { hi } else { lo + step * T::from_usize_lossy(i) })
            .collect();
        let mut values: Vec<T> = nodes.iter().map(|&x| f(x)).collect();
        if log_scale {
            let shift = values.iter().copied().filter(|v| !v.is_nan()).fold(T::neg_infinity(), T::max);
            if !shift.is_finite() {
                return Err(Error::DegenerateDensity("log density has no finite maximum on the grid".into()));
            }
            for v in values.iter_mut() {
                *v = (*v - shift).exp();
            }
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= T::zero())) {
            return Err(Error::DegenerateDensity("density must be finite and nonnegative on the grid".into()));
        }
        let mut cumulative = Vec::with_capacity(n_grid);
        let mut acc = T::zero();
        cumulative.push(acc);
        for w in values.windows(2) {
            acc = acc + T::lit(0.5) * (w[0] + w[1]) * step;
            cumulative.push(acc);
        }
        if !(acc > T::zero()) {
            return Err(Error::DegenerateDensity("zero total mass".into()));
        }
        Ok(Self { nodes, cumulative })
    }

    pub fn total_mass(&self) -> T {
        *self.cumulative.last().expect("nonempty grid")
    }

    pub fn quantile(&self, u: T) -> T {
        let target = u * self.total_mass();
        let idx = self.cumulative.partition_point(|&c| c < target);
        if idx == 0 {
            return self.nodes[0];
        }
        if idx >= self.nodes.len() {
            return *self.nodes.last().expect("nonempty grid");
        }
        let (c0, c1) = (self.cumulative[idx - 1], self.cumulative[idx]);
        let (x0, x1) = (self.nodes[idx - 1], self.nodes[idx]);
        if c1 == c0 {
            return x0;
        }
        x0 + (x1 - x0) * (target - c0) / (c1 - c0)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        self.quantile(open01(rng))
    }
}

pub fn grid_inverse_cdf_sample<T, F, R>(unnorm_density: F, lo: T, hi: T, n_grid: usize, rng: &mut R) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
    R: Rng + ?Sized,
{
    Ok(GridInverseCdf::new(unnorm_density, lo, hi, n_grid)?.sample(rng))
}
