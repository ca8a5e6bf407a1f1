use rand::Rng;

use super::conditionals::{ln_q0_censored_log_time, ln_q0_observed_log_time};
use super::types::{draw_base_measure, ChainState};
use crate::distributions::open01;
use crate::scalar::Real;

/// Posterior-predictive density of a new observation given one state:
/// `[Σ_j n_j Burr(y | c*_j, k*_j) + ν λ0(y)] / (n + ν)` where `λ0` is the
/// base-measure predictive density.
pub fn predictive_density<T: Real>(state: &ChainState<T>, grid: &[T]) -> Vec<T> {
    let denom = T::from_usize_lossy(state.n()) + state.nu;
    grid.iter()
        .map(|&y| {
            let ln_y = y.ln();
            let mixture: T = state
                .clusters
                .iter()
                .map(|cl| T::from_usize_lossy(cl.size()) * cl.params.ln_pdf_log_time(ln_y).exp())
                .sum();
            let fresh = ln_q0_observed_log_time(ln_y, state.nu, state.phi, state.gamma).exp();
            (mixture + fresh) / denom
        })
        .collect()
}

/// Posterior-predictive survival function; same mixture with survival
/// masses.
pub fn predictive_survival<T: Real>(state: &ChainState<T>, grid: &[T]) -> Vec<T> {
    let denom = T::from_usize_lossy(state.n()) + state.nu;
    grid.iter()
        .map(|&y| {
            let ln_y = y.ln();
            let mixture: T = state
                .clusters
                .iter()
                .map(|cl| T::from_usize_lossy(cl.size()) * cl.params.ln_survival_log_time(ln_y).exp())
                .sum();
            let fresh = ln_q0_censored_log_time(ln_y, state.nu, state.phi, state.gamma).exp();
            ((mixture + fresh) / denom).min(T::one())
        })
        .collect()
}

/// One draw from the posterior predictive of the given state.
///
/// Heavy-tailed clusters (small `k`) can produce times outside the
/// representable range; those are clamped to the largest finite or
/// smallest positive value so the draw stays usable as a weight argument.
pub fn predictive_draw<T: Real, R: Rng + ?Sized>(state: &ChainState<T>, rng: &mut R) -> T {
    let n = T::from_usize_lossy(state.n());
    let u = open01::<T, _>(rng) * (n + state.nu);
    let mut acc = T::zero();
    let mut params = None;
    for cl in &state.clusters {
        acc = acc + T::from_usize_lossy(cl.size());
        if u < acc {
            params = Some(cl.params);
            break;
        }
    }
    let params = params.unwrap_or_else(|| draw_base_measure(state.phi, state.gamma, rng));
    params.sample_log_time(rng).exp().max(T::min_positive_value()).min(T::max_value())
}

/// Running sums of per-state predictive curves on a fixed grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictiveAccumulator<T> {
    pub grid: Vec<T>,
    pub density_sum: Vec<T>,
    pub survival_sum: Vec<T>,
    pub n_sweeps: usize,
}

impl<T: Real> PredictiveAccumulator<T> {
    pub fn new(grid: Vec<T>) -> Self {
        let n = grid.len();
        Self { grid, density_sum: vec![T::zero(); n], survival_sum: vec![T::zero(); n], n_sweeps: 0 }
    }

    pub fn add(&mut self, state: &ChainState<T>) {
        let g = predictive_density(state, &self.grid);
        let s = predictive_survival(state, &self.grid);
        for (acc, v) in self.density_sum.iter_mut().zip(g) {
            *acc = *acc + v;
        }
        for (acc, v) in self.survival_sum.iter_mut().zip(s) {
            *acc = *acc + v;
        }
        self.n_sweeps += 1;
    }

    /// Pools another accumulator on the same grid.
    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.grid.len(), other.grid.len(), "accumulators must share a grid");
        for (a, b) in self.density_sum.iter_mut().zip(&other.density_sum) {
            *a = *a + *b;
        }
        for (a, b) in self.survival_sum.iter_mut().zip(&other.survival_sum) {
            *a = *a + *b;
        }
        self.n_sweeps += other.n_sweeps;
    }

    fn average(&self, sums: &[T]) -> Vec<T> {
        let n = T::from_usize_lossy(self.n_sweeps.max(1));
        sums.iter().map(|&s| s / n).collect()
    }

    pub fn mean_density(&self) -> Vec<T> {
        self.average(&self.density_sum)
    }

    pub fn mean_survival(&self) -> Vec<T> {
        self.average(&self.survival_sum)
    }
}
