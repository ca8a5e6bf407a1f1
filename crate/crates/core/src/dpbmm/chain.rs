use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gibbs::gibbs_sweep;
use super::predictive::{predictive_draw, PredictiveAccumulator};
use super::types::{ChainState, Hyperparams, SurvivalObservation};
use crate::error::{domain, Result};
use crate::scalar::Real;

/// Reproducible random source used for every chain.
pub type ChainRng = ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig<T> {
    pub n_iter: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub grid: Vec<T>,
    /// Posterior-predictive draws taken from each retained state.
    pub draws_per_sample: usize,
}

impl<T> ChainConfig<T> {
    /// 60 000 sweeps, 10 000 burn-in, every 10th state kept.
    pub fn long_run(seed: u64, grid: Vec<T>) -> Self {
        Self { n_iter: 60_000, burn_in: 10_000, thin: 10, seed, grid, draws_per_sample: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_iter <= self.burn_in {
            return Err(domain(format!("n_iter ({}) must exceed burn_in ({})", self.n_iter, self.burn_in)));
        }
        if self.thin == 0 {
            return Err(domain("thin must be at least 1"));
        }
        Ok(())
    }

    pub fn n_retained(&self) -> usize {
        (self.n_iter - self.burn_in) / self.thin
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow<T> {
    pub sweep: usize,
    pub nu: T,
    pub phi: T,
    pub gamma: T,
    pub n_clusters: usize,
}

#[derive(Debug, Clone)]
pub struct ChainOutput<T> {
    pub accumulator: PredictiveAccumulator<T>,
    pub traces: Vec<TraceRow<T>>,
    pub predictive_draws: Vec<T>,
    pub final_state: ChainState<T>,
}

impl<T: Real> ChainOutput<T> {
    pub fn n_clusters_trace(&self) -> Vec<usize> {
        self.traces.iter().map(|r| r.n_clusters).collect()
    }
}

/// Runs `n_iter` sweeps from the default initial state. After burn-in every
/// `thin`-th state feeds the predictive accumulator, the traces, and
/// `draws_per_sample` posterior-predictive draws.
pub fn run_chain<T: Real>(data: Vec<SurvivalObservation<T>>, hyper: Hyperparams<T>, config: &ChainConfig<T>) -> Result<ChainOutput<T>> {
    config.validate()?;
    let mut rng = ChainRng::seed_from_u64(config.seed);
    let mut state = ChainState::initialize(data, hyper, &mut rng)?;
    let mut accumulator = PredictiveAccumulator::new(config.grid.clone());
    let mut traces = Vec::with_capacity(config.n_retained());
    let mut predictive_draws = Vec::with_capacity(config.n_retained() * config.draws_per_sample);
    for sweep in 1..=config.n_iter {
        gibbs_sweep(&mut state, &mut rng)?;
        if sweep > config.burn_in && (sweep - config.burn_in).is_multiple_of(config.thin) {
            accumulator.add(&state);
            traces.push(TraceRow { sweep, nu: state.nu, phi: state.phi, gamma: state.gamma, n_clusters: state.n_clusters() });
            for _ in 0..config.draws_per_sample {
                predictive_draws.push(predictive_draw(&state, &mut rng));
            }
        }
    }
    Ok(ChainOutput { accumulator, traces, predictive_draws, final_state: state })
}
