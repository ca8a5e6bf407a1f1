//! Dirichlet-process mixture of Burr XII kernels for right-censored
//! lifetimes, fitted by Gibbs sampling.
//!
//! Base measure: `c ~ Uniform(0, φ)`, `k ~ Exponential(mean γ)`, with
//! hyperpriors `ν ~ Gamma(a_nu, b_nu)`, `γ ~ InvGamma(2, b_gamma)` and
//! `φ ~ Pareto(2, b_phi)`. Observed lifetimes contribute the Burr density,
//! censored ones the Burr survival function.

mod chain;
mod conditionals;
mod gibbs;
mod predictive;
mod types;

pub use chain::{run_chain, ChainConfig, ChainOutput, ChainRng, TraceRow};
pub use conditionals::{
    h_censored_c_log_density, h_observed_c_log_density, ln_q0_censored_log_time, ln_q0_observed_log_time, q0_censored,
    q0_observed, sample_h_censored, sample_h_censored_log_time, sample_h_observed, sample_h_observed_log_time, H_GRID_POINTS,
    H_SLICE_STEPS,
};
pub use gibbs::{
    assignment_probabilities, cluster_c_log_marginal, gibbs_sweep, nu_mixture_weight, sample_log_categorical, update_assignment,
    update_cluster_params, update_gamma, update_nu, update_phi,
};
pub use predictive::{predictive_density, predictive_draw, predictive_survival, PredictiveAccumulator};
pub use types::{draw_base_measure, ChainState, Cluster, Hyperparams, SurvivalObservation, PRIOR_SHAPE};
