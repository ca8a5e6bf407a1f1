//! Bayesian nonparametric density estimation from weighted (size-biased)
//! and right-censored samples.
//!
//! The model is a Dirichlet-process mixture of Burr XII kernels fitted by a
//! Gibbs sampler. Draws from its posterior predictive are turned into draws
//! from the un-weighted law by an independence Metropolis-Hastings chain.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*F64`
//! aliases below fix the scalar for ordinary use.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod debias;
pub mod distributions;
pub mod dpbmm;
pub mod error;
pub mod estimators;
pub mod numerics;
pub mod pipeline;
pub mod scalar;
pub mod weighted;

pub use debias::{acceptance_prob, debias_stream, debias_stream_thinned, DebiasChain};
pub use distributions::{BurrParams, DistSpec};
pub use dpbmm::{run_chain, ChainConfig, ChainOutput, ChainState, Hyperparams, SurvivalObservation};
pub use error::{Error, Result};
pub use estimators::{classic_kde, indirect_kde, silverman_bandwidth, Kde, KdeSpec, KdeVariant};
pub use scalar::Real;
pub use weighted::{make_weighted, Weight, WeightFn, WeightedPair};

pub type BurrParamsF64 = BurrParams<f64>;
pub type DistSpecF64 = DistSpec<f64>;
pub type WeightFnF64 = WeightFn<f64>;
pub type WeightedPairF64 = WeightedPair<f64>;
pub type SurvivalObservationF64 = SurvivalObservation<f64>;
pub type HyperparamsF64 = Hyperparams<f64>;
pub type ChainStateF64 = ChainState<f64>;
pub type ChainConfigF64 = ChainConfig<f64>;
pub type ChainOutputF64 = ChainOutput<f64>;
pub type KdeF64 = Kde<f64>;
