//! Quadrature, univariate samplers and distance statistics shared by the
//! model code and its tests.

mod grid;
mod quadrature;
mod slice;
mod stats;

pub use grid::{grid_inverse_cdf_sample, GridInverseCdf};
pub use quadrature::{integrate_finite, integrate_positive_axis, integrate_semiinfinite, Integrability, QuadResult, MAX_PANELS};
pub use slice::slice_sample;
pub use stats::{harmonic_mean, ks_distance, ks_statistic, ks_two_sample, mean, quantile_sorted, sort_reals, trapezoid, variance};
