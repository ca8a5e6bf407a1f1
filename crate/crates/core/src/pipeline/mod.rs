//! End-to-end workflows behind the command-line tool: configuration,
//! dataset ingestion and simulation, and the fit / de-bias / kde / report
//! commands with their on-disk artifacts.
//!
//! The pipeline works in `f64`. Input times are divided by the configured
//! time scale before modelling; written abscissae are multiplied back and
//! densities divided, so every artifact is in the units of the input.

mod commands;
mod config;
mod dataset;

pub use commands::{
    cmd_debias, cmd_fit, cmd_kde, cmd_report, l1_on_grid, read_columns, DebiasMode, DebiasResult, FitResult, KdeResult, BANNER,
    DEFAULT_POSTERIOR_PROPOSALS,
};
pub use config::{GridSpec, HyperOverrides, RunConfig};
pub use dataset::{censoring_rate_for, ingest_csv, ingest_reader, simulate, write_dataset, Dataset, Scenario};
