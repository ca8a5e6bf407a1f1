use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use burrmix::pipeline::{
    cmd_debias, cmd_fit, cmd_kde, cmd_report, ingest_csv, simulate, write_dataset, Dataset, DebiasMode, GridSpec, RunConfig,
    Scenario,
};
use burrmix::{DistSpec, KdeVariant, WeightFn};
use clap::{Args, Parser, Subcommand};

/// Bayesian density estimation from weighted and censored samples.
#[derive(Parser)]
#[command(name = "burrmix", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a simulated dataset as `dataset.csv`.
    Simulate {
        /// lognormal-lb, gamma-exp or burr-censored[:rate]
        #[arg(long)]
        scenario: Scenario,
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Censoring rate for burr-censored (overrides any `:rate` suffix).
        #[arg(long)]
        censor_rate: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Fit the mixture; writes predictive.csv, traces.csv and summary.txt.
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// De-bias a sample; writes debiased.csv and debias_summary.txt.
    Debias {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "empirical")]
        mode: DebiasMode,
        /// Proposal count (default: the sample size in empirical mode,
        /// 5000 in posterior mode).
        #[arg(long)]
        proposals: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Kernel density estimate on the grid; writes kde.csv.
    Kde {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "classic")]
        variant: KdeVariant,
        #[command(flatten)]
        common: Common,
    },
    /// Summarise the artifacts in --out into report.txt.
    Report {
        /// Un-weighted truth, e.g. lognormal:0,0.5 or gamma:1,1.
        #[arg(long)]
        truth: Option<DistSpec<f64>>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// TOML file mirroring the run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    burnin: Option<usize>,
    #[arg(long)]
    thin: Option<usize>,
    /// unit, length or powexp:a,b
    #[arg(long)]
    weight: Option<WeightFn<f64>>,
    #[arg(long)]
    time_scale: Option<f64>,
    /// lo:hi:n
    #[arg(long)]
    grid: Option<GridSpec>,
    #[arg(long)]
    bandwidth: Option<f64>,
    #[arg(long)]
    chains: Option<usize>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.iters {
            cfg.n_iter = v;
        }
        if let Some(v) = self.burnin {
            cfg.burn_in = v;
        }
        if let Some(v) = self.thin {
            cfg.thin = v;
        }
        if let Some(v) = self.weight {
            cfg.weight = v;
        }
        if let Some(v) = self.time_scale {
            cfg.time_scale = v;
        }
        if let Some(v) = self.grid {
            cfg.grid = Some(v);
        }
        if let Some(v) = self.bandwidth {
            cfg.bandwidth = Some(v);
        }
        if let Some(v) = self.chains {
            cfg.chains = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn load(path: &Path, cfg: &RunConfig) -> Result<Dataset> {
    ingest_csv(path, cfg.time_scale).with_context(|| format!("reading {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { scenario, n, censor_rate, common } => {
            let cfg = common.config()?;
            let scenario = match (scenario, censor_rate) {
                (Scenario::BurrCensored { .. }, Some(r)) => Scenario::burr_censored(r)?,
                (s, _) => s,
            };
            let data = simulate(scenario, n, cfg.seed)?;
            std::fs::create_dir_all(&common.out).with_context(|| format!("creating {}", common.out.display()))?;
            let path = common.out.join("dataset.csv");
            let file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            write_dataset(file, &data, cfg.time_scale).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {} ({} observations, {} censored)", path.display(), data.len(), data.n_censored());
        }
        Command::Fit { data, common } => {
            let cfg = common.config()?;
            let data = load(&data, &cfg)?;
            let fit = cmd_fit(&data, &cfg, &common.out)?;
            println!("wrote fit artifacts to {} ({} grid points)", common.out.display(), fit.x.len());
        }
        Command::Debias { data, mode, proposals, common } => {
            let cfg = common.config()?;
            let data = load(&data, &cfg)?;
            let res = cmd_debias(&data, &cfg, mode, proposals, &common.out)?;
            println!("wrote {} de-biased values, acceptance rate {:.4}", res.sample.len(), res.acceptance_rate);
        }
        Command::Kde { data, variant, common } => {
            let cfg = common.config()?;
            let data = load(&data, &cfg)?;
            let res = cmd_kde(&data, &cfg, variant, &common.out)?;
            println!("wrote kde.csv (bandwidth {} in input units)", res.bandwidth * cfg.time_scale);
        }
        Command::Report { truth, common } => {
            let cfg = common.config()?;
            let text = cmd_report(&common.out, truth.as_ref(), cfg.weight)?;
            print!("{text}");
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    run(Cli::parse())
}
