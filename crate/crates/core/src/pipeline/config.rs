use std::path::Path;

use serde::Deserialize;

use crate::dpbmm::{Hyperparams, SurvivalObservation};
use crate::error::{Error, Result};
use crate::weighted::WeightFn;

/// Evaluation grid. A grid starting at zero skips the origin, where the
/// predictive density of the fresh-cluster term is infinite: it becomes the
/// `n_points` right endpoints of an even partition of `[0, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, n_points: usize) -> Result<Self> {
        let g = Self { lo, hi, n_points };
        g.validate()?;
        Ok(g)
    }

    /// `[0, 1.5 max]` with 200 points.
    pub fn default_for(max_time: f64) -> Self {
        Self { lo: 0.0, hi: 1.5 * max_time, n_points: 200 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo >= 0.0 && self.lo < self.hi) {
            return Err(Error::Config(format!("grid needs 0 <= lo < hi, got {}:{}", self.lo, self.hi)));
        }
        if self.n_points < 2 {
            return Err(Error::Config(format!("grid needs at least 2 points, got {}", self.n_points)));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.n_points;
        if self.lo == 0.0 {
            (1..=n).map(|i| self.hi * i as f64 / n as f64).collect()
        } else {
            let step = (self.hi - self.lo) / (n - 1) as f64;
            (0..n).map(|i| if i + 1 == n { self.hi } else { self.lo + step * i as f64 }).collect()
        }
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;

    /// `lo:hi:n`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let bad = || Error::Config(format!("grid `{s}` must look like lo:hi:n"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo = parts[0].parse().map_err(|_| bad())?;
        let hi = parts[1].parse().map_err(|_| bad())?;
        let n = parts[2].parse().map_err(|_| bad())?;
        Self::new(lo, hi, n)
    }
}

/// Hyperparameters left as `None` fall back to the data-driven defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperOverrides {
    pub a_nu: Option<f64>,
    pub b_nu: Option<f64>,
    pub b_gamma: Option<f64>,
    pub b_phi: Option<f64>,
}

impl HyperOverrides {
    pub fn resolve(&self, data: &[SurvivalObservation<f64>]) -> Result<Hyperparams<f64>> {
        let base = Hyperparams::data_driven(data)?;
        Hyperparams::new(
            self.a_nu.unwrap_or(base.a_nu),
            self.b_nu.unwrap_or(base.b_nu),
            self.b_gamma.unwrap_or(base.b_gamma),
            self.b_phi.unwrap_or(base.b_phi),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub n_iter: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub hyper: HyperOverrides,
    pub weight: WeightFn<f64>,
    /// `None` means the default grid over the data range.
    pub grid: Option<GridSpec>,
    /// Input times are divided by this before fitting.
    pub time_scale: f64,
    /// `None` means Silverman's rule.
    pub bandwidth: Option<f64>,
    pub chains: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            n_iter: 6000,
            burn_in: 1000,
            thin: 5,
            hyper: HyperOverrides::default(),
            weight: WeightFn::Identity,
            grid: None,
            time_scale: 1.0,
            bandwidth: None,
            chains: 1,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    n_iter: Option<usize>,
    burn_in: Option<usize>,
    thin: Option<usize>,
    weight: Option<String>,
    time_scale: Option<f64>,
    bandwidth: Option<f64>,
    chains: Option<usize>,
    grid: Option<GridSpec>,
    hyper: Option<HyperOverrides>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_iter <= self.burn_in {
            return Err(Error::Config(format!("n_iter ({}) must exceed burn_in ({})", self.n_iter, self.burn_in)));
        }
        if self.thin == 0 {
            return Err(Error::Config("thin must be at least 1".into()));
        }
        if !(self.time_scale > 0.0 && self.time_scale.is_finite()) {
            return Err(Error::Config(format!("time_scale must be positive, got {}", self.time_scale)));
        }
        if let Some(h) = self.bandwidth {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::Config(format!("bandwidth must be positive, got {h}")));
            }
        }
        if self.chains == 0 {
            return Err(Error::Config("chains must be at least 1".into()));
        }
        if let Some(g) = &self.grid {
            g.validate()?;
        }
        Ok(())
    }

    /// Parses the TOML config format. Keys mirror the struct fields, with
    /// `[grid]` and `[hyper]` tables and `weight` written as on the command
    /// line (`unit`, `length`, `powexp:a,b`).
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut cfg = Self::default();
        if let Some(v) = file.seed {
            cfg.seed = v;
        }
        if let Some(v) = file.n_iter {
            cfg.n_iter = v;
        }
        if let Some(v) = file.burn_in {
            cfg.burn_in = v;
        }
        if let Some(v) = file.thin {
            cfg.thin = v;
        }
        if let Some(w) = file.weight {
            cfg.weight = w.parse()?;
        }
        if let Some(v) = file.time_scale {
            cfg.time_scale = v;
        }
        cfg.bandwidth = file.bandwidth;
        if let Some(v) = file.chains {
            cfg.chains = v;
        }
        cfg.grid = file.grid;
        if let Some(h) = file.hyper {
            cfg.hyper = h;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Grid in model units for a dataset whose largest model-unit time is
    /// `max_time`.
    pub fn model_grid(&self, max_time: f64) -> Vec<f64> {
        match &self.grid {
            Some(g) => g.points().into_iter().map(|x| x / self.time_scale).collect(),
            None => GridSpec::default_for(max_time).points(),
        }
    }
}
