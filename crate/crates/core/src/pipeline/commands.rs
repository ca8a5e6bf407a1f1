use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::seq::IndexedRandom;
use rand::SeedableRng;

use super::config::RunConfig;
use super::dataset::Dataset;
use crate::debias::debias_stream;
use crate::distributions::DistSpec;
use crate::dpbmm::{run_chain, ChainConfig, ChainOutput, ChainRng, PredictiveAccumulator, TraceRow};
use crate::error::{domain, Error, Result};
use crate::estimators::{silverman_bandwidth, Kde, KdeSpec, KdeVariant};
use crate::numerics::{ks_distance, mean, quantile_sorted, sort_reals, trapezoid, variance};
use crate::weighted::{make_weighted, WeightFn};

pub const BANNER: &str = concat!("burrmix ", env!("CARGO_PKG_VERSION"));

/// Proposals used by posterior-mode de-biasing when none are requested.
pub const DEFAULT_POSTERIOR_PROPOSALS: usize = 5000;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv { path: path.to_path_buf(), source }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(io_err(path))
}

fn write_columns(path: &Path, header: &[&str], columns: &[&[f64]]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    let rows = columns.first().map_or(0, |c| c.len());
    for i in 0..rows {
        w.write_record(columns.iter().map(|c| c[i].to_string())).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Reads a numeric CSV whose header must equal `header`; returns columns.
pub fn read_columns(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    if !path.exists() {
        return Err(Error::MissingArtifact(path.to_path_buf()));
    }
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let found: Vec<String> = rdr.headers().map_err(csv_err(path))?.iter().map(str::to_owned).collect();
    if found != header {
        return Err(Error::Parse { path: path.to_path_buf(), line: 1, msg: format!("expected header `{}`", header.join(",")) });
    }
    let mut cols = vec![Vec::new(); header.len()];
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err(path))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        for (col, field) in cols.iter_mut().zip(rec.iter()) {
            let v = field.parse().map_err(|_| Error::Parse { path: path.to_path_buf(), line, msg: format!("bad number `{field}`") })?;
            col.push(v);
        }
    }
    Ok(cols)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))
}

/// Runs `cfg.chains` chains (concurrently when more than one) with seeds
/// `seed, seed + 1, ...`.
fn run_chains(data: &Dataset, cfg: &RunConfig, grid: &[f64], draws_per_sample: usize) -> Result<Vec<ChainOutput<f64>>> {
    cfg.validate()?;
    let hyper = cfg.hyper.resolve(&data.observations)?;
    let chain_cfg = |i: usize| ChainConfig {
        n_iter: cfg.n_iter,
        burn_in: cfg.burn_in,
        thin: cfg.thin,
        seed: cfg.seed.wrapping_add(i as u64),
        grid: grid.to_vec(),
        draws_per_sample,
    };
    if cfg.chains == 1 {
        return Ok(vec![run_chain(data.observations.clone(), hyper, &chain_cfg(0))?]);
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..cfg.chains)
            .map(|i| {
                let c = chain_cfg(i);
                let obs = data.observations.clone();
                s.spawn(move || run_chain(obs, hyper, &c))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("chain thread panicked")).collect()
    })
}

#[derive(Debug, Clone)]
pub struct FitResult {
    /// Grid in original units.
    pub x: Vec<f64>,
    pub g_hat: Vec<f64>,
    pub s_hat: Vec<f64>,
    pub traces: Vec<Vec<TraceRow<f64>>>,
}

fn back_transform(acc: &PredictiveAccumulator<f64>, scale: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let x = acc.grid.iter().map(|v| v * scale).collect();
    let g = acc.mean_density().into_iter().map(|v| v / scale).collect();
    (x, g, acc.mean_survival())
}

fn write_fit_dir(dir: &Path, acc: &PredictiveAccumulator<f64>, traces: Option<&[TraceRow<f64>]>, summary: &str, scale: f64) -> Result<()> {
    ensure_dir(dir)?;
    let (x, g, s) = back_transform(acc, scale);
    write_columns(&dir.join("predictive.csv"), &["x", "g_hat", "S_hat"], &[&x, &g, &s])?;
    if let Some(rows) = traces {
        let path = dir.join("traces.csv");
        let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
        w.write_record(["sweep", "nu", "phi", "gamma", "n_clusters"]).map_err(csv_err(&path))?;
        for r in rows {
            w.write_record([r.sweep.to_string(), r.nu.to_string(), r.phi.to_string(), r.gamma.to_string(), r.n_clusters.to_string()])
                .map_err(csv_err(&path))?;
        }
        w.flush().map_err(io_err(&path))?;
    }
    write_text(&dir.join("summary.txt"), summary)
}

fn fit_summary(data: &Dataset, cfg: &RunConfig, outputs: &[&ChainOutput<f64>]) -> Result<String> {
    let hyper = cfg.hyper.resolve(&data.observations)?;
    let rows: Vec<&TraceRow<f64>> = outputs.iter().flat_map(|o| o.traces.iter()).collect();
    let col = |f: fn(&TraceRow<f64>) -> f64| mean(&rows.iter().map(|r| f(r)).collect::<Vec<_>>());
    let mut s = String::new();
    writeln!(s, "{BANNER}").unwrap();
    writeln!(s, "data: {}", data.provenance).unwrap();
    writeln!(s, "observations: {} ({} censored)", data.len(), data.n_censored()).unwrap();
    writeln!(s, "time_scale: {}", cfg.time_scale).unwrap();
    writeln!(s, "chains: {}", outputs.len()).unwrap();
    writeln!(s, "seed: {}", cfg.seed).unwrap();
    writeln!(s, "sweeps: {} (burn-in {}, thin {})", cfg.n_iter, cfg.burn_in, cfg.thin).unwrap();
    writeln!(s, "retained states: {}", rows.len()).unwrap();
    writeln!(s, "hyperparameters: a_nu = {}, b_nu = {}, b_gamma = {}, b_phi = {}", hyper.a_nu, hyper.b_nu, hyper.b_gamma, hyper.b_phi)
        .unwrap();
    if !rows.is_empty() {
        writeln!(s, "posterior mean nu: {:.6}", col(|r| r.nu)).unwrap();
        writeln!(s, "posterior mean phi: {:.6}", col(|r| r.phi)).unwrap();
        writeln!(s, "posterior mean gamma: {:.6}", col(|r| r.gamma)).unwrap();
        writeln!(s, "posterior mean clusters: {:.6}", col(|r| r.n_clusters as f64)).unwrap();
        let max_k = rows.iter().map(|r| r.n_clusters).max().unwrap_or(0);
        writeln!(s, "cluster count frequencies:").unwrap();
        for k in 1..=max_k {
            let count = rows.iter().filter(|r| r.n_clusters == k).count();
            if count > 0 {
                writeln!(s, "  {k}: {:.4}", count as f64 / rows.len() as f64).unwrap();
            }
        }
    }
    Ok(s)
}

/// Fits the mixture and writes `predictive.csv`, `traces.csv` and
/// `summary.txt` under `out`. With several chains each gets a `chain_<i>`
/// directory and the top level holds the pooled predictive curves.
pub fn cmd_fit(data: &Dataset, cfg: &RunConfig, out: &Path) -> Result<FitResult> {
    let grid = cfg.model_grid(data.max_time());
    let outputs = run_chains(data, cfg, &grid, 0)?;
    ensure_dir(out)?;
    let mut pooled = PredictiveAccumulator::new(grid);
    for o in &outputs {
        pooled.merge(&o.accumulator);
    }
    if outputs.len() == 1 {
        let summary = fit_summary(data, cfg, &[&outputs[0]])?;
        write_fit_dir(out, &pooled, Some(&outputs[0].traces), &summary, cfg.time_scale)?;
    } else {
        for (i, o) in outputs.iter().enumerate() {
            let mut one = cfg.clone();
            one.seed = cfg.seed.wrapping_add(i as u64);
            let summary = fit_summary(data, &one, &[o])?;
            write_fit_dir(&out.join(format!("chain_{}", i + 1)), &o.accumulator, Some(&o.traces), &summary, cfg.time_scale)?;
        }
        let summary = fit_summary(data, cfg, &outputs.iter().collect::<Vec<_>>())?;
        write_fit_dir(out, &pooled, None, &summary, cfg.time_scale)?;
    }
    let (x, g_hat, s_hat) = back_transform(&pooled, cfg.time_scale);
    Ok(FitResult { x, g_hat, s_hat, traces: outputs.into_iter().map(|o| o.traces).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DebiasMode {
    /// Proposals are the observed sample (resampled when more are asked for).
    Empirical,
    /// Proposals are posterior-predictive draws from the fitted chain.
    Posterior,
}

impl std::str::FromStr for DebiasMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "empirical" => Ok(DebiasMode::Empirical),
            "posterior" => Ok(DebiasMode::Posterior),
            other => Err(domain(format!("unknown de-bias mode `{other}` (empirical|posterior)"))),
        }
    }
}

impl std::fmt::Display for DebiasMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DebiasMode::Empirical => "empirical",
            DebiasMode::Posterior => "posterior",
        })
    }
}

#[derive(Debug, Clone)]
pub struct DebiasResult {
    /// De-biased chain path in original units.
    pub sample: Vec<f64>,
    pub acceptance_rate: f64,
}

/// Builds the proposal stream in model units.
fn proposals(data: &Dataset, cfg: &RunConfig, mode: DebiasMode, n: Option<usize>, rng: &mut ChainRng) -> Result<Vec<f64>> {
    match mode {
        DebiasMode::Empirical => {
            let times = data.times();
            match n {
                None => Ok(times),
                Some(m) if m == times.len() => Ok(times),
                Some(m) => Ok((0..m).map(|_| *times.choose(rng).expect("dataset is nonempty")).collect()),
            }
        }
        DebiasMode::Posterior => {
            let m = n.unwrap_or(DEFAULT_POSTERIOR_PROPOSALS);
            let per_chain_states = (cfg.n_iter - cfg.burn_in) / cfg.thin;
            let states = per_chain_states * cfg.chains;
            if states == 0 {
                return Err(Error::Config("the chain retains no states; lower burn_in or thin".into()));
            }
            let per_state = m.div_ceil(states);
            let outputs = run_chains(data, cfg, &[], per_state)?;
            let mut draws: Vec<f64> = outputs.into_iter().flat_map(|o| o.predictive_draws).collect();
            draws.truncate(m);
            Ok(draws)
        }
    }
}

/// De-biases under `cfg.weight` (applied in model units) and writes
/// `debiased.csv` and `debias_summary.txt`.
pub fn cmd_debias(data: &Dataset, cfg: &RunConfig, mode: DebiasMode, n_proposals: Option<usize>, out: &Path) -> Result<DebiasResult> {
    cfg.validate()?;
    if n_proposals == Some(0) {
        return Err(domain("need at least one proposal"));
    }
    let mut rng = ChainRng::seed_from_u64(cfg.seed);
    rng.set_stream(1);
    let props = proposals(data, cfg, mode, n_proposals, &mut rng)?;
    let (path, chain) = debias_stream(&props, cfg.weight, None, &mut rng)?;
    let sample: Vec<f64> = path.iter().map(|v| v * cfg.time_scale).collect();
    ensure_dir(out)?;
    write_columns(&out.join("debiased.csv"), &["x"], &[&sample])?;
    let mut s = String::new();
    writeln!(s, "{BANNER}").unwrap();
    writeln!(s, "data: {}", data.provenance).unwrap();
    writeln!(s, "mode: {mode}").unwrap();
    writeln!(s, "weight: {}", cfg.weight).unwrap();
    writeln!(s, "seed: {}", cfg.seed).unwrap();
    writeln!(s, "proposals: {}", chain.proposed_count()).unwrap();
    writeln!(s, "accepted: {}", chain.accepted_count()).unwrap();
    writeln!(s, "acceptance rate: {:.6}", chain.acceptance_rate()).unwrap();
    write_text(&out.join("debias_summary.txt"), &s)?;
    Ok(DebiasResult { sample, acceptance_rate: chain.acceptance_rate() })
}

#[derive(Debug, Clone)]
pub struct KdeResult {
    pub x: Vec<f64>,
    pub f_hat: Vec<f64>,
    /// Bandwidth in model units.
    pub bandwidth: f64,
}

/// Evaluates a kernel estimate of the sample on the config grid and writes
/// `kde.csv` with columns `x,f_hat`.
pub fn cmd_kde(data: &Dataset, cfg: &RunConfig, variant: KdeVariant, out: &Path) -> Result<KdeResult> {
    cfg.validate()?;
    let times = data.times();
    let h = match cfg.bandwidth {
        Some(h) => h / cfg.time_scale,
        None => silverman_bandwidth(&times)?,
    };
    let kde = Kde::new(&times, KdeSpec { bandwidth: h, variant })?;
    let grid = cfg.model_grid(data.max_time());
    let x: Vec<f64> = grid.iter().map(|v| v * cfg.time_scale).collect();
    let f_hat: Vec<f64> = kde.eval_grid(&grid).into_iter().map(|v| v / cfg.time_scale).collect();
    ensure_dir(out)?;
    write_columns(&out.join("kde.csv"), &["x", "f_hat"], &[&x, &f_hat])?;
    Ok(KdeResult { x, f_hat, bandwidth: h })
}

/// Trapezoid L1 distance between a curve on `x` and a density.
pub fn l1_on_grid(x: &[f64], y: &[f64], truth: impl Fn(f64) -> f64) -> f64 {
    let diff: Vec<f64> = x.iter().zip(y).map(|(&xi, &yi)| (yi - truth(xi)).abs()).collect();
    trapezoid(x, &diff)
}

fn describe(s: &mut String, label: &str, v: &[f64]) {
    let mut sorted = v.to_vec();
    sort_reals(&mut sorted);
    let q = |p: f64| quantile_sorted(&sorted, p);
    writeln!(s, "{label}: n = {}, mean = {:.6}, sd = {:.6}", v.len(), mean(v), variance(v).max(0.0).sqrt()).unwrap();
    writeln!(s, "{label}: quartiles = {:.6}, {:.6}, {:.6}", q(0.25), q(0.5), q(0.75)).unwrap();
}

/// Summarises the artifacts in `dir` into `report.txt`. With a truth law
/// `f` the weighted law `g` follows from `weight`; distances are reported
/// for the predictive density against `g`, the de-biased sample against
/// `f`, and the kernel estimate against `f`.
pub fn cmd_report(dir: &Path, truth: Option<&DistSpec<f64>>, weight: WeightFn<f64>) -> Result<String> {
    let pred = read_columns(&dir.join("predictive.csv"), &["x", "g_hat", "S_hat"])?;
    let optional = |name: &str, header: &[&str]| -> Result<Option<Vec<Vec<f64>>>> {
        let p: PathBuf = dir.join(name);
        if p.exists() {
            read_columns(&p, header).map(Some)
        } else {
            Ok(None)
        }
    };
    let traces = optional("traces.csv", &["sweep", "nu", "phi", "gamma", "n_clusters"])?;
    let debiased = optional("debiased.csv", &["x"])?;
    let kde = optional("kde.csv", &["x", "f_hat"])?;

    let (x, g, sv) = (&pred[0], &pred[1], &pred[2]);
    if x.len() < 2 {
        return Err(Error::DegenerateSample("predictive.csv needs at least two grid points".into()));
    }
    let mut s = String::new();
    writeln!(s, "{BANNER}").unwrap();
    writeln!(s, "[predictive]").unwrap();
    writeln!(s, "grid: {} points on [{}, {}]", x.len(), x[0], x[x.len() - 1]).unwrap();
    writeln!(s, "mass of g_hat on grid: {:.6}", trapezoid(x, g)).unwrap();
    let xg: Vec<f64> = x.iter().zip(g).map(|(a, b)| a * b).collect();
    writeln!(s, "mean of g_hat on grid: {:.6}", trapezoid(x, &xg)).unwrap();
    writeln!(s, "S_hat at grid ends: {:.6}, {:.6}", sv[0], sv[sv.len() - 1]).unwrap();
    if let Some(i) = sv.iter().position(|&v| v <= 0.5) {
        writeln!(s, "median (first grid point with S_hat <= 0.5): {}", x[i]).unwrap();
    }
    if let Some(t) = &traces {
        writeln!(s, "[traces]").unwrap();
        writeln!(s, "retained states: {}", t[0].len()).unwrap();
        for (name, col) in [("nu", &t[1]), ("phi", &t[2]), ("gamma", &t[3]), ("n_clusters", &t[4])] {
            writeln!(s, "mean {name}: {:.6}", mean(col)).unwrap();
        }
    }
    if let Some(d) = &debiased {
        writeln!(s, "[debiased]").unwrap();
        describe(&mut s, "sample", &d[0]);
    }
    if let Some(k) = &kde {
        writeln!(s, "[kde]").unwrap();
        writeln!(s, "mass of f_hat on grid: {:.6}", trapezoid(&k[0], &k[1])).unwrap();
    }
    if let Some(f) = truth {
        let pair = make_weighted(*f, weight, 1e-10)?;
        writeln!(s, "[distances]").unwrap();
        writeln!(s, "truth f: {f}").unwrap();
        writeln!(s, "weight: {weight}").unwrap();
        writeln!(s, "L1(g_hat, g): {:.6}", l1_on_grid(x, g, |v| pair.weighted_pdf(v))).unwrap();
        if let Some(d) = &debiased {
            writeln!(s, "KS(debiased, f): {:.6}", ks_distance(&d[0], |v| f.cdf(v))).unwrap();
        }
        if let Some(k) = &kde {
            writeln!(s, "L1(kde, f): {:.6}", l1_on_grid(&k[0], &k[1], |v| f.pdf(v))).unwrap();
        }
    }
    write_text(&dir.join("report.txt"), &s)?;
    Ok(s)
}
