use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;

use crate::distributions::{BurrParams, DistSpec};
use crate::dpbmm::{ChainRng, SurvivalObservation};
use crate::error::{domain, Error, Result};
use crate::numerics::integrate_semiinfinite;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// Times in model units (already divided by the time scale).
    pub observations: Vec<SurvivalObservation<f64>>,
    pub provenance: String,
}

impl Dataset {
    pub fn new(observations: Vec<SurvivalObservation<f64>>, provenance: impl Into<String>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::DegenerateSample("dataset has no observations".into()));
        }
        Ok(Self { observations, provenance: provenance.into() })
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.observations.iter().map(|o| o.time()).collect()
    }

    pub fn n_censored(&self) -> usize {
        self.observations.iter().filter(|o| !o.event()).count()
    }

    pub fn max_time(&self) -> f64 {
        self.observations.iter().map(|o| o.time()).fold(0.0, f64::max)
    }
}

pub fn ingest_csv(path: &Path, time_scale: f64) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    ingest_reader(file, path, time_scale)
}

/// Reads `time,event` or `time` CSV; `path` is only used in messages.
pub fn ingest_reader<R: Read>(reader: R, path: &Path, time_scale: f64) -> Result<Dataset> {
    if !(time_scale > 0.0 && time_scale.is_finite()) {
        return Err(Error::Config(format!("time_scale must be positive, got {time_scale}")));
    }
    let parse_err = |line: usize, msg: String| Error::Parse { path: path.to_path_buf(), line, msg };
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|source| Error::Csv { path: path.to_path_buf(), source })?.clone();
    let with_event = match headers.iter().collect::<Vec<_>>().as_slice() {
        ["time", "event"] => true,
        ["time"] => false,
        other => return Err(parse_err(1, format!("expected header `time,event` or `time`, found `{}`", other.join(",")))),
    };
    let width = if with_event { 2 } else { 1 };
    let mut observations = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|source| Error::Csv { path: path.to_path_buf(), source })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != width {
            return Err(parse_err(line, format!("expected {width} field(s), found {}", record.len())));
        }
        let time: f64 = record[0].parse().map_err(|_| parse_err(line, format!("bad time `{}`", &record[0])))?;
        let event = if with_event {
            match &record[1] {
                "1" => true,
                "0" => false,
                other => return Err(parse_err(line, format!("event must be 0 or 1, found `{other}`"))),
            }
        } else {
            true
        };
        if !(time > 0.0 && time.is_finite()) {
            return Err(Error::Validation { path: path.to_path_buf(), line, msg: format!("time must be positive, got {time}") });
        }
        observations.push(SurvivalObservation::new(time / time_scale, event)?);
    }
    Dataset::new(observations, path.display().to_string())
}

/// Writes `time,event` in original units (model times times `time_scale`).
pub fn write_dataset<W: Write>(out: W, data: &Dataset, time_scale: f64) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["time", "event"])?;
    for o in &data.observations {
        w.write_record([format!("{}", o.time() * time_scale), if o.event() { "1".into() } else { "0".into() }])?;
    }
    w.flush()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    /// Length-biased sample: LogNormal(0.5, 0.5), the weighted law of
    /// LogNormal(0, 0.5) under `w(x) = x`.
    LognormalLb,
    /// Gamma(1, rate 2), the weighted law of Gamma(1, 1) under `w(x) = e^-x`.
    GammaExp,
    /// Burr(2, 3) lifetimes with independent exponential censoring tuned so
    /// that the expected censored fraction is `rate`.
    BurrCensored { rate: f64 },
}

impl Scenario {
    pub fn burr_censored(rate: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&rate) {
            return Err(domain(format!("censoring rate must lie in [0, 1), got {rate}")));
        }
        Ok(Scenario::BurrCensored { rate })
    }

    /// Sampling law of the (uncensored) lifetimes.
    pub fn lifetime_law(&self) -> DistSpec<f64> {
        match self {
            Scenario::LognormalLb => DistSpec::LogNormal { mu: 0.5, sigma2: 0.5 },
            Scenario::GammaExp => DistSpec::Gamma { shape: 1.0, rate: 2.0 },
            Scenario::BurrCensored { .. } => DistSpec::BurrXII(burr_lifetimes()),
        }
    }
}

fn burr_lifetimes() -> BurrParams<f64> {
    BurrParams { c: 2.0, k: 3.0 }
}

impl FromStr for Scenario {
    type Err = Error;

    /// `lognormal-lb`, `gamma-exp`, `burr-censored` (rate 0.2) or
    /// `burr-censored:RATE`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once(':') {
            Some(("burr-censored", r)) => {
                Self::burr_censored(r.trim().parse().map_err(|_| domain(format!("bad censoring rate in `{s}`")))?)
            }
            None if s == "burr-censored" => Self::burr_censored(0.2),
            None if s == "lognormal-lb" => Ok(Scenario::LognormalLb),
            None if s == "gamma-exp" => Ok(Scenario::GammaExp),
            _ => Err(domain(format!("unknown scenario `{s}` (lognormal-lb|gamma-exp|burr-censored[:rate])"))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::LognormalLb => f.write_str("lognormal-lb"),
            Scenario::GammaExp => f.write_str("gamma-exp"),
            Scenario::BurrCensored { rate } => write!(f, "burr-censored:{rate}"),
        }
    }
}

/// Rate `λ` of an exponential censoring time `C` with `P(C < T) = p` for
/// `T ~ law`, by bisection on `1 - E[e^(-λT)]`.
pub fn censoring_rate_for(law: &DistSpec<f64>, p: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    let frac = |lam: f64| 1.0 - integrate_semiinfinite(|t| law.pdf(t) * (-lam * t).exp(), 1e-12).value;
    let (mut lo, mut hi) = (0.0, 1.0);
    while frac(hi) < p {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if frac(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn simulate(scenario: Scenario, n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(domain("simulate needs n >= 1"));
    }
    let mut rng = ChainRng::seed_from_u64(seed);
    let law = scenario.lifetime_law();
    let observations = match scenario {
        Scenario::LognormalLb | Scenario::GammaExp => {
            (0..n).map(|_| SurvivalObservation::observed(law.sample(&mut rng))).collect::<Result<Vec<_>>>()?
        }
        Scenario::BurrCensored { rate } => {
            let lam = censoring_rate_for(&law, rate);
            let censor = DistSpec::Exponential { mean: 1.0 / lam };
            (0..n)
                .map(|_| {
                    let t = law.sample(&mut rng);
                    if lam > 0.0 {
                        let c = censor.sample(&mut rng);
                        if c < t {
                            return SurvivalObservation::censored(c);
                        }
                    }
                    SurvivalObservation::observed(t)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Dataset::new(observations, format!("simulated {scenario}, n = {n}, seed = {seed}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ingest(text: &str) -> Result<Dataset> {
        ingest_reader(text.as_bytes(), Path::new("mem.csv"), 1.0)
    }

    #[test]
    fn two_column_input() {
        let d = ingest("time,event\n3.5,1\n12.0,0\n").unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.n_censored(), 1);
        assert!(!d.observations[1].event());
    }

    #[test]
    fn one_column_input() {
        let d = ingest("time\n1.0\n2.0\n").unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.n_censored(), 0);
    }

    #[test]
    fn nonpositive_time_names_its_line() {
        match ingest("time,event\n-1,1\n") {
            Err(Error::Validation { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let msg = ingest("time,event\n1,1\n0,1\n").unwrap_err().to_string();
        assert!(msg.contains(":3:"), "{msg}");
    }

    #[test]
    fn malformed_rows() {
        assert!(matches!(ingest("time,event\n1.0,2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(ingest("time,event\nabc,1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(ingest("time,event\n1.0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(ingest("t,e\n1.0,1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(ingest("time\n").is_err());
    }

    #[test]
    fn time_scale_divides() {
        let d = ingest_reader("time\n10\n25\n".as_bytes(), Path::new("x"), 10.0).unwrap();
        assert_eq!(d.times(), vec![1.0, 2.5]);
    }

    #[test]
    fn write_then_read() {
        let d = simulate(Scenario::burr_censored(0.3).unwrap(), 40, 3).unwrap();
        let mut buf = Vec::new();
        write_dataset(&mut buf, &d, 1.0).unwrap();
        let back = ingest_reader(buf.as_slice(), Path::new("x"), 1.0).unwrap();
        assert_eq!(back.observations, d.observations);
    }

    #[test]
    fn simulation_is_seeded() {
        let a = simulate(Scenario::LognormalLb, 50, 11).unwrap();
        let b = simulate(Scenario::LognormalLb, 50, 11).unwrap();
        let c = simulate(Scenario::LognormalLb, 50, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.observations, c.observations);
    }

    #[test]
    fn censoring_rate_hits_target() {
        let law = Scenario::burr_censored(0.2).unwrap().lifetime_law();
        let lam = censoring_rate_for(&law, 0.2);
        let frac = 1.0 - integrate_semiinfinite(|t| law.pdf(t) * (-lam * t).exp(), 1e-12).value;
        assert!((frac - 0.2).abs() < 1e-9);
        let d = simulate(Scenario::burr_censored(0.2).unwrap(), 4000, 5).unwrap();
        let observed = d.n_censored() as f64 / 4000.0;
        assert!((observed - 0.2).abs() < 0.03, "{observed}");
    }

    #[test]
    fn scenario_names() {
        for s in ["lognormal-lb", "gamma-exp", "burr-censored:0.25"] {
            assert_eq!(s.parse::<Scenario>().unwrap().to_string(), s);
        }
        assert_eq!("burr-censored".parse::<Scenario>().unwrap(), Scenario::BurrCensored { rate: 0.2 });
        assert!("weibull".parse::<Scenario>().is_err());
    }
}
