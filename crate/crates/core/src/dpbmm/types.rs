use rand::Rng;

use crate::distributions::{open01, BurrParams};
use crate::error::{domain, Result};
use crate::numerics::{quantile_sorted, sort_reals};
use crate::scalar::Real;

/// Shape of the inverse-gamma prior on γ and the Pareto prior on φ.
pub const PRIOR_SHAPE: f64 = 2.0;

/// A lifetime with its censoring flag. Stored as `ln t` so that extreme
/// lifetimes generated inside the sampler stay representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalObservation<T> {
    log_time: T,
    event: bool,
}

impl<T: Real> SurvivalObservation<T> {
    /// `event = true` for an observed failure, `false` for right censoring.
    pub fn new(time: T, event: bool) -> Result<Self> {
        if !(time > T::zero() && time.is_finite()) {
            return Err(domain(format!("lifetime must be finite and positive, got {time}")));
        }
        Ok(Self { log_time: time.ln(), event })
    }

    pub fn observed(time: T) -> Result<Self> {
        Self::new(time, true)
    }

    pub fn censored(time: T) -> Result<Self> {
        Self::new(time, false)
    }

    pub fn from_log_time(log_time: T, event: bool) -> Result<Self> {
        if !log_time.is_finite() {
            return Err(domain(format!("log lifetime must be finite, got {log_time}")));
        }
        Ok(Self { log_time, event })
    }

    pub fn time(&self) -> T {
        self.log_time.exp()
    }

    pub fn log_time(&self) -> T {
        self.log_time
    }

    pub fn event(&self) -> bool {
        self.event
    }
}

/// Prior hyperparameters: ν ~ Gamma(a_nu, rate b_nu), γ ~ InvGamma(2, b_gamma),
/// φ ~ Pareto(2, b_phi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparams<T> {
    pub a_nu: T,
    pub b_nu: T,
    pub b_gamma: T,
    pub b_phi: T,
}

impl<T: Real> Hyperparams<T> {
    pub fn new(a_nu: T, b_nu: T, b_gamma: T, b_phi: T) -> Result<Self> {
        let h = Self { a_nu, b_nu, b_gamma, b_phi };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a_nu", self.a_nu), ("b_nu", self.b_nu), ("b_gamma", self.b_gamma), ("b_phi", self.b_phi)] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(domain(format!("hyperparameter {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Defaults tied to the data: `b_phi = 1`, `b_gamma` = sample median of
    /// the lifetimes, `a_nu = b_nu = 1`.
    pub fn data_driven(data: &[SurvivalObservation<T>]) -> Result<Self> {
        if data.is_empty() {
            return Err(domain("cannot derive hyperparameters from an empty dataset"));
        }
        let mut times: Vec<T> = data.iter().map(|o| o.time()).collect();
        sort_reals(&mut times);
        let median = quantile_sorted(&times, T::lit(0.5));
        Self::new(T::one(), T::one(), median, T::one())
    }

    pub fn a_gamma(&self) -> T {
        T::lit(PRIOR_SHAPE)
    }

    pub fn a_phi(&self) -> T {
        T::lit(PRIOR_SHAPE)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster<T> {
    pub params: BurrParams<T>,
    pub members: Vec<usize>,
    /// Number of uncensored members.
    pub n_obs: usize,
}

impl<T: Real> Cluster<T> {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Full Gibbs state: data, assignments `z`, distinct cluster parameters and
/// the hyperparameters ν (DP precision), φ (upper bound for c) and γ (mean
/// of k under the base measure).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState<T> {
    pub data: Vec<SurvivalObservation<T>>,
    pub z: Vec<usize>,
    pub clusters: Vec<Cluster<T>>,
    pub nu: T,
    pub phi: T,
    pub gamma: T,
    pub hyper: Hyperparams<T>,
}

impl<T: Real> ChainState<T> {
    /// Everything in one cluster with `(c, k)` drawn from the base measure,
    /// `ν = a_nu / b_nu`, `φ = 2 b_phi`, `γ = b_gamma`.
    pub fn initialize<R: Rng + ?Sized>(data: Vec<SurvivalObservation<T>>, hyper: Hyperparams<T>, rng: &mut R) -> Result<Self> {
        if data.is_empty() {
            return Err(domain("dataset is empty"));
        }
        hyper.validate()?;
        let phi = T::lit(2.0) * hyper.b_phi;
        let gamma = hyper.b_gamma;
        let params = draw_base_measure(phi, gamma, rng);
        let n_obs = data.iter().filter(|o| o.event()).count();
        let n = data.len();
        Ok(Self {
            data,
            z: vec![0; n],
            clusters: vec![Cluster { params, members: (0..n).collect(), n_obs }],
            nu: hyper.a_nu / hyper.b_nu,
            phi,
            gamma,
            hyper,
        })
    }

    pub fn n(&self) -> usize {
        self.data.len()
    }

    pub fn n_clusters(&self) -> usize {
        self.clusters.len()
    }

    /// Detaches observation `i` from its cluster, dropping the cluster if it
    /// empties. `z[i]` is left dangling until [`ChainState::attach`].
    pub(crate) fn detach(&mut self, i: usize) {
        let j = self.z[i];
        let cl = &mut self.clusters[j];
        let pos = cl.members.iter().position(|&m| m == i).expect("member listed in its cluster");
        cl.members.swap_remove(pos);
        if self.data[i].event() {
            cl.n_obs -= 1;
        }
        if cl.members.is_empty() {
            self.clusters.swap_remove(j);
            if j < self.clusters.len() {
                for &m in &self.clusters[j].members {
                    self.z[m] = j;
                }
            }
        }
        self.z[i] = usize::MAX;
    }

    pub(crate) fn attach(&mut self, i: usize, j: usize) {
        self.clusters[j].members.push(i);
        if self.data[i].event() {
            self.clusters[j].n_obs += 1;
        }
        self.z[i] = j;
    }

    pub(crate) fn attach_new(&mut self, i: usize, params: BurrParams<T>) {
        self.clusters.push(Cluster { params, members: Vec::new(), n_obs: 0 });
        let j = self.clusters.len() - 1;
        self.attach(i, j);
    }

    /// Checks every structural invariant; returns a description of the first
    /// violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let n = self.n();
        if self.z.len() != n {
            return Err(format!("z has {} entries for {n} observations", self.z.len()));
        }
        let total: usize = self.clusters.iter().map(Cluster::size).sum();
        if total != n {
            return Err(format!("clusters hold {total} members, expected {n}"));
        }
        for (j, cl) in self.clusters.iter().enumerate() {
            if cl.members.is_empty() {
                return Err(format!("cluster {j} is empty"));
            }
            let n_obs = cl.members.iter().filter(|&&m| self.data[m].event()).count();
            if n_obs != cl.n_obs {
                return Err(format!("cluster {j} counts {} observed members, actual {n_obs}", cl.n_obs));
            }
            for &m in &cl.members {
                if self.z[m] != j {
                    return Err(format!("observation {m} listed in cluster {j} but z = {}", self.z[m]));
                }
            }
            let p = cl.params;
            if !(p.c > T::zero() && p.c < self.phi && p.k > T::zero() && p.k.is_finite()) {
                return Err(format!("cluster {j} parameters (c={}, k={}) violate 0 < c < phi = {}", p.c, p.k, self.phi));
            }
        }
        for (name, v) in [("nu", self.nu), ("phi", self.phi), ("gamma", self.gamma)] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(format!("{name} = {v} is not positive and finite"));
            }
        }
        Ok(())
    }
}

/// `(c, k) ~ Uniform(0, φ) × Exponential(mean γ)`.
pub fn draw_base_measure<T: Real, R: Rng + ?Sized>(phi: T, gamma: T, rng: &mut R) -> BurrParams<T> {
    let c = phi * open01::<T, _>(rng);
    let k = -gamma * open01::<T, _>(rng).ln();
    BurrParams { c, k: k.max(T::min_positive_value()) }
}
