//! Full-conditional updates making up one Gibbs sweep.

use rand::Rng;

use super::conditionals::{ln_q0_censored_log_time, ln_q0_observed_log_time, ln_psi, log1p_tc, sample_h_censored_log_time, sample_h_observed_log_time};
use super::types::ChainState;
use crate::distributions::{beta_draw, gamma_rate, open01, BurrParams};
use crate::error::{domain, Result};
use crate::numerics::slice_sample;
use crate::scalar::{log_sum_exp, Real};

const BISECTION_STEPS: usize = 200;

/// Index drawn with probability proportional to `exp(ln_w)`.
pub fn sample_log_categorical<T: Real, R: Rng + ?Sized>(ln_w: &[T], rng: &mut R) -> usize {
    let total = log_sum_exp(ln_w);
    let u: T = open01(rng);
    let mut acc = T::zero();
    for (j, &lw) in ln_w.iter().enumerate() {
        acc = acc + (lw - total).exp();
        if u < acc {
            return j;
        }
    }
    // round-off: last index with positive weight
    ln_w.iter().rposition(|&w| w > T::neg_infinity()).unwrap_or(ln_w.len() - 1)
}

/// Log weights for reassigning observation `i`, whose own membership must
/// already be removed: one entry per existing cluster (`ln n_j + ln q_j`)
/// followed by `ln q0` for a new cluster.
pub(crate) fn assignment_log_weights<T: Real>(state: &ChainState<T>, i: usize) -> Vec<T> {
    let obs = state.data[i];
    let ln_t = obs.log_time();
    let mut w: Vec<T> = state
        .clusters
        .iter()
        .map(|cl| {
            let lq = if obs.event() { cl.params.ln_pdf_log_time(ln_t) } else { cl.params.ln_survival_log_time(ln_t) };
            T::from_usize_lossy(cl.size()).ln() + lq
        })
        .collect();
    let lq0 = if obs.event() {
        ln_q0_observed_log_time(ln_t, state.nu, state.phi, state.gamma)
    } else {
        ln_q0_censored_log_time(ln_t, state.nu, state.phi, state.gamma)
    };
    w.push(lq0);
    w
}

/// Normalised assignment probabilities for observation `i` (existing
/// clusters in the order they have once `i` is removed, then "new").
pub fn assignment_probabilities<T: Real>(state: &ChainState<T>, i: usize) -> Vec<T> {
    let mut s = state.clone();
    s.detach(i);
    let w = assignment_log_weights(&s, i);
    let total = log_sum_exp(&w);
    w.into_iter().map(|lw| (lw - total).exp()).collect()
}

/// Resamples the cluster of observation `i` from its mixed conditional:
/// an existing cluster with weight `n_j^(-i) q_j`, or a fresh one with
/// weight `q0`, whose parameters are then drawn from `h`.
pub fn update_assignment<T: Real, R: Rng + ?Sized>(i: usize, state: &mut ChainState<T>, rng: &mut R) -> Result<()> {
    if i >= state.n() {
        return Err(domain(format!("observation {i} out of range")));
    }
    state.detach(i);
    let w = assignment_log_weights(state, i);
    let j = sample_log_categorical(&w, rng);
    if j < state.clusters.len() {
        state.attach(i, j);
    } else {
        let obs = state.data[i];
        let params = if obs.event() {
            sample_h_observed_log_time(obs.log_time(), state.phi, state.gamma, rng)?
        } else {
            sample_h_censored_log_time(obs.log_time(), state.phi, state.gamma, rng)?
        };
        state.attach_new(i, params);
    }
    Ok(())
}

/// Log times of cluster `j`'s members split into (observed, censored).
fn member_log_times<T: Real>(state: &ChainState<T>, j: usize) -> (Vec<T>, Vec<T>) {
    let mut obs = Vec::new();
    let mut cens = Vec::new();
    for &m in &state.clusters[j].members {
        let o = state.data[m];
        if o.event() {
            obs.push(o.log_time());
        } else {
            cens.push(o.log_time());
        }
    }
    (obs, cens)
}

/// `R(c) = 1/γ + Σ_members ln(1 + t^c)`.
fn rate_r<T: Real>(c: T, gamma: T, obs: &[T], cens: &[T]) -> T {
    obs.iter().chain(cens).fold(gamma.recip(), |acc, &a| acc + log1p_tc(c, a))
}

/// Log of the `k`-marginalised conditional of a cluster's `c`:
/// `n_o ln c + Σ_obs ln ψ(c) - (n_o + 1) ln R(c)`.
pub fn cluster_c_log_marginal<T: Real>(c: T, gamma: T, obs_log_times: &[T], cens_log_times: &[T]) -> T {
    if !(c > T::zero()) {
        return T::neg_infinity();
    }
    let n_o = T::from_usize_lossy(obs_log_times.len());
    let psi: T = obs_log_times.iter().map(|&a| ln_psi(c, a)).sum();
    let pow = if obs_log_times.is_empty() { T::zero() } else { n_o * c.ln() };
    pow + psi - (n_o + T::one()) * rate_r(c, gamma, obs_log_times, cens_log_times).ln()
}

/// Interval of `c` on which `ln ψ(c; a) > ln_w`, intersected with
/// `[lo, hi]`; `c_now` must satisfy the constraint. `None` if bisection
/// cannot bracket.
fn truncation_interval<T: Real>(a: T, ln_w: T, c_now: T, lo: T, hi: T) -> Option<(T, T)> {
    let f = |c: T| ln_psi(c, a) - ln_w;
    if !(f(c_now) > T::zero()) {
        return None;
    }
    if a == T::zero() {
        return Some((lo, hi));
    }
    // ln ψ is increasing in c when a > 0 and decreasing when a < 0
    let (mut inside, mut outside) = if a > T::zero() {
        if f(lo) > T::zero() {
            return Some((lo, hi));
        }
        (c_now, lo)
    } else {
        if f(hi) > T::zero() {
            return Some((lo, hi));
        }
        (c_now, hi)
    };
    for _ in 0..BISECTION_STEPS {
        let mid = T::lit(0.5) * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        let v = f(mid);
        if v.is_nan() {
            return None;
        }
        if v > T::zero() {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    if a > T::zero() {
        Some((inside.min(c_now), hi))
    } else {
        Some((lo, inside.max(c_now)))
    }
}

/// Resamples `(c*_j, k*_j)`: auxiliary uniforms `w_i < ψ_i(c)` for the
/// observed members truncate `c` to an interval, `c` is slice-sampled from
/// `c^n_o R(c)^-(n_o+1)` on it, then `k ~ Gamma(n_o + 1, rate R(c))`.
pub fn update_cluster_params<T: Real, R: Rng + ?Sized>(j: usize, state: &mut ChainState<T>, rng: &mut R) -> Result<()> {
    if j >= state.clusters.len() {
        return Err(domain(format!("cluster {j} out of range")));
    }
    let (obs, cens) = member_log_times(state, j);
    let gamma = state.gamma;
    let phi = state.phi;
    let c_now = state.clusters[j].params.c;
    let n_o = obs.len();

    let mut bounds = Some((T::zero(), phi));
    for &a in &obs {
        let ln_w = ln_psi(c_now, a) + open01::<T, _>(rng).ln();
        bounds = bounds.and_then(|(lo, hi)| truncation_interval(a, ln_w, c_now, lo, hi));
    }

    let n_o_t = T::from_usize_lossy(n_o);
    let c_new = match bounds {
        Some((lo, hi)) if lo < hi => {
            let target = |c: T| {
                if !(c > T::zero()) {
                    return T::neg_infinity();
                }
                let pow = if n_o == 0 { T::zero() } else { n_o_t * c.ln() };
                pow - (n_o_t + T::one()) * rate_r(c, gamma, &obs, &cens).ln()
            };
            slice_sample(target, c_now, lo, hi, rng, 1)?
        }
        _ => {
            // constraint folded back into the target
            let target = |c: T| cluster_c_log_marginal(c, gamma, &obs, &cens);
            slice_sample(target, c_now, T::zero(), phi, rng, 1)?
        }
    };
    let rate = rate_r(c_new, gamma, &obs, &cens);
    let k_new = gamma_rate(n_o_t + T::one(), rate, rng).max(T::min_positive_value());
    state.clusters[j].params = BurrParams { c: c_new, k: k_new };
    Ok(())
}

/// Mixing weight of the `Gamma(a_nu + n*, ·)` component in the ν update.
pub fn nu_mixture_weight<T: Real>(a_nu: T, b_nu: T, n_clusters: usize, n: usize, u: T) -> T {
    let num = a_nu + T::from_usize_lossy(n_clusters) - T::one();
    num / (T::from_usize_lossy(n) * (b_nu - u.ln()) + num)
}

/// Auxiliary-variable update of the DP precision ν.
pub fn update_nu<T: Real, R: Rng + ?Sized>(state: &mut ChainState<T>, rng: &mut R) -> Result<()> {
    let n = state.n();
    if n == 0 {
        return Err(domain("nu update needs at least one observation"));
    }
    let n_star = state.n_clusters();
    let h = state.hyper;
    let u = beta_draw(state.nu + T::one(), T::from_usize_lossy(n), rng).max(T::min_positive_value());
    let p = nu_mixture_weight(h.a_nu, h.b_nu, n_star, n, u);
    let rate = h.b_nu - u.ln();
    let shape = if open01::<T, _>(rng) < p {
        h.a_nu + T::from_usize_lossy(n_star)
    } else {
        h.a_nu + T::from_usize_lossy(n_star) - T::one()
    };
    state.nu = gamma_rate(shape, rate, rng).max(T::min_positive_value());
    Ok(())
}

/// `φ ~ Pareto(2 + n*, max{b_phi, max_j c*_j})`.
pub fn update_phi<T: Real, R: Rng + ?Sized>(state: &mut ChainState<T>, rng: &mut R) -> Result<()> {
    let floor = state.clusters.iter().map(|cl| cl.params.c).fold(state.hyper.b_phi, T::max);
    let shape = state.hyper.a_phi() + T::from_usize_lossy(state.n_clusters());
    state.phi = floor * open01::<T, _>(rng).powf(-shape.recip());
    Ok(())
}

/// `γ ~ InvGamma(2 + n*, b_gamma + Σ_j k*_j)`.
pub fn update_gamma<T: Real, R: Rng + ?Sized>(state: &mut ChainState<T>, rng: &mut R) -> Result<()> {
    let shape = state.hyper.a_gamma() + T::from_usize_lossy(state.n_clusters());
    let scale = state.clusters.iter().fold(state.hyper.b_gamma, |acc, cl| acc + cl.params.k);
    state.gamma = (scale / gamma_rate(shape, T::one(), rng)).max(T::min_positive_value());
    Ok(())
}

/// One scan: every assignment, every cluster's parameters, then ν, φ, γ.
pub fn gibbs_sweep<T: Real, R: Rng + ?Sized>(state: &mut ChainState<T>, rng: &mut R) -> Result<()> {
    for i in 0..state.n() {
        update_assignment(i, state, rng)?;
    }
    for j in 0..state.n_clusters() {
        update_cluster_params(j, state, rng)?;
    }
    update_nu(state, rng)?;
    update_phi(state, rng)?;
    update_gamma(state, rng)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpbmm::types::{Cluster, Hyperparams, SurvivalObservation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn state_with(times: &[(f64, bool)], nu: f64) -> ChainState<f64> {
        let data: Vec<_> = times.iter().map(|&(t, e)| SurvivalObservation::new(t, e).unwrap()).collect();
        let n = data.len();
        let n_obs = data.iter().filter(|o| o.event()).count();
        ChainState {
            data,
            z: vec![0; n],
            clusters: vec![Cluster { params: BurrParams::new(1.5, 2.0).unwrap(), members: (0..n).collect(), n_obs }],
            nu,
            phi: 3.0,
            gamma: 1.0,
            hyper: Hyperparams::new(1.0, 1.0, 1.0, 1.0).unwrap(),
        }
    }

    #[test]
    fn nu_weight_example() {
        let p = nu_mixture_weight(2.0, 1.0, 3, 10, (-1f64).exp());
        assert!((p - 1.0 / 6.0).abs() < 1e-15);
        let u = 0.3f64;
        let p = nu_mixture_weight(1.0, 2.0, 1, 7, u);
        assert!((p - 1.0 / (7.0 * (2.0 - u.ln()) + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn tiny_nu_rejoins_existing_cluster() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut s = state_with(&[(1.2, true), (0.8, true)], 1e-300);
        for _ in 0..200 {
            update_assignment(0, &mut s, &mut rng).unwrap();
            assert_eq!(s.n_clusters(), 1);
        }
    }

    #[test]
    fn log_categorical_respects_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let w = [0.0f64.ln(), 1.0f64.ln(), 3.0f64.ln()];
        let mut counts = [0usize; 3];
        for _ in 0..40_000 {
            counts[sample_log_categorical(&w, &mut rng)] += 1;
        }
        assert_eq!(counts[0], 0);
        let f = counts[2] as f64 / 40_000.0;
        assert!((f - 0.75).abs() < 0.01, "{f}");
    }

    #[test]
    fn truncation_interval_contains_current_value() {
        for &a in &[-2.0f64, -0.1, 0.3, 2.5] {
            let c_now = 1.1;
            let ln_w = ln_psi(c_now, a) - 0.4;
            let (lo, hi) = truncation_interval(a, ln_w, c_now, 0.0, 4.0).unwrap();
            assert!(lo <= c_now && c_now <= hi);
            let probe = |c: f64| ln_psi(c, a) > ln_w;
            assert!(probe(0.5 * (lo + hi)));
            if a > 0.0 && lo > 0.0 {
                assert!(!probe(lo * 0.999));
            }
            if a < 0.0 && hi < 4.0 {
                assert!(!probe(hi * 1.001));
            }
        }
    }

    #[test]
    fn cluster_update_keeps_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut s = state_with(&[(0.4, true), (2.2, false), (1.7, true), (9.0, true)], 1.0);
        for _ in 0..500 {
            update_cluster_params(0, &mut s, &mut rng).unwrap();
            let p = s.clusters[0].params;
            assert!(p.c > 0.0 && p.c < s.phi && p.k > 0.0);
        }
    }

    #[test]
    fn phi_floor_and_gamma_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut s = state_with(&[(1.0, true), (2.0, true)], 1.0);
        s.clusters[0].params.c = 2.5;
        for _ in 0..200 {
            update_phi(&mut s, &mut rng).unwrap();
            assert!(s.phi > 2.5);
            update_gamma(&mut s, &mut rng).unwrap();
            assert!(s.gamma > 0.0);
        }
    }

    #[test]
    fn sweep_preserves_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut s = state_with(&[(0.3, true), (0.5, false), (1.1, true), (2.0, true), (4.5, false), (0.9, true)], 1.0);
        for _ in 0..300 {
            gibbs_sweep(&mut s, &mut rng).unwrap();
            s.check_invariants().unwrap();
        }
    }
}
