//! New-cluster mass `q0` and the base-measure posteriors `h` used when an
//! observation opens a cluster.
//!
//! With `L(c) = ln(1 + t^c)` and `ψ(c) = t^(c-1) / (1 + t^c)`, integrating k
//! out of the Burr kernel against `Exponential(mean γ)` gives
//!
//! * observed:  `q0 = ν/(φγ) ∫₀^φ c ψ(c) (1/γ + L(c))^-2 dc`,
//!   `k | c ~ Gamma(2, rate 1/γ + L(c))`;
//! * censored:  `q0 = ν/(φγ) ∫₀^φ (1/γ + L(c))^-1 dc`,
//!   `k | c ~ Exponential(rate 1/γ + L(c))`.
//!
//! All integrals are taken on the log scale with a max-shift so that
//! lifetimes far from 1 neither underflow nor overflow.

use rand::Rng;

use crate::distributions::{gamma_rate, BurrParams};
use crate::error::{domain, Error, Result};
use crate::numerics::{integrate_finite, slice_sample, GridInverseCdf, QuadResult};
use crate::scalar::{softplus, Real};

/// Grid size for the inverse-CDF start of a fresh `c` draw.
pub const H_GRID_POINTS: usize = 128;
/// Slice updates applied after the grid start.
pub const H_SLICE_STEPS: usize = 4;

/// `ln(1 + t^c)` from `ln t`.
#[inline]
pub(crate) fn log1p_tc<T: Real>(c: T, ln_t: T) -> T {
    if ln_t == T::neg_infinity() {
        T::zero()
    } else {
        softplus(c * ln_t)
    }
}

/// `ln ψ(c) = (c-1) ln t - ln(1 + t^c)`.
#[inline]
pub(crate) fn ln_psi<T: Real>(c: T, ln_t: T) -> T {
    (c - T::one()) * ln_t - log1p_tc(c, ln_t)
}

/// Unnormalised log density of `c` under `h` for an observed lifetime.
pub fn h_observed_c_log_density<T: Real>(c: T, ln_t: T, gamma: T) -> T {
    if !(c > T::zero()) {
        return T::neg_infinity();
    }
    c.ln() + ln_psi(c, ln_t) - T::lit(2.0) * (gamma.recip() + log1p_tc(c, ln_t)).ln()
}

/// Unnormalised log density of `c` under `h` for a censored lifetime.
pub fn h_censored_c_log_density<T: Real>(c: T, ln_t: T, gamma: T) -> T {
    -(gamma.recip() + log1p_tc(c, ln_t)).ln()
}

/// Log of `∫_lo^hi exp(ell(c)) dc`, with a max-shift taken over a uniform
/// probe grid plus points accumulating geometrically at both ends.
pub(crate) fn log_integral<T: Real, F: Fn(T) -> T>(ell: F, lo: T, hi: T) -> (T, QuadResult<T>) {
    let width = hi - lo;
    let mut shift = T::neg_infinity();
    for j in 1..32 {
        shift = shift.max(ell(lo + width * T::from_usize_lossy(j) / T::lit(32.0)));
    }
    let mut frac = T::lit(0.5);
    for _ in 0..60 {
        shift = shift.max(ell(lo + width * frac)).max(ell(hi - width * frac));
        frac = frac * T::lit(0.5);
    }
    if !shift.is_finite() {
        let q = QuadResult { value: T::zero(), abs_error_estimate: T::zero(), converged: true };
        return (if shift == T::infinity() { shift } else { T::neg_infinity() }, q);
    }
    let scaled = |c: T| {
        let v = (ell(c) - shift).exp();
        if v.is_nan() {
            T::zero()
        } else {
            v
        }
    };
    let mut q = integrate_finite(scaled, lo, hi, T::lit(1e-7) * width);
    let rel = T::lit(1e-10) * q.value;
    if q.abs_error_estimate > rel && rel > T::zero() {
        q = integrate_finite(scaled, lo, hi, rel);
    }
    (q.value.ln() + shift, q)
}

fn check_positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive and finite, got {v}")))
    }
}

/// `ln q0` for an observed lifetime given `ln t`.
pub fn ln_q0_observed_log_time<T: Real>(ln_t: T, nu: T, phi: T, gamma: T) -> T {
    if ln_t == T::neg_infinity() {
        // density of the prior predictive diverges at t = 0
        return T::infinity();
    }
    let (ln_int, _) = log_integral(|c| h_observed_c_log_density(c, ln_t, gamma), T::zero(), phi);
    nu.ln() - phi.ln() - gamma.ln() + ln_int
}

/// `ln q0` for a right-censored lifetime given `ln t`.
pub fn ln_q0_censored_log_time<T: Real>(ln_t: T, nu: T, phi: T, gamma: T) -> T {
    if ln_t == T::neg_infinity() {
        return nu.ln();
    }
    let (ln_int, _) = log_integral(|c| h_censored_c_log_density(c, ln_t, gamma), T::zero(), phi);
    nu.ln() - phi.ln() - gamma.ln() + ln_int
}

/// Mass the Gibbs step assigns to opening a new cluster for an observed
/// lifetime `t`.
pub fn q0_observed<T: Real>(t: T, nu: T, phi: T, gamma: T) -> Result<T> {
    check_args(t, nu, phi, gamma)?;
    Ok(ln_q0_observed_log_time(t.ln(), nu, phi, gamma).exp())
}

/// Same as [`q0_observed`] for a right-censored lifetime.
pub fn q0_censored<T: Real>(t: T, nu: T, phi: T, gamma: T) -> Result<T> {
    check_args(t, nu, phi, gamma)?;
    Ok(ln_q0_censored_log_time(t.ln(), nu, phi, gamma).exp())
}

fn check_args<T: Real>(t: T, nu: T, phi: T, gamma: T) -> Result<()> {
    if !(t >= T::zero() && t.is_finite()) {
        return Err(domain(format!("lifetime must be finite and nonnegative, got {t}")));
    }
    check_positive("nu", nu)?;
    check_positive("phi", phi)?;
    check_positive("gamma", gamma)
}

/// Draws `c` on `(0, φ)` from `exp(log_density)`: an inverse-CDF draw on a
/// grid followed by a few slice updates that leave the exact target
/// invariant.
fn draw_c<T, F, R>(log_density: F, phi: T, rng: &mut R) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
    R: Rng + ?Sized,
{
    let grid = GridInverseCdf::from_log_density(&log_density, T::zero(), phi, H_GRID_POINTS)?;
    let start = grid.sample(rng);
    match slice_sample(&log_density, start, T::zero(), phi, rng, H_SLICE_STEPS) {
        Ok(c) => Ok(c),
        Err(Error::InvalidStart(_)) => {
            let mid = phi / T::lit(2.0);
            match slice_sample(&log_density, mid, T::zero(), phi, rng, H_SLICE_STEPS) {
                Ok(c) => Ok(c),
                Err(_) => Ok(start),
            }
        }
        Err(e) => Err(e),
    }
}

fn clamp_open<T: Real>(c: T, phi: T) -> T {
    let tiny = phi * T::epsilon();
    c.max(tiny).min(phi - tiny)
}

/// `(c, k)` from `h°(c, k) ∝ Burr(t | c, k) P0(c, k)` given `ln t`.
pub fn sample_h_observed_log_time<T: Real, R: Rng + ?Sized>(ln_t: T, phi: T, gamma: T, rng: &mut R) -> Result<BurrParams<T>> {
    let c = clamp_open(draw_c(|c| h_observed_c_log_density(c, ln_t, gamma), phi, rng)?, phi);
    let rate = gamma.recip() + log1p_tc(c, ln_t);
    let k = gamma_rate(T::lit(2.0), rate, rng).max(T::min_positive_value());
    Ok(BurrParams { c, k })
}

/// `(c, k)` from `h^c(c, k) ∝ S_Burr(t | c, k) P0(c, k)` given `ln t`.
pub fn sample_h_censored_log_time<T: Real, R: Rng + ?Sized>(ln_t: T, phi: T, gamma: T, rng: &mut R) -> Result<BurrParams<T>> {
    let c = clamp_open(draw_c(|c| h_censored_c_log_density(c, ln_t, gamma), phi, rng)?, phi);
    let rate = gamma.recip() + log1p_tc(c, ln_t);
    let k = gamma_rate(T::one(), rate, rng).max(T::min_positive_value());
    Ok(BurrParams { c, k })
}

pub fn sample_h_observed<T: Real, R: Rng + ?Sized>(t: T, phi: T, gamma: T, rng: &mut R) -> Result<BurrParams<T>> {
    check_args(t, T::one(), phi, gamma)?;
    sample_h_observed_log_time(t.ln(), phi, gamma, rng)
}

pub fn sample_h_censored<T: Real, R: Rng + ?Sized>(t: T, phi: T, gamma: T, rng: &mut R) -> Result<BurrParams<T>> {
    check_args(t, T::one(), phi, gamma)?;
    sample_h_censored_log_time(t.ln(), phi, gamma, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn q0_observed_at_unit_time() {
        let v = q0_observed(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((v - 0.25 * (1.0 + 2f64.ln()).powi(-2)).abs() < 1e-12, "{v}");
    }

    #[test]
    fn q0_linear_in_nu() {
        let a = q0_observed(2.3, 1.0, 1.7, 0.8).unwrap();
        let b = q0_observed(2.3, 2.0, 1.7, 0.8).unwrap();
        assert!(f64::abs(b - 2.0 * a) < 1e-14);
        let a = q0_censored(2.3, 1.0, 1.7, 0.8).unwrap();
        let b = q0_censored(2.3, 2.0, 1.7, 0.8).unwrap();
        assert!(f64::abs(b - 2.0 * a) < 1e-14);
    }

    #[test]
    fn q0_censored_at_unit_time_and_zero() {
        let v = q0_censored(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((v - 1.0 / (1.0 + 2f64.ln())).abs() < 1e-12);
        assert!((v - 0.5906).abs() < 1e-4);
        assert!(f64::abs(q0_censored(0.0, 3.0, 1.0, 2.0).unwrap() - 3.0) < 1e-14);
        // the limit is approached like 1 / |ln t|
        let gap = |t: f64| 3.0 - q0_censored(t, 3.0, 1.0, 2.0).unwrap();
        assert!(gap(1e-100) > 0.0 && gap(1e-100) < gap(1e-12) && gap(1e-12) < 0.2);
    }

    #[test]
    fn q0_argument_checks() {
        assert!(q0_observed(-1.0, 1.0, 1.0, 1.0).is_err());
        assert!(q0_observed(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(q0_censored(1.0, 1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn q0_survives_extreme_lifetimes() {
        let lo = ln_q0_observed_log_time(-2000.0f64, 1.0, 1.0, 1.0);
        let hi = ln_q0_observed_log_time(2000.0f64, 1.0, 1.0, 1.0);
        assert!(lo.is_finite() && hi.is_finite(), "{lo} {hi}");
        assert!(ln_q0_censored_log_time(2000.0f64, 1.0, 1.0, 1.0).is_finite());
    }

    #[test]
    fn h_draws_stay_in_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for &t in &[0.01, 0.5, 1.0, 3.0, 80.0] {
            for _ in 0..200 {
                let p = sample_h_observed(t, 2.0, 1.0, &mut rng).unwrap();
                assert!(p.c > 0.0 && p.c < 2.0 && p.k > 0.0);
                let p = sample_h_censored(t, 0.7, 3.0, &mut rng).unwrap();
                assert!(p.c > 0.0 && p.c < 0.7 && p.k > 0.0);
            }
        }
    }

    #[test]
    fn h_draws_handle_extreme_log_times() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for &a in &[-3000.0, -50.0, 50.0, 3000.0] {
            let p = sample_h_observed_log_time(a, 1.5, 1.0, &mut rng).unwrap();
            assert!(p.c > 0.0 && p.c < 1.5 && p.k > 0.0, "{a}: {p:?}");
        }
    }
}
