use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::distributions::open01;
use crate::error::{domain, Error, Result};
use crate::scalar::Real;

const MAX_SHRINK: usize = 500;

/// Univariate slice sampler (stepping out, then shrinkage) confined to
/// `[lo, hi]`, applied `steps` times starting from `x0`.
///
/// The initial bracket width is a tenth of the bound range, so stepping out
/// takes at most ten expansions per side.
pub fn slice_sample<T, F, R>(mut log_target: F, x0: T, lo: T, hi: T, rng: &mut R, steps: usize) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
    R: Rng + ?Sized,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(domain(format!("slice bounds must be finite with lo < hi, got ({lo}, {hi})")));
    }
    let mut x = x0;
    let mut fx = log_target(x);
    if !(fx > T::neg_infinity()) || fx.is_nan() || x < lo || x > hi {
        return Err(Error::InvalidStart(fx.as_f64()));
    }
    let width = (hi - lo) / T::lit(10.0);
    for _ in 0..steps {
        let e: f64 = Exp1.sample(rng);
        let level = fx - T::lit(e);

        let mut left = (x - width * open01::<T, _>(rng)).max(lo);
        let mut right = (left + width).min(hi);
        while left > lo && log_target(left) > level {
            left = (left - width).max(lo);
        }
        while right < hi && log_target(right) > level {
            right = (right + width).min(hi);
        }

        let mut accepted = false;
        for _ in 0..MAX_SHRINK {
            let cand = left + (right - left) * open01::<T, _>(rng);
            let fc = log_target(cand);
            if fc > level {
                x = cand;
                fx = fc;
                accepted = true;
                break;
            }
            if cand < x {
                left = cand;
            } else {
                right = cand;
            }
        }
        if !accepted {
            // bracket collapsed onto x at working precision
            continue;
        }
    }
    Ok(x)
}
