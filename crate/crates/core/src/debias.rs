//! Independence Metropolis–Hastings chain turning draws from a weighted law
//! `g` into draws from the un-weighted `f ∝ g / w`.
//!
//! A proposal `y` replaces the current state `x` with probability
//! `min{1, w(x) / w(y)}`; otherwise the chain repeats `x`.

use rand::Rng;

use crate::distributions::open01;
use crate::error::{domain, Result};
use crate::scalar::Real;
use crate::weighted::Weight;

fn check_positive<T: Real>(what: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{what} must be finite and positive, got {v}")))
    }
}

pub fn acceptance_prob<T: Real, W: Weight<T> + ?Sized>(w: &W, x_cur: T, y_prop: T) -> Result<T> {
    check_positive("current state", x_cur)?;
    check_positive("proposal", y_prop)?;
    Ok(log_acceptance(w, x_cur, y_prop).exp())
}

#[inline]
fn log_acceptance<T: Real, W: Weight<T> + ?Sized>(w: &W, x: T, y: T) -> T {
    (w.ln_weight(x) - w.ln_weight(y)).min(T::zero())
}

#[derive(Debug, Clone)]
pub struct DebiasChain<T, W> {
    weight: W,
    current: Option<T>,
    accepted: usize,
    proposed: usize,
}

impl<T: Real, W: Weight<T>> DebiasChain<T, W> {
    /// Chain whose first proposal is accepted unconditionally.
    pub fn new(weight: W) -> Self {
        Self { weight, current: None, accepted: 0, proposed: 0 }
    }

    pub fn starting_at(weight: W, x0: T) -> Result<Self> {
        check_positive("initial state", x0)?;
        Ok(Self { weight, current: Some(x0), accepted: 0, proposed: 0 })
    }

    pub fn current(&self) -> Option<T> {
        self.current
    }

    pub fn accepted_count(&self) -> usize {
        self.accepted
    }

    pub fn proposed_count(&self) -> usize {
        self.proposed
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    /// One accept/reject step; returns the new state. A uniform is consumed
    /// on every call so that paths stay aligned across weights.
    pub fn step<R: Rng + ?Sized>(&mut self, y_prop: T, rng: &mut R) -> Result<T> {
        check_positive("proposal", y_prop)?;
        let u: T = open01(rng);
        self.proposed += 1;
        let next = match self.current {
            None => {
                self.accepted += 1;
                y_prop
            }
            Some(x) => {
                if u.ln() < log_acceptance(&self.weight, x, y_prop) {
                    self.accepted += 1;
                    y_prop
                } else {
                    x
                }
            }
        };
        self.current = Some(next);
        Ok(next)
    }
}

/// Runs the chain over `proposals` and returns the whole path, repeats
/// included. `x0 = None` starts the chain at the first proposal.
pub fn debias_stream<T, W, R>(proposals: &[T], w: W, x0: Option<T>, rng: &mut R) -> Result<(Vec<T>, DebiasChain<T, W>)>
where
    T: Real,
    W: Weight<T>,
    R: Rng + ?Sized,
{
    debias_stream_thinned(proposals, w, x0, 1, rng)
}

pub fn debias_stream_thinned<T, W, R>(
    proposals: &[T],
    w: W,
    x0: Option<T>,
    thin: usize,
    rng: &mut R,
) -> Result<(Vec<T>, DebiasChain<T, W>)>
where
    T: Real,
    W: Weight<T>,
    R: Rng + ?Sized,
{
    if proposals.is_empty() {
        return Err(domain("debias needs at least one proposal"));
    }
    if thin == 0 {
        return Err(domain("thinning stride must be at least 1"));
    }
    let mut chain = match x0 {
        Some(x) => DebiasChain::starting_at(w, x)?,
        None => DebiasChain::new(w),
    };
    let mut out = Vec::with_capacity(proposals.len() / thin + 1);
    for (j, &y) in proposals.iter().enumerate() {
        let x = chain.step(y, rng)?;
        if (j + 1) % thin == 0 {
            out.push(x);
        }
    }
    Ok((out, chain))
}
