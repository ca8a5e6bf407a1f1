use std::fmt;
use std::str::FromStr;

use super::{BurrParams, DistSpec};
use crate::error::{domain, Error};
use crate::scalar::Real;

/// Parses `name:p1,p2` forms such as `lognormal:0.5,0.5`, `gamma:1,2`
/// (shape, rate) or `burr:2,3`.
impl<T: Real> FromStr for DistSpec<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, args) = s
            .split_once(':')
            .ok_or_else(|| domain(format!("distribution `{s}` must look like name:p1,p2")))?;
        let params = args
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map(T::lit)
                    .map_err(|_| domain(format!("bad number `{a}` in `{s}`")))
            })
            .collect::<Result<Vec<T>, _>>()?;
        let want = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(domain(format!("`{name}` takes {n} parameter(s), got {}", params.len())))
            }
        };
        let spec = match name.trim().to_ascii_lowercase().as_str() {
            "lognormal" => {
                want(2)?;
                DistSpec::LogNormal { mu: params[0], sigma2: params[1] }
            }
            "gamma" => {
                want(2)?;
                DistSpec::Gamma { shape: params[0], rate: params[1] }
            }
            "invgamma" | "inversegamma" => {
                want(2)?;
                DistSpec::InverseGamma { shape: params[0], scale: params[1] }
            }
            "pareto" => {
                want(2)?;
                DistSpec::Pareto { shape: params[0], scale: params[1] }
            }
            "beta" => {
                want(2)?;
                DistSpec::Beta { alpha: params[0], beta: params[1] }
            }
            "uniform" => {
                want(2)?;
                DistSpec::Uniform { lo: params[0], hi: params[1] }
            }
            "exponential" | "exp" => {
                want(1)?;
                DistSpec::Exponential { mean: params[0] }
            }
            "burr" | "burrxii" => {
                want(2)?;
                DistSpec::BurrXII(BurrParams::new(params[0], params[1])?)
            }
            other => return Err(domain(format!("unknown distribution `{other}`"))),
        };
        spec.checked()
    }
}

impl<T: Real> fmt::Display for DistSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistSpec::LogNormal { mu, sigma2 } => write!(f, "lognormal:{mu},{sigma2}"),
            DistSpec::Gamma { shape, rate } => write!(f, "gamma:{shape},{rate}"),
            DistSpec::InverseGamma { shape, scale } => write!(f, "invgamma:{shape},{scale}"),
            DistSpec::Pareto { shape, scale } => write!(f, "pareto:{shape},{scale}"),
            DistSpec::Beta { alpha, beta } => write!(f, "beta:{alpha},{beta}"),
            DistSpec::Uniform { lo, hi } => write!(f, "uniform:{lo},{hi}"),
            DistSpec::Exponential { mean } => write!(f, "exponential:{mean}"),
            DistSpec::BurrXII(p) => write!(f, "burr:{},{}", p.c, p.k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let d: DistSpec<f64> = "lognormal:0.5,0.5".parse().unwrap();
        assert_eq!(d, DistSpec::LogNormal { mu: 0.5, sigma2: 0.5 });
        assert_eq!(d.to_string(), "lognormal:0.5,0.5");
        let g: DistSpec<f64> = "gamma:1,2".parse().unwrap();
        assert_eq!(g.to_string().parse::<DistSpec<f64>>().unwrap(), g);
    }

    #[test]
    fn rejects_garbage() {
        assert!("gamma".parse::<DistSpec<f64>>().is_err());
        assert!("gamma:1".parse::<DistSpec<f64>>().is_err());
        assert!("gamma:1,-2".parse::<DistSpec<f64>>().is_err());
        assert!("weibull:1,2".parse::<DistSpec<f64>>().is_err());
    }
}
