mod common;

use burrmix::distributions::{BurrParams, DistSpec};
use burrmix::numerics::Integrability;
use burrmix::weighted::{check_integrability, make_weighted, Weight, WeightFn};

fn pairs() -> Vec<(DistSpec<f64>, WeightFn<f64>)> {
    vec![
        (DistSpec::LogNormal { mu: 0.0, sigma2: 0.5 }, WeightFn::Identity),
        (DistSpec::Gamma { shape: 1.0, rate: 1.0 }, WeightFn::power_exp(0.0, 1.0).unwrap()),
        (DistSpec::Gamma { shape: 2.5, rate: 0.7 }, WeightFn::power_exp(1.5, 3.0).unwrap()),
        (DistSpec::BurrXII(BurrParams::new(2.0, 3.0).unwrap()), WeightFn::Identity),
        (DistSpec::Beta { alpha: 2.0, beta: 3.0 }, WeightFn::power_exp(2.0, 0.5).unwrap()),
        (DistSpec::Exponential { mean: 2.0 }, WeightFn::Unit),
    ]
}

#[test]
fn weighted_densities_integrate_to_one() {
    for (f, w) in pairs() {
        let p = make_weighted(f, w, 1e-11).unwrap();
        let top = match f {
            DistSpec::Beta { .. } => 1.0,
            _ => f64::INFINITY,
        };
        let m = if top.is_finite() { common::tanh_sinh(|x| p.weighted_pdf(x), 0.0, top) } else { common::exp_sinh(|x| p.weighted_pdf(x)) };
        assert!((m - 1.0).abs() < 1e-6, "{f} with {w}: {m}");
    }
}

#[test]
fn weighted_density_is_w_times_f_over_normaliser() {
    for (f, w) in pairs() {
        let p = make_weighted(f, w, 1e-11).unwrap();
        for i in 0..200 {
            let x = 10f64.powf(-3.0 + 5.0 * i as f64 / 199.0);
            if let DistSpec::Beta { .. } = f {
                if x >= 1.0 {
                    continue;
                }
            }
            let lhs = p.weighted_pdf(x) * p.normalizer;
            let rhs = w.weight(x) * f.pdf(x);
            assert!((lhs - rhs).abs() <= 1e-8 * rhs.max(1.0), "{f} {w} x={x}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn quadrature_pairs_match_closed_forms() {
    for (f, w, expected) in [
        (DistSpec::LogNormal { mu: 0.0, sigma2: 0.5 }, WeightFn::Identity, DistSpec::LogNormal { mu: 0.5, sigma2: 0.5 }),
        (DistSpec::Gamma { shape: 1.0, rate: 1.0 }, WeightFn::power_exp(0.0, 1.0).unwrap(), DistSpec::Gamma { shape: 1.0, rate: 2.0 }),
        (DistSpec::Gamma { shape: 2.5, rate: 0.7 }, WeightFn::power_exp(1.5, 3.0).unwrap(), DistSpec::Gamma { shape: 4.0, rate: 0.7 + 1.0 / 3.0 }),
    ] {
        let p = make_weighted(f, w, 1e-11).unwrap();
        assert_eq!(p.closed_form, Some(expected));
        for i in 1..400 {
            let x = i as f64 * 0.025;
            assert!((p.weighted_pdf(x) - expected.pdf(x)).abs() < 1e-6, "{f} x={x}");
        }
    }
}

#[test]
fn heavy_tailed_length_bias_is_infeasible() {
    // Pareto(1, 1) has no mean
    assert!(make_weighted(DistSpec::Pareto { shape: 1.0, scale: 1.0 }, WeightFn::Identity, 1e-8).is_err());
    // Burr(1, 0.5) has survival ~ t^-0.5, so E[T] diverges
    assert!(make_weighted(DistSpec::BurrXII(BurrParams::new(1.0, 0.5).unwrap()), WeightFn::Identity, 1e-8).is_err());
}

#[test]
fn integrability_of_debiased_law() {
    // g = Gamma(1, 2), w = e^-x: ∫ g / w = 2 ∫ e^-x = 2
    let g = DistSpec::Gamma { shape: 1.0, rate: 2.0 };
    match check_integrability(|x| g.pdf(x), &WeightFn::power_exp(0.0, 1.0).unwrap(), 1e-10) {
        Integrability::Finite(q) => assert!(f64::abs(q.value - 2.0) < 1e-7),
        other => panic!("{other:?}"),
    }
    // g = Gamma(1, 1), w = e^-2x: g / w grows like e^x
    let g = DistSpec::Gamma { shape: 1.0, rate: 1.0 };
    assert!(check_integrability(|x| g.pdf(x), &WeightFn::power_exp(0.0, 0.5).unwrap(), 1e-8).is_divergent());
    // w = x with g = Gamma(1, 1): g / w ~ 1/x at the origin
    assert!(check_integrability(|x| g.pdf(x), &WeightFn::Identity, 1e-8).is_divergent());
}
