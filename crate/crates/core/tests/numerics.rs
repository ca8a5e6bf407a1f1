mod common;

use std::f64::consts::PI;

use burrmix::distributions::DistSpec;
use burrmix::dpbmm::ChainRng;
use burrmix::numerics::{integrate_finite, integrate_positive_axis, integrate_semiinfinite, slice_sample, GridInverseCdf, Integrability};
use proptest::prelude::*;
use rand::SeedableRng;

type Finite = (&'static str, fn(f64) -> f64, f64, f64, f64);
type SemiInfinite = (&'static str, fn(f64) -> f64, f64);

fn check(name: &str, value: f64, est: f64, exact: f64, tol: f64) {
    let err = (value - exact).abs();
    assert!(err <= tol.max(10.0 * est), "{name}: {value} vs {exact} (est {est})");
}

#[test]
fn closed_form_integrals() {
    let tol = 1e-10;
    let finite: [Finite; 6] = [
        ("x^2", |x| x * x, 0.0, 3.0, 9.0),
        ("sin", f64::sin, 0.0, PI, 2.0),
        ("1/sqrt", |x| 1.0 / x.sqrt(), 0.0, 1.0, 2.0),
        ("ln", f64::ln, 0.0, 1.0, -1.0),
        ("1/(1+x^2)", |x| 1.0 / (1.0 + x * x), -1.0, 1.0, PI / 2.0),
        ("exp", f64::exp, -2.0, 1.0, 1f64.exp() - (-2f64).exp()),
    ];
    for (name, f, a, b, exact) in finite {
        let q = integrate_finite(f, a, b, tol);
        check(name, q.value, q.abs_error_estimate, exact, 1e-9);
    }
    let infinite: [SemiInfinite; 4] = [
        ("e^-x", |x| (-x).exp(), 1.0),
        ("x e^-x^2", |x| x * (-x * x).exp(), 0.5),
        ("1/(1+x)^2", |x| (1.0 + x).powi(-2), 1.0),
        ("x^-0.5 e^-x", |x| x.powf(-0.5) * (-x).exp(), PI.sqrt()),
    ];
    for (name, f, exact) in infinite {
        let q = integrate_semiinfinite(f, tol);
        check(name, q.value, q.abs_error_estimate, exact, 1e-8);
        match integrate_positive_axis(f, tol, 1e12) {
            Integrability::Finite(q) => check(name, q.value, q.abs_error_estimate, exact, 1e-8),
            d => panic!("{name}: {d:?}"),
        }
    }
}

#[test]
fn divergent_integrals_are_flagged() {
    assert!(integrate_positive_axis(|x: f64| 1.0 / (1.0 + x), 1e-8, 1e12).is_divergent());
    assert!(integrate_positive_axis(|x: f64| 1.0 / x, 1e-8, 1e12).is_divergent());
}

fn slice_chain(log_target: impl Fn(f64) -> f64, x0: f64, lo: f64, hi: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChainRng::seed_from_u64(seed);
    let mut x = x0;
    (0..n)
        .map(|_| {
            x = slice_sample(&log_target, x, lo, hi, &mut rng, 3).unwrap();
            x
        })
        .collect()
}

#[test]
fn slice_sampler_targets() {
    let n = 100_000;
    let normal = slice_chain(|x| -0.5 * x * x, 0.0, -10.0, 10.0, n, 11);
    assert!(common::ks(&normal, common::normal_cdf) < 0.02);

    let gamma = DistSpec::Gamma { shape: 3.0, rate: 2.0 };
    let xs = slice_chain(|x| gamma.ln_pdf(x), 1.0, 0.0, 30.0, n, 12);
    assert!(common::ks(&xs, |x| gamma.cdf(x)) < 0.02);

    let beta = DistSpec::Beta { alpha: 0.5, beta: 0.5 };
    let xs = slice_chain(|x| beta.ln_pdf(x), 0.5, 0.0, 1.0, n, 13);
    assert!(common::ks(&xs, |x| beta.cdf(x)) < 0.02);
}

#[test]
fn slice_sampler_rejects_bad_start() {
    let mut rng = ChainRng::seed_from_u64(0);
    assert!(slice_sample(|x: f64| if x > 1.0 { 0.0 } else { f64::NEG_INFINITY }, 0.5, 0.0, 2.0, &mut rng, 1).is_err());
    assert!(slice_sample(|x: f64| -x, 0.5, 1.0, 0.0, &mut rng, 1).is_err());
}

fn grid_ks(n_grid: usize) -> f64 {
    let target = DistSpec::Gamma { shape: 2.0, rate: 1.0 };
    let g = GridInverseCdf::new(|x| target.pdf(x), 0.0, 25.0, n_grid).unwrap();
    // Deterministic stratified quantiles isolate the discretisation error.
    let m = 20_000;
    let xs: Vec<f64> = (0..m).map(|i| g.quantile((i as f64 + 0.5) / m as f64)).collect();
    common::ks(&xs, |x| target.cdf(x))
}

#[test]
fn grid_inverse_cdf_converges() {
    let errs: Vec<f64> = [25, 50, 100, 200, 400].into_iter().map(grid_ks).collect();
    for w in errs.windows(2) {
        assert!(w[1] < w[0], "{errs:?}");
    }
    assert!(errs[4] < 1e-3, "{errs:?}");
}

proptest! {
    #[test]
    fn polynomial_integrals_are_exact(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, lo in -2.0f64..0.0, hi in 0.1f64..3.0) {
        let f = |x: f64| a + b * x + c * x * x;
        let anti = |x: f64| a * x + b * x * x / 2.0 + c * x * x * x / 3.0;
        let q = integrate_finite(f, lo, hi, 1e-12);
        prop_assert!((q.value - (anti(hi) - anti(lo))).abs() < 1e-10);
    }

    #[test]
    fn grid_quantiles_are_monotone(u1 in 0.0f64..1.0, u2 in 0.0f64..1.0) {
        let g = GridInverseCdf::new(|x: f64| (-x).exp(), 0.0, 20.0, 64).unwrap();
        let (lo, hi) = if u1 <= u2 { (u1, u2) } else { (u2, u1) };
        prop_assert!(g.quantile(lo) <= g.quantile(hi));
    }
}
