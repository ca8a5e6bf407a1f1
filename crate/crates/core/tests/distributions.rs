mod common;

use burrmix::distributions::{BurrParams, DistSpec};
use burrmix::dpbmm::ChainRng;
use proptest::prelude::*;
use rand::SeedableRng;

/// Seed shared by every sampler goodness-of-fit check below.
const KS_SEED: u64 = 20_240_601;
/// Two-sided KS critical value at level 0.001 for n = 10^4.
const KS_CRIT_1E4: f64 = 1.949 / 100.0;

fn burr() -> impl Strategy<Value = BurrParams<f64>> {
    (0.3f64..6.0, 0.2f64..6.0).prop_map(|(c, k)| BurrParams::new(c, k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cdf_derivative_is_the_pdf(p in burr(), e in -3.0f64..3.0) {
        let t = 10f64.powf(e);
        let f = |x: f64| p.cdf(x);
        let d = |h: f64| (f(t + h) - f(t - h)) / (2.0 * h);
        let h = 1e-3 * t;
        let richardson = (4.0 * d(h / 2.0) - d(h)) / 3.0;
        let pdf = p.pdf(t);
        prop_assert!((richardson - pdf).abs() <= 1e-5 * pdf.max(1.0), "t={t} {richardson} vs {pdf}");
    }

    #[test]
    fn quantile_round_trip(p in burr(), u in 1e-9f64..(1.0 - 1e-9)) {
        let t = p.quantile(u);
        prop_assert!((p.cdf(t) - u).abs() <= 1e-12, "u={u} t={t} cdf={}", p.cdf(t));
    }

    #[test]
    fn survival_plus_cdf_is_one(p in burr(), t in 0.0f64..100.0) {
        prop_assert!((p.survival(t) + p.cdf(t) - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn log_time_pdf_agrees(p in burr(), e in -3.0f64..3.0) {
        let t = 10f64.powf(e);
        prop_assert!((p.ln_pdf_log_time(t.ln()) - p.ln_pdf(t)).abs() <= 1e-12 * p.ln_pdf(t).abs().max(1.0));
    }
}

#[test]
fn every_sampler_passes_ks_at_level_0_001() {
    let specs = [
        DistSpec::LogNormal { mu: 0.5, sigma2: 0.5 },
        DistSpec::Gamma { shape: 1.0, rate: 2.0 },
        DistSpec::Gamma { shape: 0.4, rate: 1.0 },
        DistSpec::InverseGamma { shape: 4.0, scale: 4.0 },
        DistSpec::Pareto { shape: 4.0, scale: 1.5 },
        DistSpec::Beta { alpha: 2.0, beta: 0.7 },
        DistSpec::Uniform { lo: -1.0, hi: 3.0 },
        DistSpec::Exponential { mean: 2.5 },
        DistSpec::BurrXII(BurrParams::new(2.0, 3.0).unwrap()),
        DistSpec::BurrXII(BurrParams::new(0.5, 0.8).unwrap()),
    ];
    let mut rng = ChainRng::seed_from_u64(KS_SEED);
    for spec in specs {
        let xs: Vec<f64> = (0..10_000).map(|_| spec.sample(&mut rng)).collect();
        let d = common::ks(&xs, |x| spec.cdf(x));
        assert!(d < KS_CRIT_1E4, "{spec}: D = {d}");
    }
}

#[test]
fn lognormal_cdf_matches_independent_formula() {
    let spec = DistSpec::LogNormal { mu: 0.5, sigma2: 0.5 };
    for &x in &[0.1, 0.7, 1.6, 4.0, 12.0] {
        assert!((spec.cdf(x) - common::lognormal_cdf(x, 0.5, 0.5)).abs() < 1e-14);
        assert!((spec.pdf(x) - common::lognormal_pdf(x, 0.5, 0.5)).abs() < 1e-14);
    }
}

#[test]
fn burr_density_integrates_to_one() {
    for (c, k) in [(2.0, 3.0), (0.7, 1.5), (4.0, 0.6)] {
        let p = BurrParams::new(c, k).unwrap();
        let m = common::exp_sinh(|t| p.pdf(t));
        assert!((m - 1.0).abs() < 1e-9, "({c},{k}) {m}");
    }
}

#[test]
fn f32_burr_follows_f64() {
    let p32 = BurrParams::new(2.0f32, 3.0).unwrap();
    let p64 = BurrParams::new(2.0f64, 3.0).unwrap();
    for &t in &[0.1, 0.5, 1.0, 2.0] {
        assert!((p32.cdf(t as f32) as f64 - p64.cdf(t)).abs() < 1e-6);
    }
}
