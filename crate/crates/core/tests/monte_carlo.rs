//! Distributional properties against brute-force simulation.

use gtld::gof::ks_statistic;
use gtld::numerics::{integrate, QuadratureSpec};
use gtld::properties::{
    mgf, order_stat_pdf, pwm, raw_moment, residual_moment, reversed_residual_moment,
    stress_strength, MomentMethod,
};
use gtld::{Family, GtldModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DRAWS: usize = 1_000_000;

fn model(family: Family, p: &[f64]) -> GtldModel {
    GtldModel::from_slice(family, p).unwrap()
}

/// Mean and standard error of `g` over `DRAWS` draws.
fn mc_mean(m: &GtldModel, seed: u64, g: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vals: Vec<f64> = (0..DRAWS).map(|_| g(m.draw(&mut rng))).collect();
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Conditional mean of `g(X)` given `keep(X)`, with its standard error.
fn mc_conditional(
    m: &GtldModel,
    seed: u64,
    keep: impl Fn(f64) -> bool,
    g: impl Fn(f64) -> f64,
) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vals: Vec<f64> = (0..DRAWS)
        .map(|_| m.draw(&mut rng))
        .filter(|x| keep(*x))
        .map(g)
        .collect();
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn exponential_sample_passes_ks() {
    let m = model(Family::Gte, &[1.0, 1.0, 0.0]);
    let s = m.sample(10_000, 5).unwrap();
    let t = ks_statistic(&s, &m).unwrap();
    assert!(t.p_value > 0.01, "KS p = {}", t.p_value);
}

#[test]
fn quantiles_match_empirical_quantiles() {
    let m = model(Family::Gtwe, &[0.5, 2.0, 0.5, 0.5]);
    let s = m.sample(DRAWS, 6).unwrap();
    let sorted = s.sorted();
    for p in [0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95] {
        let empirical = sorted[(p * DRAWS as f64) as usize];
        let q = m.quantile(p).unwrap();
        assert!((q - empirical).abs() < 0.01, "p = {p}: {q} vs {empirical}");
    }
}

#[test]
fn probability_weighted_moment() {
    let m = model(Family::Gtw, &[2.0, 1.0, 2.0, 0.5]);
    let (mean, se) = mc_mean(&m, 7, |x| x * m.cdf(x).unwrap());
    let v = pwm(&m, 1, 1).unwrap();
    assert!((v - mean).abs() < 3.0 * se, "{v} vs {mean} ± {se}");
}

#[test]
fn moment_generating_function() {
    let m = model(Family::Gtwe, &[0.5, 2.0, 0.5, 0.5]);
    let (mean, se) = mc_mean(&m, 8, |x| (0.1 * x).exp());
    let v = mgf(&m, 0.1).unwrap();
    assert!((v - mean).abs() < 3.0 * se, "{v} vs {mean} ± {se}");
}

#[test]
fn stress_strength_probability() {
    let r = stress_strength(0.2, 0.8).unwrap();
    assert!((r - 0.6).abs() < 1e-15);
    let m1 = model(Family::Gtwe, &[0.5, 2.0, 0.5, 0.2]);
    let m2 = model(Family::Gtwe, &[0.5, 2.0, 0.5, 0.8]);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let wins = (0..DRAWS)
        .filter(|_| m1.draw(&mut rng) > m2.draw(&mut rng))
        .count();
    let p = wins as f64 / DRAWS as f64;
    let se = (p * (1.0 - p) / DRAWS as f64).sqrt();
    assert!((p - r).abs() < 3.0 * se, "{p} vs {r}");
}

#[test]
fn third_of_five_order_statistic() {
    let m = model(Family::Gte, &[1.0, 1.0, 0.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let reps = 100_000;
    let mut thirds: Vec<f64> = (0..reps)
        .map(|_| {
            let mut v: Vec<f64> = (0..5).map(|_| m.draw(&mut rng)).collect();
            v.sort_by(f64::total_cmp);
            v[2]
        })
        .collect();
    thirds.sort_by(f64::total_cmp);
    let spec = QuadratureSpec::default();
    let mut cdf = 0.0;
    let mut prev = 0.0;
    let mut worst = 0.0_f64;
    for k in 1..=60 {
        let x = k as f64 * 0.05;
        cdf += integrate(|t| order_stat_pdf(&m, 5, 3, t).unwrap(), prev, x, &spec)
            .unwrap()
            .value;
        prev = x;
        let empirical = thirds.partition_point(|v| *v <= x) as f64 / reps as f64;
        worst = worst.max((cdf - empirical).abs());
    }
    assert!(worst < 0.01, "KS distance {worst}");
}

#[test]
fn mean_residual_life() {
    let m = model(Family::Gtw, &[2.0, 1.0, 2.0, 0.5]);
    let t = 0.5;
    let (mean, se) = mc_conditional(&m, 11, |x| x > t, |x| x - t);
    let v = residual_moment(&m, 1, t).unwrap();
    assert!((v - mean).abs() < 3.0 * se, "{v} vs {mean} ± {se}");
}

#[test]
fn mean_waiting_time() {
    let m = model(Family::Gtw, &[2.0, 1.0, 2.0, 0.5]);
    let t = 1.0;
    let (mean, se) = mc_conditional(&m, 12, |x| x <= t, |x| t - x);
    let v = reversed_residual_moment(&m, 1, t).unwrap();
    assert!((v - mean).abs() < 3.0 * se, "{v} vs {mean} ± {se}");
}

#[test]
fn waiting_time_far_out_approaches_t_minus_mean() {
    let m = model(Family::Gtw, &[2.0, 1.0, 2.0, 0.5]);
    let t = 50.0 * m.quantile(0.5).unwrap();
    let mean = raw_moment(&m, 1, MomentMethod::Quadrature).unwrap();
    let v = reversed_residual_moment(&m, 1, t).unwrap();
    assert!(((v - (t - mean)) / (t - mean)).abs() < 0.01);
}

#[test]
fn sample_mean_matches_first_moment() {
    let m = model(Family::Gtmw, &[1.5, 0.3, 1.0, 2.0, -0.4]);
    let (mean, se) = mc_mean(&m, 13, |x| x);
    let v = raw_moment(&m, 1, MomentMethod::Quadrature).unwrap();
    assert!((v - mean).abs() < 3.0 * se, "{v} vs {mean} ± {se}");
}
