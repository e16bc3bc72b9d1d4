//! Goodness-of-fit statistics and AIC-based model selection.
//!
//! p-values come from the asymptotic null distributions for a fully
//! specified model; they ignore the fact that parameters were estimated
//! from the same data, and are therefore conservative.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GtldError, Result};
use crate::estimation::{
    ad_from_values, cvm_from_cdf, fit, neg_log_likelihood, FitOptions, FitResult, Method,
};
use crate::model::{GtldModel, InnerTransform, Sample};
use crate::numerics::{integrate, QuadratureSpec};
use crate::subfamilies::Family;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GofReport {
    pub neg2_loglik: f64,
    pub aic: f64,
    pub ks: TestResult,
    pub cvm: TestResult,
    pub ad: TestResult,
    pub n: usize,
}

fn sorted_cdf<T: InnerTransform>(model: &GtldModel<T>, sample: &Sample) -> Result<Vec<f64>> {
    sample.sorted().iter().map(|x| model.cdf(*x)).collect()
}

/// Kolmogorov distribution `P(K ≤ x)` for `K = sup |B(t)|` of a Brownian
/// bridge.
pub fn kolmogorov_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < 1.0 {
        // Jacobi-transformed series converges fast for small x
        let c = -std::f64::consts::PI.powi(2) / (8.0 * x * x);
        let s: f64 = (1..=20)
            .map(|k| {
                let m = (2 * k - 1) as f64;
                (c * m * m).exp()
            })
            .sum();
        (2.0 * std::f64::consts::PI).sqrt() / x * s
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let k = k as f64;
                let sign = if k as i64 % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * k * k * x * x).exp()
            })
            .sum();
        1.0 - 2.0 * s
    }
}

/// `K_ν(z) = ∫₀^∞ e^{−z cosh t} cosh(νt) dt` for `z > 0`.
fn bessel_k(nu: f64, z: f64) -> f64 {
    let spec = QuadratureSpec::new(1e-300, 1e-12, 500).expect("valid spec");
    // the integrand is negligible once z·cosh t exceeds z + 750
    let upper = (1.0 + 750.0 / z).acosh() + 1.0;
    integrate(
        |t| (-z * t.cosh()).exp() * (nu * t).cosh(),
        0.0,
        upper,
        &spec,
    )
    .map(|q| q.value)
    .unwrap_or(f64::NAN)
}

/// Asymptotic distribution function of the Cramér–von Mises statistic
/// (Anderson and Darling, 1952):
///
/// `F(x) = (1/(π√x)) Σ_j Γ(j+½)/(Γ(½) j!) √(4j+1) e^{−z_j} K_{1/4}(z_j)`,
/// `z_j = (4j+1)²/(16x)`.
pub fn cvm_asymptotic_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x > 10.0 {
        return 1.0;
    }
    let mut total = 0.0;
    let mut coef = 1.0; // Γ(j+½)/(Γ(½) j!)
    for j in 0..200 {
        let m = 4.0 * j as f64 + 1.0;
        let z = m * m / (16.0 * x);
        if z > 700.0 {
            break;
        }
        total += coef * m.sqrt() * (-z).exp() * bessel_k(0.25, z);
        coef *= (j as f64 + 0.5) / (j as f64 + 1.0);
    }
    (total / (std::f64::consts::PI * x.sqrt())).clamp(0.0, 1.0)
}

/// Asymptotic distribution function of the Anderson–Darling statistic,
/// Marsaglia and Marsaglia's (2004) `adinf` approximation.
pub fn ad_asymptotic_cdf(z: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    let v = if z < 2.0 {
        (-1.233_714_1 / z).exp() / z.sqrt()
            * (2.000_12
                + (0.247_105
                    - (0.064_982_1 - (0.034_796_2 - (0.011_672 - 0.001_686_91 * z) * z) * z) * z)
                    * z)
    } else {
        (-(1.077_6
            - (2.306_95 - (0.434_24 - (0.082_433 - (0.008_056 - 0.000_314_6 * z) * z) * z) * z)
                * z)
            .exp())
        .exp()
    };
    v.clamp(0.0, 1.0)
}

/// Kolmogorov–Smirnov: `D = max_i max(i/n − F(x_(i)), F(x_(i)) − (i−1)/n)`,
/// p-value `1 − K(√n D)`.
pub fn ks_from_cdf(f: &[f64]) -> TestResult {
    let n = f.len() as f64;
    let d = f
        .iter()
        .enumerate()
        .map(|(i, fi)| {
            let i = i as f64;
            ((i + 1.0) / n - fi).max(fi - i / n)
        })
        .fold(0.0, f64::max);
    TestResult {
        statistic: d,
        p_value: 1.0 - kolmogorov_cdf(n.sqrt() * d),
    }
}

pub fn ks_statistic<T: InnerTransform>(
    sample: &Sample,
    model: &GtldModel<T>,
) -> Result<TestResult> {
    Ok(ks_from_cdf(&sorted_cdf(model, sample)?))
}

pub fn cvm_statistic<T: InnerTransform>(
    sample: &Sample,
    model: &GtldModel<T>,
) -> Result<TestResult> {
    let w2 = cvm_from_cdf(&sorted_cdf(model, sample)?);
    Ok(TestResult {
        statistic: w2,
        p_value: 1.0 - cvm_asymptotic_cdf(w2),
    })
}

pub fn ad_statistic<T: InnerTransform>(
    sample: &Sample,
    model: &GtldModel<T>,
) -> Result<TestResult> {
    let f = sorted_cdf(model, sample)?;
    let s: Vec<f64> = sample
        .sorted()
        .iter()
        .map(|x| model.survival(*x))
        .collect::<Result<_>>()?;
    let a2 = ad_from_values(&f, &s).value;
    Ok(TestResult {
        statistic: a2,
        p_value: 1.0 - ad_asymptotic_cdf(a2),
    })
}

/// Full report for a fitted model with `k` free parameters.
pub fn gof_report<T: InnerTransform>(
    sample: &Sample,
    model: &GtldModel<T>,
    k: usize,
) -> Result<GofReport> {
    let neg2 = 2.0 * neg_log_likelihood(model, sample)?;
    Ok(GofReport {
        neg2_loglik: neg2,
        aic: neg2 + 2.0 * k as f64,
        ks: ks_statistic(sample, model)?,
        cvm: cvm_statistic(sample, model)?,
        ad: ad_statistic(sample, model)?,
        n: sample.len(),
    })
}

/// Report for a [`FitResult`]; fixed parameters do not count towards `k`.
pub fn report_for_fit(sample: &Sample, result: &FitResult) -> Result<GofReport> {
    let k = result.family.n_params() - result.fixed.len();
    gof_report(sample, &result.model()?, k)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub family: Family,
    pub method: Method,
    pub fit: Option<FitResult>,
    pub report: Option<GofReport>,
    pub error: Option<String>,
}

/// Fit every candidate and rank by AIC (ties by KS statistic). Candidates
/// whose fit failed are kept, with the error, at the end of the ranking.
pub fn model_select(
    sample: &Sample,
    candidates: &[(Family, Method)],
    options: &FitOptions,
) -> Result<Vec<Candidate>> {
    if candidates.is_empty() {
        return Err(GtldError::Domain(
            "model selection needs at least one candidate".into(),
        ));
    }
    let mut out: Vec<Candidate> = candidates
        .par_iter()
        .map(|&(family, method)| {
            let attempt = fit(sample, family, method, options)
                .and_then(|r| report_for_fit(sample, &r).map(|g| (r, g)));
            match attempt {
                Ok((r, g)) => Candidate {
                    family,
                    method,
                    fit: Some(r),
                    report: Some(g),
                    error: None,
                },
                Err(e) => Candidate {
                    family,
                    method,
                    fit: None,
                    report: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    out.sort_by(|a, b| match (&a.report, &b.report) {
        (Some(x), Some(y)) => x
            .aic
            .total_cmp(&y.aic)
            .then(x.ks.statistic.total_cmp(&y.ks.statistic)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    Ok(out)
}
