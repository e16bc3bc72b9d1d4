//! Fits and goodness-of-fit statistics on the two bundled datasets.

use gtld::data::builtin;
use gtld::estimation::objectives::{cvm_objective, neg_log_likelihood};
use gtld::estimation::standard_errors;
use gtld::gof::{ad_statistic, cvm_statistic, gof_report, ks_statistic};
use gtld::{fit, model_select, Family, FitOptions, GtldModel, Method};

fn gauge_mle() -> GtldModel {
    GtldModel::from_slice(Family::Gtwe, &[1.056, 0.108, 3.641, 0.669]).unwrap()
}

fn failure_mle() -> GtldModel {
    GtldModel::from_slice(Family::Gte, &[0.099, 0.688, 0.01]).unwrap()
}

#[test]
fn gauge_likelihood_at_reference_estimates() {
    let s = builtin("gauge").unwrap();
    let nll = neg_log_likelihood(&gauge_mle(), &s).unwrap();
    assert!((2.0 * nll - 102.2021).abs() < 0.05, "{}", 2.0 * nll);
}

#[test]
fn gauge_statistics_at_reference_estimates() {
    let s = builtin("gauge").unwrap();
    let m = gauge_mle();
    assert!((ks_statistic(&s, &m).unwrap().statistic - 0.05132).abs() < 0.003);
    assert!((cvm_statistic(&s, &m).unwrap().statistic - 0.02578).abs() < 0.005);
    assert!((ad_statistic(&s, &m).unwrap().statistic - 0.19068).abs() < 0.02);
    assert!((cvm_objective(&m, &s).unwrap() - 0.02578).abs() < 0.01);
}

#[test]
fn failure_statistics_at_reference_estimates() {
    let s = builtin("failure").unwrap();
    let r = gof_report(&s, &failure_mle(), 3).unwrap();
    assert!((r.neg2_loglik - 300.6038).abs() < 0.05);
    assert!((r.ks.statistic - 0.10368).abs() < 0.005);
    assert!((r.cvm.statistic - 0.06591).abs() < 0.01);
    assert!((r.ad.statistic - 0.32867).abs() < 0.05);
}

#[test]
fn gauge_gtwe_fit_and_standard_errors() {
    let s = builtin("gauge").unwrap();
    let r = fit(&s, Family::Gtwe, Method::Ml, &FitOptions::default()).unwrap();
    assert!(r.converged);
    assert!(2.0 * r.objective_value <= 102.26);
    let reference = [1.056, 0.108, 3.641, 0.669];
    let reference_se = [0.174, 0.083, 2.035, 0.576];
    let ses = r
        .std_errors
        .as_ref()
        .expect("positive-definite information");
    for ((est, p), (se, pse)) in r
        .estimates
        .to_vec()
        .iter()
        .zip(reference)
        .zip(ses.iter().zip(reference_se))
    {
        assert!((est - p).abs() <= 2.0 * pse, "{est} vs {p}");
        let se = se.expect("free parameter");
        assert!(se / pse > 0.5 && se / pse < 2.0, "SE {se} vs {pse}");
    }
    assert_eq!(standard_errors(&r, &s).unwrap(), ses.clone());
}

#[test]
fn failure_gte_fit_is_at_least_as_good_as_reference() {
    let s = builtin("failure").unwrap();
    let r = fit(&s, Family::Gte, Method::Ml, &FitOptions::default()).unwrap();
    assert!(r.converged);
    assert!(2.0 * r.objective_value <= 300.6038 + 0.05);
    for (est, (p, se)) in
        r.estimates
            .to_vec()
            .iter()
            .zip([(0.099, 0.038), (0.688, 0.230), (0.01, 0.904)])
    {
        assert!((est - p).abs() <= 2.0 * se, "{est} vs {p}");
    }
}

#[test]
fn failure_model_selection_puts_gte_first() {
    let s = builtin("failure").unwrap();
    let ranked = model_select(
        &s,
        &[
            (Family::Gtw, Method::Ml),
            (Family::Gte, Method::Ml),
            (Family::Gtl, Method::Ml),
        ],
        &FitOptions::default(),
    )
    .unwrap();
    let order: Vec<_> = ranked.iter().map(|c| c.family).collect();
    assert_eq!(order, [Family::Gte, Family::Gtl, Family::Gtw]);
}

#[test]
fn gauge_model_selection_prefers_four_parameter_models_over_gte() {
    let s = builtin("gauge").unwrap();
    let ranked = model_select(
        &s,
        &[
            (Family::Gte, Method::Ml),
            (Family::Gtwe, Method::Ml),
            (Family::Gtw, Method::Ml),
        ],
        &FitOptions::default(),
    )
    .unwrap();
    assert_eq!(ranked.last().unwrap().family, Family::Gte);
    let gtwe = ranked.iter().find(|c| c.family == Family::Gtwe).unwrap();
    assert!((gtwe.report.as_ref().unwrap().aic - 110.2021).abs() < 0.1);
}
