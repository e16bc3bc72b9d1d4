//! Point estimation: maximum likelihood and five minimum-distance methods.
//!
//! All methods share one driver, [`fit`], which minimizes the chosen
//! objective over unconstrained coordinates — `log p` for every positive
//! parameter and `atanh λ` for the transmutation weight — so every iterate
//! is a valid parameter vector. Several starts are run (a moment-matched
//! heuristic plus jittered copies) and the best converged one is kept.

pub mod objectives;
pub mod optim;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

pub use objectives::{
    ad_from_values, ad_objective, cvm_from_cdf, cvm_objective, evaluate, neg_log_likelihood,
    ols_from_cdf, ols_objective, rtad_from_values, rtad_objective, wls_from_cdf, wls_objective,
    Evaluation, Method, LOG_CLAMP,
};
use optim::{minimize, OptimOptions};

use crate::config::parse_entries;
use crate::error::{GtldError, Result};
use crate::model::{GtldModel, InnerTransform, ParamVector, Sample};
use crate::subfamilies::{Family, Transform};

/// `|λ|` is kept at or below this during optimization.
pub const LAMBDA_CAP: f64 = 1.0 - 1e-10;

const GTP1_PENALTY: f64 = 1e10;

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Total number of starts, including the heuristic one.
    pub starts: usize,
    pub seed: u64,
    /// Replaces the heuristic starting point.
    pub init: Option<ParamVector>,
    /// Parameters held at a given value, keyed by name (`alpha`, `beta`, …).
    pub fixed: BTreeMap<String, f64>,
    pub optim: OptimOptions,
    /// Compute observed-information standard errors for ML fits.
    pub standard_errors: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            starts: 5,
            seed: 0,
            init: None,
            fixed: BTreeMap::new(),
            optim: OptimOptions::default(),
            standard_errors: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub family: Family,
    pub method: Method,
    pub param_names: Vec<&'static str>,
    pub estimates: ParamVector,
    /// Per parameter; `None` for fixed parameters. The whole vector is
    /// absent when not requested or when the Hessian is not positive
    /// definite.
    pub std_errors: Option<Vec<Option<f64>>>,
    pub objective_value: f64,
    pub converged: bool,
    pub iterations: usize,
    pub starts_converged: usize,
    pub clamp_events: usize,
    pub fixed: Vec<&'static str>,
}

impl FitResult {
    pub fn model(&self) -> Result<GtldModel> {
        GtldModel::from_params(self.family, &self.estimates)
    }
}

/// Which coordinates are free and where the fixed ones sit.
#[derive(Debug, Clone)]
struct Layout {
    family: Family,
    free: Vec<usize>,
    base: Vec<f64>,
    lambda_index: usize,
    gtp1_limit: Option<f64>,
}

impl Layout {
    fn new(
        family: Family,
        fixed: &BTreeMap<String, f64>,
        start: &ParamVector,
        sample: &Sample,
    ) -> Result<Self> {
        let names = family.param_names();
        let mut base = start.to_vec();
        let mut free = Vec::new();
        for key in fixed.keys() {
            if !names.contains(&key.as_str()) {
                return Err(GtldError::Domain(format!(
                    "`{key}` is not a parameter of {family} (expected one of {})",
                    names.join(", ")
                )));
            }
        }
        for (i, name) in names.iter().enumerate() {
            match fixed.get(*name) {
                Some(v) => base[i] = *v,
                None => free.push(i),
            }
        }
        ParamVector::from_slice(&base, family.shape_names().len())?;
        Ok(Self {
            family,
            free,
            lambda_index: names.len() - 1,
            base,
            gtp1_limit: (family == Family::Gtp1).then(|| sample.min() * (1.0 - 1e-9)),
        })
    }

    fn encode(&self, p: &[f64]) -> Vec<f64> {
        self.free
            .iter()
            .map(|&i| {
                if i == self.lambda_index {
                    p[i].clamp(-LAMBDA_CAP, LAMBDA_CAP).atanh()
                } else {
                    p[i].ln()
                }
            })
            .collect()
    }

    fn decode(&self, z: &[f64]) -> Vec<f64> {
        let mut p = self.base.clone();
        for (&i, zi) in self.free.iter().zip(z) {
            p[i] = if i == self.lambda_index {
                zi.tanh().clamp(-LAMBDA_CAP, LAMBDA_CAP)
            } else {
                zi.exp()
            };
        }
        p
    }

    /// Objective at natural parameters, with the support barrier for `gtp1`.
    fn objective(&self, method: Method, p: &[f64], sample: &Sample) -> f64 {
        let mut p = p.to_vec();
        let mut penalty = 0.0;
        if let Some(limit) = self.gtp1_limit {
            if p[0] > limit {
                penalty = GTP1_PENALTY * (p[0] - limit).powi(2);
                p[0] = limit;
            }
        }
        match GtldModel::from_slice(self.family, &p) {
            Ok(m) => match evaluate(method, &m, sample) {
                Ok(e) if e.value.is_finite() => e.value + penalty,
                _ => f64::INFINITY,
            },
            Err(_) => f64::INFINITY,
        }
    }
}

fn shape_grid(family: Family, sample: &Sample) -> Vec<Vec<f64>> {
    let powers = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0];
    let mean = sample.mean();
    match family {
        Family::Gte | Family::Gtr => vec![vec![]],
        Family::Gtw | Family::Gtwe | Family::Gtb12 => powers.iter().map(|a| vec![*a]).collect(),
        Family::Gtmw => {
            let mut out = Vec::new();
            for a in [0.5, 1.0, 2.0, 3.0] {
                for g in [0.01, 0.1, 1.0] {
                    out.push(vec![a, g / mean]);
                }
            }
            out
        }
        Family::Gtl => [0.1, 0.5, 1.0, 2.0, 10.0]
            .iter()
            .map(|k| vec![k * mean])
            .collect(),
        Family::Gtp1 => [0.5, 0.8, 0.95]
            .iter()
            .map(|k| vec![k * sample.min()])
            .collect(),
    }
}

/// Starting point with θ = 1 and λ = 0, where `G(X)` is exponential with
/// rate β; β is then matched by its first moment, `β = n / Σ G(x_i)`. Shape
/// parameters come from a small grid, keeping the candidate with the best
/// likelihood. Fixed parameters override the heuristic.
pub fn heuristic_start(
    family: Family,
    sample: &Sample,
    fixed: &BTreeMap<String, f64>,
) -> Result<ParamVector> {
    let names = family.param_names();
    let k = family.shape_names().len();
    let mut best: Option<(f64, ParamVector)> = None;
    for mut shape in shape_grid(family, sample) {
        for (i, s) in shape.iter_mut().enumerate() {
            if let Some(v) = fixed.get(names[i]) {
                *s = *v;
            }
        }
        let Ok(t) = Transform::new(family, &shape) else {
            continue;
        };
        let sum_g: f64 = sample.values().iter().map(|x| t.eval(*x)).sum();
        let mut beta = sample.len() as f64 / sum_g;
        if let Some(v) = fixed.get("beta") {
            beta = *v;
        }
        let theta = fixed.get("theta").copied().unwrap_or(1.0);
        let lambda = fixed.get("lambda").copied().unwrap_or(0.0);
        let Ok(p) = ParamVector::new(shape, beta, theta, lambda) else {
            continue;
        };
        let Ok(m) = GtldModel::from_params(family, &p) else {
            continue;
        };
        let Ok(nll) = neg_log_likelihood(&m, sample) else {
            continue;
        };
        if nll.is_finite() && best.as_ref().map_or(true, |(b, _)| nll < *b) {
            best = Some((nll, p));
        }
    }
    debug_assert!(k == names.len() - 3);
    best.map(|(_, p)| p).ok_or(GtldError::AllStartsFailed)
}

/// Fit `family` to `sample` by `method`.
pub fn fit(
    sample: &Sample,
    family: Family,
    method: Method,
    options: &FitOptions,
) -> Result<FitResult> {
    let start = match &options.init {
        Some(p) => {
            GtldModel::from_params(family, p)?;
            p.clone()
        }
        None => heuristic_start(family, sample, &options.fixed)?,
    };
    let layout = Layout::new(family, &options.fixed, &start, sample)?;
    let z0 = layout.encode(&layout.base);
    let mut starts = vec![z0.clone()];
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let jitter = Normal::new(0.0, 0.5).expect("valid normal");
    for _ in 1..options.starts.max(1) {
        starts.push(z0.iter().map(|z| z + jitter.sample(&mut rng)).collect());
    }
    let f = |z: &[f64]| layout.objective(method, &layout.decode(z), sample);
    let outcomes: Vec<_> = starts
        .par_iter()
        .map(|z| minimize(&f, z, &options.optim))
        .collect();
    let starts_converged = outcomes
        .iter()
        .filter(|o| o.converged && o.value.is_finite())
        .count();
    let iterations = outcomes.iter().map(|o| o.iterations).sum();
    let pick = |require_converged: bool| {
        outcomes
            .iter()
            .filter(|o| o.value.is_finite() && (o.converged || !require_converged))
            .min_by(|a, b| a.value.total_cmp(&b.value))
    };
    let best = pick(true)
        .or_else(|| pick(false))
        .ok_or(GtldError::AllStartsFailed)?;
    let mut p = layout.decode(&best.x);
    if let Some(limit) = layout.gtp1_limit {
        p[0] = p[0].min(limit);
    }
    let estimates = ParamVector::from_slice(&p, family.shape_names().len())?;
    let model = GtldModel::from_params(family, &estimates)?;
    let eval = evaluate(method, &model, sample)?;
    let names = family.param_names();
    let fixed = layout.free_complement(&names);
    let mut result = FitResult {
        family,
        method,
        param_names: names,
        estimates,
        std_errors: None,
        objective_value: eval.value,
        converged: best.converged,
        iterations,
        starts_converged,
        clamp_events: eval.clamp_events,
        fixed,
    };
    if method == Method::Ml && options.standard_errors && result.converged {
        result.std_errors = standard_errors(&result, sample).ok();
    }
    Ok(result)
}

impl Layout {
    fn free_complement(&self, names: &[&'static str]) -> Vec<&'static str> {
        names
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.free.contains(i))
            .map(|(_, n)| *n)
            .collect()
    }
}

/// Observed-information standard errors: square roots of the diagonal of
/// the inverse central-difference Hessian of the negative log-likelihood,
/// step `h = 1e-4·max(|p|, 1)` shrunk to stay inside the parameter space.
/// Fixed parameters get `None`.
pub fn standard_errors(result: &FitResult, sample: &Sample) -> Result<Vec<Option<f64>>> {
    let family = result.family;
    let names = family.param_names();
    let p = result.estimates.to_vec();
    let free: Vec<usize> = (0..p.len())
        .filter(|i| !result.fixed.contains(&names[*i]))
        .collect();
    let lambda_index = p.len() - 1;
    let min_x = sample.min();
    let steps: Vec<f64> = free
        .iter()
        .map(|&i| {
            let mut h = 1e-4 * p[i].abs().max(1.0);
            if i == lambda_index {
                h = h.min(0.5 * (1.0 - p[i].abs()).max(1e-12));
            } else {
                h = h.min(0.5 * p[i]);
                if family == Family::Gtp1 && i == 0 {
                    h = h.min(0.5 * (min_x - p[0]));
                }
            }
            h
        })
        .collect();
    let nll = |q: &[f64]| -> f64 {
        GtldModel::from_slice(family, q)
            .and_then(|m| neg_log_likelihood(&m, sample))
            .unwrap_or(f64::NAN)
    };
    let k = free.len();
    let f0 = nll(&p);
    let mut hess = DMatrix::<f64>::zeros(k, k);
    let shifted = |moves: &[(usize, f64)]| {
        let mut q = p.clone();
        for (i, d) in moves {
            q[*i] += d;
        }
        nll(&q)
    };
    for a in 0..k {
        let (ia, ha) = (free[a], steps[a]);
        let fp = shifted(&[(ia, ha)]);
        let fm = shifted(&[(ia, -ha)]);
        hess[(a, a)] = (fp - 2.0 * f0 + fm) / (ha * ha);
        for b in 0..a {
            let (ib, hb) = (free[b], steps[b]);
            let v = (shifted(&[(ia, ha), (ib, hb)])
                - shifted(&[(ia, ha), (ib, -hb)])
                - shifted(&[(ia, -ha), (ib, hb)])
                + shifted(&[(ia, -ha), (ib, -hb)]))
                / (4.0 * ha * hb);
            hess[(a, b)] = v;
            hess[(b, a)] = v;
        }
    }
    if hess.iter().any(|v| !v.is_finite()) {
        return Err(GtldError::SingularHessian);
    }
    let chol = hess.cholesky().ok_or(GtldError::SingularHessian)?;
    let cov = chol.inverse();
    let mut out = vec![None; p.len()];
    for (a, &i) in free.iter().enumerate() {
        let v = cov[(a, a)];
        if !(v > 0.0) || !v.is_finite() {
            return Err(GtldError::SingularHessian);
        }
        out[i] = Some(v.sqrt());
    }
    Ok(out)
}

/// `ln u_i` with `u_i = 1 − exp(−β G(x_i))`.
fn ln_u_values(family: Family, shape: &[f64], beta: f64, sample: &Sample) -> Result<Vec<f64>> {
    let t = Transform::new(family, shape)?;
    sample
        .values()
        .iter()
        .map(|x| {
            let bg = beta * t.eval(*x);
            if !(bg > 0.0) {
                return Err(GtldError::OutOfSupport {
                    x: *x,
                    low: t.support_low(),
                });
            }
            Ok((-(-bg).exp_m1()).ln())
        })
        .collect()
}

/// Score `∂ℓ/∂θ` with every other parameter held fixed.
pub fn theta_score(family: Family, params: &ParamVector, sample: &Sample) -> Result<f64> {
    let lu = ln_u_values(family, &params.shape, params.beta, sample)?;
    let (th, l) = (params.theta, params.lambda);
    let n = lu.len() as f64;
    Ok(n / th
        + lu.iter()
            .map(|ln_u| {
                let v = (th * ln_u).exp();
                ln_u - 2.0 * l * v * ln_u / (1.0 + l - 2.0 * l * v)
            })
            .sum::<f64>())
}

/// `∂²ℓ/∂θ²` with every other parameter held fixed.
pub fn theta_curvature(family: Family, params: &ParamVector, sample: &Sample) -> Result<f64> {
    let lu = ln_u_values(family, &params.shape, params.beta, sample)?;
    let (th, l) = (params.theta, params.lambda);
    let n = lu.len() as f64;
    Ok(-n / (th * th)
        + lu.iter()
            .map(|ln_u| {
                let v = (th * ln_u).exp();
                let d = 1.0 + l - 2.0 * l * v;
                let num = -2.0 * l * v * ln_u;
                let num_prime = num * ln_u;
                (num_prime * d - num * num) / (d * d)
            })
            .sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaBracket {
    pub lower: f64,
    pub upper: f64,
    pub score_at_lower: f64,
    pub score_at_upper: f64,
    /// The score is positive at `lower` and negative at `upper`.
    pub sign_change: bool,
}

/// For `λ ∈ (−1, 0)` and the other parameters fixed, a root of the θ-score
/// lies in `[n/(−2 Σ log y_i), n/(−Σ log y_i)]`, `y_i = 1 − exp(−β G(x_i))`.
pub fn mle_theta_bracket(
    family: Family,
    shape: &[f64],
    beta: f64,
    lambda: f64,
    sample: &Sample,
) -> Result<ThetaBracket> {
    if !(lambda > -1.0 && lambda < 0.0) {
        return Err(GtldError::NotApplicable(format!(
            "the θ bracket needs λ in (−1, 0), got {lambda}"
        )));
    }
    let lu = ln_u_values(family, shape, beta, sample)?;
    let s: f64 = lu.iter().sum();
    let n = lu.len() as f64;
    let (lower, upper) = (n / (-2.0 * s), n / (-s));
    let at = |theta: f64| -> Result<f64> {
        theta_score(
            family,
            &ParamVector::new(shape.to_vec(), beta, theta, lambda)?,
            sample,
        )
    };
    let (sl, su) = (at(lower)?, at(upper)?);
    Ok(ThetaBracket {
        lower,
        upper,
        score_at_lower: sl,
        score_at_upper: su,
        sign_change: sl > 0.0 && su < 0.0,
    })
}

/// A fit job read from a flat `key = value` file.
///
/// Keys: `family` (required), `method` (default `ml`), `data`, `starts`,
/// `seed`, `tolerance`, `max_iter`, `start` (comma-separated full vector)
/// and `fix.<name>` for each parameter to hold fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub family: Family,
    pub method: Method,
    pub data: Option<String>,
    pub options: FitOptions,
}

impl FitConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut family = None;
        let mut method = Method::Ml;
        let mut data = None;
        let mut options = FitOptions::default();
        let mut start: Option<(usize, Vec<f64>)> = None;
        for e in parse_entries(text)? {
            match e.key.as_str() {
                "family" => {
                    family = Some(
                        e.value
                            .parse::<Family>()
                            .map_err(|x| e.error(x.to_string()))?,
                    )
                }
                "method" => {
                    method = e
                        .value
                        .parse::<Method>()
                        .map_err(|x| e.error(x.to_string()))?
                }
                "data" => data = Some(e.value.clone()),
                "starts" => options.starts = e.parse()?,
                "seed" => options.seed = e.parse()?,
                "tolerance" => options.optim.gtol = e.parse()?,
                "max_iter" => options.optim.max_iter = e.parse()?,
                "start" => start = Some((e.line, e.parse_list()?)),
                key => match key.strip_prefix("fix.") {
                    Some(name) => {
                        options.fixed.insert(name.to_string(), e.parse()?);
                    }
                    None => return Err(e.error("unknown key")),
                },
            }
        }
        let family = family.ok_or(GtldError::Config {
            line: 0,
            message: "missing required key `family`".into(),
        })?;
        let names = family.param_names();
        for name in options.fixed.keys() {
            if !names.contains(&name.as_str()) {
                return Err(GtldError::Config {
                    line: 0,
                    message: format!("`fix.{name}`: {family} has no parameter `{name}`"),
                });
            }
        }
        if let Some((line, values)) = start {
            let p =
                ParamVector::from_slice(&values, family.shape_names().len()).map_err(|err| {
                    GtldError::Config {
                        line,
                        message: format!("`start`: {err}"),
                    }
                })?;
            options.init = Some(p);
        }
        Ok(Self {
            family,
            method,
            data,
            options,
        })
    }
}
