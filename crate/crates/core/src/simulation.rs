//! Monte Carlo comparison of estimators: repeated sampling from a known
//! truth, fitting with each method, and absolute-bias / MSE aggregation.
//!
//! Replication `r` at sample size `n` draws its sample with seed
//! `splitmix64(splitmix64(splitmix64(master) ^ n) ^ r)`, so results do not
//! depend on scheduling or thread count. Fits that fail or do not converge
//! are excluded from the averages and counted.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::parse_entries;
use crate::error::{GtldError, Result};
use crate::estimation::{fit, FitOptions, Method};
use crate::model::{GtldModel, ParamVector};
use crate::numerics::{format_sig, pairwise_sum, splitmix64};
use crate::subfamilies::Family;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub family: Family,
    pub truth: ParamVector,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub methods: Vec<Method>,
    pub master_seed: u64,
    /// Optimizer starts per fit.
    pub starts: usize,
    /// Start every fit at the true parameters (one start) instead of the
    /// data-driven multistart.
    pub start_from_truth: bool,
}

impl SimConfig {
    /// Defaults: GTWE at (2.5, 3, 0.5, 0.2), sizes 50–400, 500 replications,
    /// all six methods.
    pub fn new(family: Family, truth: ParamVector) -> Self {
        Self {
            family,
            truth,
            sample_sizes: vec![50, 100, 150, 200, 300, 400],
            replications: 500,
            methods: Method::ALL.to_vec(),
            master_seed: 20240101,
            starts: 5,
            start_from_truth: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        GtldModel::from_params(self.family, &self.truth)?;
        if self.replications == 0 {
            return Err(GtldError::invalid(
                "replications",
                0.0,
                "must be at least 1",
            ));
        }
        if self.sample_sizes.is_empty() {
            return Err(GtldError::Domain("no sample sizes given".into()));
        }
        if let Some(n) = self.sample_sizes.iter().find(|n| **n < 2) {
            return Err(GtldError::invalid(
                "sample size",
                *n as f64,
                "must be at least 2",
            ));
        }
        if self.starts == 0 {
            return Err(GtldError::invalid("starts", 0.0, "must be at least 1"));
        }
        Ok(())
    }

    /// Parse a flat `key = value` file. Keys: `family`, `truth`
    /// (comma-separated full vector), `sizes`, `replications`, `methods`,
    /// `seed`, `starts`, `start_from_truth`. `truth` defaults to
    /// (2.5, 3, 0.5, 0.2) for `gtwe` and is required otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        let entries = parse_entries(text)?;
        let mut family = Family::Gtwe;
        if let Some(e) = entries.iter().find(|e| e.key == "family") {
            family = e
                .value
                .parse()
                .map_err(|x: GtldError| e.error(x.to_string()))?;
        }
        let truth_entry = entries.iter().find(|e| e.key == "truth");
        let truth = match truth_entry {
            Some(e) => {
                let v: Vec<f64> = e.parse_list()?;
                ParamVector::from_slice(&v, family.shape_names().len())
                    .map_err(|x| e.error(x.to_string()))?
            }
            None if family == Family::Gtwe => ParamVector::new(vec![2.5], 3.0, 0.5, 0.2)?,
            None => {
                return Err(GtldError::Config {
                    line: 0,
                    message: "missing required key `truth`".into(),
                })
            }
        };
        let mut cfg = SimConfig::new(family, truth);
        for e in &entries {
            match e.key.as_str() {
                "family" | "truth" => {}
                "sizes" => cfg.sample_sizes = e.parse_list()?,
                "replications" => cfg.replications = e.parse()?,
                "seed" => cfg.master_seed = e.parse()?,
                "starts" => cfg.starts = e.parse()?,
                "start_from_truth" => cfg.start_from_truth = e.parse()?,
                "methods" => {
                    cfg.methods = e
                        .value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse::<Method>().map_err(|x| e.error(x.to_string())))
                        .collect::<Result<_>>()?;
                }
                _ => return Err(e.error("unknown key")),
            }
        }
        cfg.validate().map_err(|x| match x {
            GtldError::Config { .. } => x,
            other => GtldError::Config {
                line: 0,
                message: other.to_string(),
            },
        })?;
        Ok(cfg)
    }
}

/// Seed for replication `r` at sample size `n`.
pub fn replication_seed(master: u64, n: usize, r: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ n as u64) ^ r as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimCell {
    pub method: Method,
    pub n: usize,
    pub abs_bias: Vec<f64>,
    pub mse: Vec<f64>,
    pub failure_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub family: Family,
    pub param_names: Vec<&'static str>,
    pub truth: Vec<f64>,
    pub replications: usize,
    pub master_seed: u64,
    pub cells: Vec<SimCell>,
}

impl SimResult {
    pub fn cell(&self, method: Method, n: usize) -> Option<&SimCell> {
        self.cells.iter().find(|c| c.method == method && c.n == n)
    }
}

pub fn run_simulation(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let model = GtldModel::from_params(config.family, &config.truth)?;
    let truth = config.truth.to_vec();
    let jobs: Vec<(usize, usize)> = config
        .sample_sizes
        .iter()
        .flat_map(|&n| (0..config.replications).map(move |r| (n, r)))
        .collect();
    // one row per job: per method, the estimate or None on failure
    let rows: Vec<Vec<Option<Vec<f64>>>> = jobs
        .par_iter()
        .map(|&(n, r)| {
            let seed = replication_seed(config.master_seed, n, r);
            let Ok(sample) = model.sample(n, seed) else {
                return vec![None; config.methods.len()];
            };
            let options = FitOptions {
                starts: if config.start_from_truth {
                    1
                } else {
                    config.starts
                },
                init: config.start_from_truth.then(|| config.truth.clone()),
                seed,
                standard_errors: false,
                ..FitOptions::default()
            };
            config
                .methods
                .iter()
                .map(|&m| match fit(&sample, config.family, m, &options) {
                    Ok(f) if f.converged => Some(f.estimates.to_vec()),
                    _ => None,
                })
                .collect()
        })
        .collect();
    let mut cells = Vec::new();
    for (mi, &method) in config.methods.iter().enumerate() {
        for &n in &config.sample_sizes {
            let estimates: Vec<&Vec<f64>> = jobs
                .iter()
                .zip(&rows)
                .filter(|((jn, _), _)| *jn == n)
                .filter_map(|(_, row)| row[mi].as_ref())
                .collect();
            let ok = estimates.len();
            if ok == 0 {
                return Err(GtldError::Domain(format!(
                    "all {} replications failed for {method} at n = {n}",
                    config.replications
                )));
            }
            let per_coord = |f: &dyn Fn(f64) -> f64| -> Vec<f64> {
                (0..truth.len())
                    .map(|j| {
                        let terms: Vec<f64> =
                            estimates.iter().map(|e| f(e[j] - truth[j])).collect();
                        pairwise_sum(&terms) / ok as f64
                    })
                    .collect()
            };
            cells.push(SimCell {
                method,
                n,
                abs_bias: per_coord(&|d| d.abs()),
                mse: per_coord(&|d| d * d),
                failure_count: config.replications - ok,
            });
        }
    }
    Ok(SimResult {
        family: config.family,
        param_names: config.family.param_names(),
        truth,
        replications: config.replications,
        master_seed: config.master_seed,
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
    Text,
}

impl std::str::FromStr for TableFormat {
    type Err = GtldError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            "text" | "txt" => Ok(TableFormat::Text),
            other => Err(GtldError::Domain(format!("unknown table format `{other}`"))),
        }
    }
}

/// Render a result as one row per (method, n): absolute biases for every
/// parameter, then MSEs, then the failure count.
pub fn emit_table(result: &SimResult, format: TableFormat, digits: usize) -> String {
    let names = &result.param_names;
    match format {
        TableFormat::Json => serde_json::to_string_pretty(result).expect("serializable"),
        TableFormat::Csv => {
            let mut out = String::from("method,n");
            for p in names {
                write!(out, ",{p}_abs_bias").unwrap();
            }
            for p in names {
                write!(out, ",{p}_mse").unwrap();
            }
            out.push_str(",failures\n");
            for c in &result.cells {
                write!(out, "{},{}", c.method.id(), c.n).unwrap();
                for v in c.abs_bias.iter().chain(&c.mse) {
                    write!(out, ",{}", format_sig(*v, digits)).unwrap();
                }
                writeln!(out, ",{}", c.failure_count).unwrap();
            }
            out
        }
        TableFormat::Text => {
            let width = digits + 7;
            let mut out = format!("{:<6} {:>5}", "method", "n");
            for p in names {
                write!(out, " {:>width$}", format!("|bias| {p}")).unwrap();
            }
            for p in names {
                write!(out, " {:>width$}", format!("MSE {p}")).unwrap();
            }
            writeln!(out, " {:>8}", "failed").unwrap();
            for c in &result.cells {
                write!(out, "{:<6} {:>5}", c.method.to_string(), c.n).unwrap();
                for v in c.abs_bias.iter().chain(&c.mse) {
                    write!(out, " {:>width$}", format_sig(*v, digits)).unwrap();
                }
                writeln!(out, " {:>8}", c.failure_count).unwrap();
            }
            out
        }
    }
}
