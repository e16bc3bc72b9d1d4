use std::path::PathBuf;

use clap::Args;
use gtld::gof::{report_for_fit, Candidate};
use gtld::numerics::format_sig;
use gtld::{model_select, Family, FitConfig, FitOptions, FitResult, GofReport, Method, Sample};
use serde::Serialize;

use crate::args;
use crate::error::{CliError, CliResult};
use crate::output::{self, text_table, Format};

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Built-in dataset (`gauge`, `failure`) or a file with one value per line.
    #[arg(long)]
    pub data: Option<String>,
    #[arg(long)]
    pub family: Option<String>,
    /// ml, ols, wls, cvm, ad or rtad.
    #[arg(long)]
    pub method: Option<String>,
    /// Optimizer starts, including the heuristic one.
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Hold a parameter at a value, e.g. `--fix lambda=0`. Repeatable.
    #[arg(long, value_name = "NAME=VALUE")]
    pub fix: Vec<String>,
    /// Starting point, comma-separated as shape parameters, beta, theta, lambda.
    #[arg(long, allow_hyphen_values = true)]
    pub init: Option<String>,
    /// Fit job file of `key = value` lines; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// json or text.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long)]
    pub data: String,
    /// Candidate sub-families; all eight by default.
    #[arg(long, value_delimiter = ',')]
    pub families: Vec<String>,
    #[arg(long, default_value = "ml")]
    pub method: String,
    #[arg(long, default_value_t = 5)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct DataInfo {
    source: String,
    n: usize,
}

#[derive(Debug, Serialize)]
struct ParamRow {
    name: &'static str,
    estimate: f64,
    std_error: Option<f64>,
    fixed: bool,
}

#[derive(Debug, Serialize)]
struct FitDoc {
    data: DataInfo,
    family: Family,
    method: Method,
    parameters: Vec<ParamRow>,
    objective_value: f64,
    converged: bool,
    iterations: usize,
    starts_converged: usize,
    clamp_events: usize,
    gof: GofReport,
}

fn param_rows(r: &FitResult) -> Vec<ParamRow> {
    let ses = r.std_errors.clone();
    r.param_names
        .iter()
        .zip(r.estimates.to_vec())
        .enumerate()
        .map(|(i, (name, estimate))| ParamRow {
            name,
            estimate,
            std_error: ses.as_ref().and_then(|s| s[i]),
            fixed: r.fixed.contains(name),
        })
        .collect()
}

/// Merge the optional job file with the flags.
fn resolve(a: &FitArgs) -> CliResult<(Sample, String, Family, Method, FitOptions)> {
    let (mut config, base) = match &a.config {
        Some(path) => {
            let text = output::read_file(path)?;
            let parsed =
                FitConfig::parse(&text).map_err(|e| CliError::from(e).context(path.display()))?;
            (Some(parsed), path.parent().map(|p| p.to_path_buf()))
        }
        None => (None, None),
    };
    let family = match (&a.family, &config) {
        (Some(f), _) => args::family(f)?,
        (None, Some(c)) => c.family,
        (None, None) => {
            return Err(CliError::usage(
                "--family is required (or give it in --config)",
            ))
        }
    };
    let method = match (&a.method, &config) {
        (Some(m), _) => args::method(m)?,
        (None, Some(c)) => c.method,
        (None, None) => Method::Ml,
    };
    let (data_spec, base) = match (&a.data, config.as_mut().and_then(|c| c.data.take())) {
        (Some(d), _) => (d.clone(), None),
        (None, Some(d)) => (d, base),
        (None, None) => {
            return Err(CliError::usage(
                "--data is required (or give it in --config)",
            ))
        }
    };
    let sample = args::dataset(&data_spec, base.as_deref())?;
    let mut options = config.map(|c| c.options).unwrap_or_default();
    if let Some(s) = a.starts {
        options.starts = s;
    }
    if let Some(s) = a.seed {
        options.seed = s;
    }
    for f in &a.fix {
        let (name, value) = args::assignment(f).map_err(|e| e.context("--fix"))?;
        if !family.param_names().contains(&name.as_str()) {
            return Err(CliError::usage(format!(
                "--fix: {family} has no parameter `{name}` (parameters: {})",
                family.param_names().join(", ")
            )));
        }
        options.fixed.insert(name, value);
    }
    if let Some(init) = &a.init {
        options.init = Some(args::params(family, init).map_err(|e| e.context("--init"))?);
    }
    if options.starts == 0 {
        return Err(CliError::usage("--starts must be at least 1"));
    }
    Ok((sample, data_spec, family, method, options))
}

pub fn run(a: &FitArgs, digits: usize) -> CliResult<()> {
    let (sample, data_spec, family, method, options) = resolve(a)?;
    let result = gtld::fit(&sample, family, method, &options).map_err(|e| {
        CliError::compute(format!(
            "fitting {family} by {method} to `{data_spec}` failed: {e}"
        ))
    })?;
    if !result.converged {
        eprintln!(
            "warning: no start converged ({} iterations); reporting the best point found",
            result.iterations
        );
    }
    let gof = report_for_fit(&sample, &result)?;
    let doc = FitDoc {
        data: DataInfo {
            source: data_spec,
            n: sample.len(),
        },
        family,
        method,
        parameters: param_rows(&result),
        objective_value: result.objective_value,
        converged: result.converged,
        iterations: result.iterations,
        starts_converged: result.starts_converged,
        clamp_events: result.clamp_events,
        gof,
    };
    let text = match a.format {
        Format::Json => output::to_json(&doc, digits)?,
        Format::Text => fit_text(&doc, digits),
        Format::Csv => return Err(CliError::usage("fit output is json or text")),
    };
    output::emit(&text, a.out.as_deref())
}

fn fit_text(d: &FitDoc, digits: usize) -> String {
    let f = |v: f64| format_sig(v, digits);
    let rows: Vec<Vec<String>> = d
        .parameters
        .iter()
        .map(|p| {
            let se = match (p.fixed, p.std_error) {
                (true, _) => "fixed".to_string(),
                (false, Some(s)) => f(s),
                (false, None) => "-".to_string(),
            };
            vec![p.name.to_string(), f(p.estimate), se]
        })
        .collect();
    let mut out = format!(
        "{} fitted by {} to {} (n = {})\n\n",
        d.family, d.method, d.data.source, d.data.n
    );
    out += &text_table(
        &["parameter".into(), "estimate".into(), "std.error".into()],
        &rows,
    );
    let g = &d.gof;
    out += "\n";
    out += &text_table(
        &["statistic".into(), "value".into(), "p-value".into()],
        &[
            vec!["-2logL".into(), f(g.neg2_loglik), String::new()],
            vec!["AIC".into(), f(g.aic), String::new()],
            vec!["KS".into(), f(g.ks.statistic), f(g.ks.p_value)],
            vec!["CvM".into(), f(g.cvm.statistic), f(g.cvm.p_value)],
            vec!["AD".into(), f(g.ad.statistic), f(g.ad.p_value)],
        ],
    );
    out += &format!(
        "\nobjective {}, converged {}, {} of the starts converged, {} iterations\n",
        f(d.objective_value),
        if d.converged { "yes" } else { "no" },
        d.starts_converged,
        d.iterations
    );
    out
}

#[derive(Debug, Serialize)]
struct CandidateRow {
    rank: usize,
    family: Family,
    method: Method,
    parameters: Vec<ParamRow>,
    gof: Option<GofReport>,
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct SelectDoc {
    data: DataInfo,
    candidates: Vec<CandidateRow>,
}

pub fn run_select(a: &SelectArgs, digits: usize) -> CliResult<()> {
    let sample = args::dataset(&a.data, None)?;
    let method = args::method(&a.method)?;
    let families = if a.families.is_empty() {
        Family::ALL.to_vec()
    } else {
        a.families
            .iter()
            .map(|f| args::family(f))
            .collect::<CliResult<_>>()?
    };
    if a.starts == 0 {
        return Err(CliError::usage("--starts must be at least 1"));
    }
    let options = FitOptions {
        starts: a.starts,
        seed: a.seed,
        ..FitOptions::default()
    };
    let pairs: Vec<(Family, Method)> = families.iter().map(|f| (*f, method)).collect();
    let ranked = model_select(&sample, &pairs, &options)?;
    let all_failed = ranked.iter().all(|c| c.report.is_none());
    let candidates: Vec<CandidateRow> = ranked
        .into_iter()
        .enumerate()
        .map(|(i, c): (usize, Candidate)| CandidateRow {
            rank: i + 1,
            family: c.family,
            method: c.method,
            parameters: c.fit.as_ref().map(param_rows).unwrap_or_default(),
            gof: c.report,
            error: c.error,
        })
        .collect();
    for c in candidates.iter().filter(|c| c.error.is_some()) {
        eprintln!(
            "warning: {} failed: {}",
            c.family,
            c.error.as_deref().unwrap_or("")
        );
    }
    let doc = SelectDoc {
        data: DataInfo {
            source: a.data.clone(),
            n: sample.len(),
        },
        candidates,
    };
    let text = match a.format {
        Format::Json => output::to_json(&doc, digits)?,
        Format::Csv => select_csv(&doc, digits)?,
        Format::Text => select_text(&doc, digits),
    };
    output::emit(&text, a.out.as_deref())?;
    if all_failed {
        return Err(CliError::compute("every candidate fit failed"));
    }
    Ok(())
}

const SELECT_COLUMNS: [&str; 11] = [
    "rank",
    "family",
    "method",
    "neg2_loglik",
    "aic",
    "ks",
    "ks_p",
    "cvm",
    "cvm_p",
    "ad",
    "ad_p",
];

fn select_cells(c: &CandidateRow, digits: usize) -> Vec<String> {
    let f = |v: f64| format_sig(v, digits);
    let mut row = vec![
        c.rank.to_string(),
        c.family.to_string(),
        c.method.to_string(),
    ];
    match &c.gof {
        Some(g) => row.extend([
            f(g.neg2_loglik),
            f(g.aic),
            f(g.ks.statistic),
            f(g.ks.p_value),
            f(g.cvm.statistic),
            f(g.cvm.p_value),
            f(g.ad.statistic),
            f(g.ad.p_value),
        ]),
        None => row.extend(vec![String::new(); 8]),
    }
    row
}

fn select_csv(d: &SelectDoc, digits: usize) -> CliResult<String> {
    let mut w = output::csv_writer();
    let mut header: Vec<&str> = SELECT_COLUMNS.to_vec();
    header.extend(["estimates", "error"]);
    w.write_record(&header).map_err(output::csv_error)?;
    for c in &d.candidates {
        let mut row = select_cells(c, digits);
        let est: Vec<String> = c
            .parameters
            .iter()
            .map(|p| format!("{}={}", p.name, format_sig(p.estimate, digits)))
            .collect();
        row.push(est.join(";"));
        row.push(c.error.clone().unwrap_or_default());
        w.write_record(&row).map_err(output::csv_error)?;
    }
    output::finish_csv(w)
}

fn select_text(d: &SelectDoc, digits: usize) -> String {
    let header: Vec<String> = [
        "rank", "family", "method", "-2logL", "AIC", "KS", "p", "CvM", "p", "AD", "p",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let rows: Vec<Vec<String>> = d
        .candidates
        .iter()
        .map(|c| select_cells(c, digits))
        .collect();
    let mut out = format!("{} (n = {}), ranked by AIC\n\n", d.data.source, d.data.n);
    out += &text_table(&header, &rows);
    for c in &d.candidates {
        let est: Vec<String> = c
            .parameters
            .iter()
            .map(|p| format!("{} = {}", p.name, format_sig(p.estimate, digits)))
            .collect();
        match &c.error {
            Some(e) => out += &format!("\n{}: failed: {e}", c.family),
            None => out += &format!("\n{}: {}", c.family, est.join(", ")),
        }
    }
    out.push('\n');
    out
}
