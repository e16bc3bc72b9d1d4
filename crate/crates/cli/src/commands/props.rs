use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gtld::numerics::format_sig;
use gtld::properties::{
    cigf, incomplete_moment, mgf, pwm, q_entropy, raw_moment, renyi_entropy, residual_moment,
    reversed_residual_moment, stress_strength, MomentMethod,
};
use gtld::{Family, GtldModel};
use serde::Serialize;

use crate::args;
use crate::error::{CliError, CliResult};
use crate::output::{self, text_table, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentRoute {
    Quadrature,
    Series,
}

#[derive(Debug, Args)]
pub struct PropsArgs {
    #[arg(long)]
    pub family: String,
    /// Comma-separated: shape parameters, beta, theta, lambda.
    #[arg(long, allow_hyphen_values = true)]
    pub params: String,
    /// Raw moment E[X^r]. Repeatable.
    #[arg(long, value_name = "R")]
    pub moment: Vec<f64>,
    /// Incomplete moment E[X^r; X <= z]. Repeatable.
    #[arg(long, value_name = "R,Z")]
    pub incomplete_moment: Vec<String>,
    /// Moment route; the series needs gte or gtw.
    #[arg(long, value_enum, default_value_t = MomentRoute::Quadrature)]
    pub moment_method: MomentRoute,
    /// Quantile Q(p). Repeatable; also takes a comma list.
    #[arg(long, value_name = "P", value_delimiter = ',')]
    pub quantile: Vec<f64>,
    /// Median, Bowley skewness and Moors kurtosis.
    #[arg(long)]
    pub measures: bool,
    /// Rényi entropy of order rho. Repeatable; also takes a comma list.
    #[arg(long, value_name = "RHO", value_delimiter = ',')]
    pub renyi: Vec<f64>,
    /// q-entropy of order q. Repeatable; also takes a comma list.
    #[arg(long, value_name = "Q", value_delimiter = ',')]
    pub q_entropy: Vec<f64>,
    /// Lower end of the entropy integrals instead of the support edge.
    #[arg(long, value_name = "Z")]
    pub entropy_lower: Option<f64>,
    /// P(X1 > X2) where X1 has these parameters and X2 differs only in its
    /// transmutation weight, given here.
    #[arg(long, value_name = "LAMBDA2", allow_hyphen_values = true)]
    pub stress_strength: Vec<f64>,
    /// Mean residual life E[X - t | X > t]. Repeatable.
    #[arg(long, value_name = "T")]
    pub mrl: Vec<f64>,
    /// Mean waiting time E[t - X | X <= t]. Repeatable.
    #[arg(long, value_name = "T")]
    pub mrrl: Vec<f64>,
    /// Cumulative information generating function of F^m S^n. Repeatable.
    #[arg(long, value_name = "M,N")]
    pub cigf: Vec<String>,
    /// Moment generating function E[exp(tX)]. Repeatable.
    #[arg(long, value_name = "T", allow_hyphen_values = true)]
    pub mgf: Vec<f64>,
    /// Probability weighted moment E[X^r F(X)^s]. Repeatable.
    #[arg(long, value_name = "R,S")]
    pub pwm: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Row {
    property: &'static str,
    argument: String,
    value: Option<f64>,
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct Param {
    name: &'static str,
    value: f64,
}

#[derive(Debug, Serialize)]
struct PropsDoc {
    family: Family,
    parameters: Vec<Param>,
    results: Vec<Row>,
}

type Job<'a> = (
    &'static str,
    String,
    Box<dyn Fn(&GtldModel) -> gtld::Result<f64> + 'a>,
);

fn jobs(a: &PropsArgs) -> CliResult<Vec<Job<'_>>> {
    let route = match a.moment_method {
        MomentRoute::Quadrature => MomentMethod::Quadrature,
        MomentRoute::Series => MomentMethod::Series,
    };
    let lower = a.entropy_lower;
    let mut out: Vec<Job> = Vec::new();
    for &p in &a.quantile {
        out.push(("quantile", p.to_string(), Box::new(move |m| m.quantile(p))));
    }
    if a.measures {
        out.push((
            "median",
            String::new(),
            Box::new(|m| Ok(m.quantile_measures()?.median)),
        ));
        out.push((
            "bowley_skewness",
            String::new(),
            Box::new(|m| Ok(m.quantile_measures()?.bowley_skewness)),
        ));
        out.push((
            "moors_kurtosis",
            String::new(),
            Box::new(|m| Ok(m.quantile_measures()?.moors_kurtosis)),
        ));
    }
    for &r in &a.moment {
        let r = args::order(r).map_err(|e| e.context("--moment"))?;
        out.push((
            "moment",
            r.to_string(),
            Box::new(move |m| raw_moment(m, r, route)),
        ));
    }
    for s in &a.incomplete_moment {
        let (r, z) = args::pair(s).map_err(|e| e.context("--incomplete-moment"))?;
        let r = args::order(r).map_err(|e| e.context("--incomplete-moment"))?;
        out.push((
            "incomplete_moment",
            s.clone(),
            Box::new(move |m| incomplete_moment(m, r, z, route)),
        ));
    }
    for s in &a.pwm {
        let (r, k) = args::pair(s).map_err(|e| e.context("--pwm"))?;
        let (r, k) = (args::order(r)?, args::order(k)?);
        out.push(("pwm", s.clone(), Box::new(move |m| pwm(m, r, k))));
    }
    for &t in &a.mgf {
        out.push(("mgf", t.to_string(), Box::new(move |m| mgf(m, t))));
    }
    for &rho in &a.renyi {
        out.push((
            "renyi_entropy",
            rho.to_string(),
            Box::new(move |m| renyi_entropy(m, rho, lower)),
        ));
    }
    for &q in &a.q_entropy {
        out.push((
            "q_entropy",
            q.to_string(),
            Box::new(move |m| q_entropy(m, q, lower)),
        ));
    }
    for &l2 in &a.stress_strength {
        out.push((
            "stress_strength",
            l2.to_string(),
            Box::new(move |m| stress_strength(m.lambda(), l2)),
        ));
    }
    for &t in &a.mrl {
        out.push((
            "mean_residual_life",
            t.to_string(),
            Box::new(move |m| residual_moment(m, 1, t)),
        ));
    }
    for &t in &a.mrrl {
        out.push((
            "mean_waiting_time",
            t.to_string(),
            Box::new(move |m| reversed_residual_moment(m, 1, t)),
        ));
    }
    for s in &a.cigf {
        let (mm, nn) = args::pair(s).map_err(|e| e.context("--cigf"))?;
        out.push(("cigf", s.clone(), Box::new(move |m| cigf(m, mm, nn))));
    }
    if out.is_empty() {
        return Err(CliError::usage(
            "nothing to compute: pass at least one of --moment, --incomplete-moment, --quantile, \
             --measures, --renyi, --q-entropy, --stress-strength, --mrl, --mrrl, --cigf, --mgf, --pwm",
        ));
    }
    Ok(out)
}

pub fn run(a: &PropsArgs, digits: usize) -> CliResult<()> {
    let (model, params) = args::model(&a.family, &a.params)?;
    if let Some(z) = a.entropy_lower {
        if !(z >= model.support_low()) {
            return Err(CliError::usage(format!(
                "--entropy-lower {z} lies below the support lower bound {}",
                model.support_low()
            )));
        }
    }
    let family = model.family();
    let mut failures: Vec<CliError> = Vec::new();
    let results: Vec<Row> = jobs(a)?
        .into_iter()
        .map(|(property, argument, job)| match job(&model) {
            Ok(v) => Row {
                property,
                argument,
                value: Some(v),
                error: None,
            },
            Err(e) => {
                let message = e.to_string();
                let label = if argument.is_empty() {
                    property.to_string()
                } else {
                    format!("{property} {argument}")
                };
                failures.push(CliError::from(e).context(label));
                Row {
                    property,
                    argument,
                    value: None,
                    error: Some(message),
                }
            }
        })
        .collect();
    let doc = PropsDoc {
        family,
        parameters: family
            .param_names()
            .into_iter()
            .zip(params.to_vec())
            .map(|(name, value)| Param { name, value })
            .collect(),
        results,
    };
    let text = match a.format {
        Format::Json => output::to_json(&doc, digits)?,
        Format::Csv => props_csv(&doc, digits)?,
        Format::Text => props_text(&doc, digits),
    };
    output::emit(&text, a.out.as_deref())?;
    if failures.is_empty() {
        return Ok(());
    }
    let usage = failures.iter().any(|e| matches!(e, CliError::Usage(_)));
    let message = failures
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\nerror: ");
    // a caller error outranks a computational one
    Err(if usage {
        CliError::usage(message)
    } else {
        CliError::compute(message)
    })
}

fn props_csv(d: &PropsDoc, digits: usize) -> CliResult<String> {
    let mut w = output::csv_writer();
    w.write_record(["property", "argument", "value", "error"])
        .map_err(output::csv_error)?;
    for r in &d.results {
        let value = r.value.map(|v| format_sig(v, digits)).unwrap_or_default();
        w.write_record([
            r.property,
            &r.argument,
            &value,
            r.error.as_deref().unwrap_or(""),
        ])
        .map_err(output::csv_error)?;
    }
    output::finish_csv(w)
}

fn props_text(d: &PropsDoc, digits: usize) -> String {
    let params: Vec<String> = d
        .parameters
        .iter()
        .map(|p| format!("{} = {}", p.name, format_sig(p.value, digits)))
        .collect();
    let rows: Vec<Vec<String>> = d
        .results
        .iter()
        .map(|r| {
            let value = match (&r.value, &r.error) {
                (Some(v), _) => format_sig(*v, digits),
                (None, Some(e)) => format!("error: {e}"),
                (None, None) => String::new(),
            };
            vec![r.property.to_string(), r.argument.clone(), value]
        })
        .collect();
    format!("{} ({})\n\n", d.family, params.join(", "))
        + &text_table(
            &["property".into(), "argument".into(), "value".into()],
            &rows,
        )
}
