use clap::{Args, Subcommand};
use gtld::data::{builtin, describe, Descriptive, BUILTIN_NAMES};
use gtld::numerics::format_sig;
use serde::Serialize;

use crate::args;
use crate::error::CliResult;
use crate::output::{self, text_table, Format};

#[derive(Debug, Args)]
pub struct DataArgs {
    #[command(subcommand)]
    pub action: DataAction,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum DataAction {
    /// Built-in datasets.
    List,
    /// Print the values, in their original order.
    Show { name: String },
    /// Summary statistics.
    Describe { name: String },
}

#[derive(Debug, Serialize)]
struct Listing {
    name: &'static str,
    n: usize,
    source: String,
}

#[derive(Debug, Serialize)]
struct Shown {
    name: String,
    source: String,
    values: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct Described {
    name: String,
    source: String,
    #[serde(flatten)]
    stats: Descriptive,
}

pub fn run(a: &DataArgs, digits: usize) -> CliResult<()> {
    let text = match &a.action {
        DataAction::List => list(a.format)?,
        DataAction::Show { name } => show(name, a.format)?,
        DataAction::Describe { name } => describe_cmd(name, a.format, digits)?,
    };
    output::emit(&text, None)
}

fn list(format: Format) -> CliResult<String> {
    let rows: Vec<Listing> = BUILTIN_NAMES
        .iter()
        .map(|name| {
            let s = builtin(name).expect("built-in dataset");
            Listing {
                name,
                n: s.len(),
                source: s.source.clone(),
            }
        })
        .collect();
    Ok(match format {
        Format::Json => output::to_json(&rows, 17)?,
        Format::Csv => {
            let mut w = output::csv_writer();
            w.write_record(["name", "n", "source"])
                .map_err(output::csv_error)?;
            for r in &rows {
                w.write_record([r.name, &r.n.to_string(), &r.source])
                    .map_err(output::csv_error)?;
            }
            output::finish_csv(w)?
        }
        Format::Text => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.name.to_string(), r.n.to_string(), r.source.clone()])
                .collect();
            text_table(&["name".into(), "n".into(), "source".into()], &cells)
        }
    })
}

/// Values are printed as stored, not rounded: they are inputs.
fn show(name: &str, format: Format) -> CliResult<String> {
    let s = args::dataset(name, None)?;
    Ok(match format {
        Format::Json => output::to_json(
            &Shown {
                name: name.to_string(),
                source: s.source.clone(),
                values: s.values().to_vec(),
            },
            17,
        )?,
        Format::Csv => {
            let mut w = output::csv_writer();
            w.write_record(["value"]).map_err(output::csv_error)?;
            for v in s.values() {
                w.write_record([v.to_string()]).map_err(output::csv_error)?;
            }
            output::finish_csv(w)?
        }
        Format::Text => {
            let mut out = format!("# {}\n", s.source);
            for v in s.values() {
                out += &format!("{v}\n");
            }
            out
        }
    })
}

fn describe_cmd(name: &str, format: Format, digits: usize) -> CliResult<String> {
    let s = args::dataset(name, None)?;
    let d = Described {
        name: name.to_string(),
        source: s.source.clone(),
        stats: describe(&s),
    };
    let f = |v: f64| format_sig(v, digits);
    let st = &d.stats;
    let fields: [(&str, String); 12] = [
        ("n", st.n.to_string()),
        ("min", f(st.min)),
        ("q1", f(st.q1)),
        ("median", f(st.median)),
        ("mean", f(st.mean)),
        ("q3", f(st.q3)),
        ("max", f(st.max)),
        ("variance", f(st.variance)),
        ("skewness_g1", f(st.skewness_g1)),
        ("kurtosis_g2", f(st.kurtosis_g2)),
        ("skewness_adjusted", f(st.skewness_adjusted)),
        ("kurtosis_adjusted", f(st.kurtosis_adjusted)),
    ];
    Ok(match format {
        Format::Json => output::to_json(&d, digits)?,
        Format::Csv => {
            let mut w = output::csv_writer();
            w.write_record(fields.iter().map(|(k, _)| *k))
                .map_err(output::csv_error)?;
            w.write_record(fields.iter().map(|(_, v)| v.as_str()))
                .map_err(output::csv_error)?;
            output::finish_csv(w)?
        }
        Format::Text => {
            let rows: Vec<Vec<String>> = fields
                .iter()
                .map(|(k, v)| vec![k.to_string(), v.clone()])
                .collect();
            format!("{} ({})\n\n", d.name, d.source)
                + &text_table(&["statistic".into(), "value".into()], &rows)
        }
    })
}
