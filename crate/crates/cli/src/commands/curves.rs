use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gtld::numerics::format_sig;
use gtld::{Family, GtldModel};
use serde::Serialize;

use crate::args;
use crate::error::{CliError, CliResult};
use crate::output::{self, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Curve {
    Pdf,
    Cdf,
    Hazard,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, allow_hyphen_values = true)]
    pub params: String,
    /// Columns to emit.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Curve::Pdf, Curve::Cdf, Curve::Hazard])]
    pub which: Vec<Curve>,
    /// Grid start; the support edge by default.
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,
    /// Grid end; the 0.999 quantile by default.
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Explicit grid, comma-separated; replaces --from/--to/--points.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["from", "to"])]
    pub grid: Vec<f64>,
    /// csv or json.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct CurvesDoc {
    family: Family,
    columns: Vec<Curve>,
    x: Vec<f64>,
    /// One row per grid point, in `columns` order.
    values: Vec<Vec<f64>>,
}

fn grid(a: &CurvesArgs, model: &GtldModel) -> CliResult<Vec<f64>> {
    let low = model.support_low();
    let xs = if a.grid.is_empty() {
        let from = a.from.unwrap_or(low);
        let to = match a.to {
            Some(t) => t,
            None => model.quantile(0.999)?,
        };
        if !(from < to) {
            return Err(CliError::usage(format!(
                "empty grid: --from {from} is not below --to {to}"
            )));
        }
        if a.points < 2 {
            return Err(CliError::usage("--points must be at least 2"));
        }
        let step = (to - from) / (a.points - 1) as f64;
        (0..a.points)
            .map(|i| {
                if i + 1 == a.points {
                    to
                } else {
                    from + i as f64 * step
                }
            })
            .collect()
    } else {
        a.grid.clone()
    };
    if let Some(x) = xs.iter().find(|x| !x.is_finite() || **x < low) {
        return Err(CliError::usage(format!(
            "grid point {x} lies outside the support [{low}, inf)"
        )));
    }
    Ok(xs)
}

fn evaluate(model: &GtldModel, curve: Curve, x: f64) -> gtld::Result<f64> {
    match curve {
        Curve::Pdf => model.pdf(x),
        Curve::Cdf => model.cdf(x),
        Curve::Hazard => model.hazard(x),
    }
}

pub fn run(a: &CurvesArgs, digits: usize) -> CliResult<()> {
    let (model, _) = args::model(&a.family, &a.params)?;
    let xs = grid(a, &model)?;
    let values = xs
        .iter()
        .map(|&x| {
            a.which
                .iter()
                .map(|&c| {
                    evaluate(&model, c, x)
                        .map_err(|e| CliError::from(e).context(format!("x = {x}")))
                })
                .collect::<CliResult<Vec<f64>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    let doc = CurvesDoc {
        family: model.family(),
        columns: a.which.clone(),
        x: xs,
        values,
    };
    let text = match a.format {
        Format::Json => output::to_json(&doc, digits)?,
        Format::Csv => {
            let mut w = output::csv_writer();
            let mut header = vec!["x".to_string()];
            header.extend(
                doc.columns
                    .iter()
                    .map(|c| c.to_possible_value().unwrap().get_name().to_string()),
            );
            w.write_record(&header).map_err(output::csv_error)?;
            for (x, row) in doc.x.iter().zip(&doc.values) {
                let mut rec = vec![format_sig(*x, digits)];
                rec.extend(row.iter().map(|v| format_sig(*v, digits)));
                w.write_record(&rec).map_err(output::csv_error)?;
            }
            output::finish_csv(w)?
        }
        Format::Text => return Err(CliError::usage("curves output is csv or json")),
    };
    output::emit(&text, a.out.as_deref())
}
