//! `gtld` — fit, evaluate and simulate generalized transmuted lifetime
//! distributions from the command line.
//!
//! Exit codes: 0 success, 1 computation failure, 2 usage or config error.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{curves, data, fit, props, simulate};

#[derive(Debug, Parser)]
#[command(
    name = "gtld",
    version,
    about = "Generalized transmuted lifetime distributions"
)]
struct Cli {
    /// Significant digits for printed floats.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u8).range(1..=17))]
    precision: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit one sub-family to a dataset and report goodness of fit.
    Fit(fit::FitArgs),
    /// Fit several sub-families and rank them by AIC.
    Select(fit::SelectArgs),
    /// Evaluate distributional properties at given parameters.
    Props(props::PropsArgs),
    /// Run an estimator-comparison Monte Carlo study.
    Simulate(simulate::SimulateArgs),
    /// Emit pdf/cdf/hazard values on a grid for plotting.
    Curves(curves::CurvesArgs),
    /// List, print or summarize datasets.
    Data(data::DataArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let digits = cli.precision as usize;
    let outcome = match &cli.command {
        Command::Fit(a) => fit::run(a, digits),
        Command::Select(a) => fit::run_select(a, digits),
        Command::Props(a) => props::run(a, digits),
        Command::Simulate(a) => simulate::run(a, digits),
        Command::Curves(a) => curves::run(a, digits),
        Command::Data(a) => data::run(a, digits),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_parameters_parse() {
        let cli = Cli::try_parse_from([
            "gtld", "props", "--family", "gte", "--params", "1,1,-0.5", "--moment", "1",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Props(ref p) if p.params == "1,1,-0.5"));
    }
}
