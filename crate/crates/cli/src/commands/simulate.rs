use std::path::PathBuf;

use clap::Args;
use gtld::simulation::emit_table;
use gtld::{run_simulation, SimConfig, SimResult, TableFormat};

use crate::error::{CliError, CliResult};
use crate::output::{self, Format};

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Study file of `key = value` lines: family, truth, sizes,
    /// replications, methods, seed, starts, start_from_truth.
    #[arg(long)]
    pub config: PathBuf,
    /// Override the replication count from the file.
    #[arg(long)]
    pub replications: Option<usize>,
    /// Override the master seed from the file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Format written to standard output (or --out).
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the table as CSV here.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Also write the full result as JSON here.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

pub fn load_config(a: &SimulateArgs) -> CliResult<SimConfig> {
    let text = output::read_file(&a.config)?;
    let mut config =
        SimConfig::parse(&text).map_err(|e| CliError::from(e).context(a.config.display()))?;
    if let Some(r) = a.replications {
        config.replications = r;
    }
    if let Some(s) = a.seed {
        config.master_seed = s;
    }
    config
        .validate()
        .map_err(|e| CliError::usage(e.to_string()).context(a.config.display()))?;
    Ok(config)
}

fn render(result: &SimResult, format: Format, digits: usize) -> CliResult<String> {
    match format {
        Format::Json => output::to_json(result, digits),
        Format::Csv => Ok(emit_table(result, TableFormat::Csv, digits)),
        Format::Text => Ok(emit_table(result, TableFormat::Text, digits)),
    }
}

pub fn run(a: &SimulateArgs, digits: usize) -> CliResult<()> {
    let config = load_config(a)?;
    let result = run_simulation(&config)
        .map_err(|e| CliError::compute(format!("simulation failed: {e}")))?;
    let failed: usize = result.cells.iter().map(|c| c.failure_count).sum();
    if failed > 0 {
        eprintln!("note: {failed} fits failed and were left out of the averages (see the failures column)");
    }
    if let Some(path) = &a.csv {
        output::write_file(path, &render(&result, Format::Csv, digits)?)?;
    }
    if let Some(path) = &a.json {
        output::write_file(path, &render(&result, Format::Json, digits)?)?;
    }
    output::emit(&render(&result, a.format, digits)?, a.out.as_deref())
}
