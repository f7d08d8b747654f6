//! Command-line front end for `heston-fpt`: parameter intake, grids,
//! figure data and CSV/JSON output.

pub mod args;
pub mod commands;
pub mod error;
pub mod figures;
pub mod grid;
pub mod spec;
pub mod table;

use std::io::Write;

use args::{Cli, Command, Format};
use error::{CliError, Result};
use spec::RunSpec;
use table::Table;

/// Evaluates the whole table before anything is written, so a failure
/// leaves no partial output.
pub fn run(cli: Cli) -> Result<()> {
    let spec = RunSpec::resolve(cli.command, cli.options)?;
    let (table, figure) = build(&spec)?;
    let text = render(&spec, &table, figure);
    match &spec.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

pub fn build(spec: &RunSpec) -> Result<(Table, Option<&'static str>)> {
    let table = match spec.command {
        Command::Exact => commands::exact(spec)?,
        Command::Averaged => commands::averaged(spec)?,
        Command::Approx => commands::approx(spec)?,
        Command::Simulate => commands::simulate(spec)?,
        Command::CrossingLevel => commands::crossing(spec)?,
        Command::Ratio => commands::ratio(spec)?,
        Command::Sweep => commands::sweep(spec)?,
        Command::Figure { name } => return Ok((figures::figure(name, spec)?, Some(name.as_str()))),
    };
    Ok((table, None))
}

pub fn render(spec: &RunSpec, table: &Table, figure: Option<&str>) -> String {
    match spec.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(serde_json::json!({
            "run": spec.echo(figure),
            "seed": spec.seed,
            "version": env!("CARGO_PKG_VERSION"),
        })),
    }
}
