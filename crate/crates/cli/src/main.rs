use std::process::ExitCode;

use clap::Parser;
use heston_fpt_cli::args::Cli;

fn main() -> ExitCode {
    match heston_fpt_cli::run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
