//! `dpsqkd`: tables of leaked-information eigenvalues, phase-error
//! boundaries and key rates, plus the closed-form self-check.

mod args;
mod commands;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use commands::{Outcome, UsageError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// Returns whether every check passed.
fn run(cli: &Cli) -> anyhow::Result<bool> {
    let Outcome { table, config, passed } = commands::dispatch(&cli.command)?;
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.format {
        Format::Csv => table.write_csv(&mut out)?,
        Format::Json => table.write_json(&config, &mut out)?,
    }
    out.flush()?;
    Ok(passed)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.is::<UsageError>() {
        return 2;
    }
    match err.downcast_ref::<dpsqkd_core::Error>() {
        Some(dpsqkd_core::Error::InvalidInput(_) | dpsqkd_core::Error::Domain { .. }) => 2,
        _ => 1,
    }
}
