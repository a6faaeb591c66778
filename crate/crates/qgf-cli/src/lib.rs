#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod args;
pub mod commands;
pub mod error;
pub mod quantity;
pub mod table;

use std::fs::File;
use std::io::{BufWriter, Write};

use args::{Cli, Command, OutputArgs};
use error::CliError;
use table::Table;

fn emit(t: &Table, out: &OutputArgs) -> Result<(), CliError> {
    match &out.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            t.write(&mut w, out.format)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            t.write(stdout.lock(), out.format)?;
        }
    }
    Ok(())
}

/// Caps the rayon pool at `QGF_THREADS` workers when set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("QGF_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Argument(format!("QGF_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Argument(e.to_string()))
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (table, out) = match &cli.command {
        Command::Fisher(a) => (commands::fisher(a)?, &a.out),
        Command::Scan(a) => (commands::scan(a)?, &a.out),
        Command::Sample(a) => (commands::sample(a)?, &a.out),
        Command::Bec(a) => (commands::bec(a)?, &a.out),
        Command::Regime(a) => (commands::regime(a)?, &a.out),
    };
    emit(&table, out)
}
