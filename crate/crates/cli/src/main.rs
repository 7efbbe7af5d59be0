mod commands;
mod config;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use commands::{InternalError, UsageError};
use config::{Cli, Command, RunConfig};

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut cfg = RunConfig::from_cli(&cli);
    match cli.command {
        Command::Cloud { .. } => commands::cloud(&cfg),
        Command::Dice => commands::dice(&cfg),
        Command::Persist {
            dump_filtration, ..
        } => commands::persist(&mut cfg, dump_filtration),
        Command::Compare { .. } => commands::compare(&mut cfg),
        Command::Stats { .. } => commands::stats(&cfg),
    }
}

/// 1 usage, 2 input, 3 internal.
fn exit_code(e: &anyhow::Error) -> u8 {
    use ripsbar_core::Error as E;
    for cause in e.chain() {
        if cause.is::<UsageError>() {
            return 1;
        }
        if cause.is::<InternalError>() {
            return 3;
        }
        if let Some(err) = cause.downcast_ref::<E>() {
            return match err {
                E::UnknownMetric(_) | E::TooFewRuns(_) => 1,
                _ => 2,
            };
        }
        if cause.is::<std::io::Error>() {
            return 2;
        }
    }
    3
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
