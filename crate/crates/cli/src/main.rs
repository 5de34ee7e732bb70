mod commands;
mod config;
mod output;

use std::io;
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, RunConfig};

const INPUT_ERROR: u8 = 1;
const NOT_VERIFIED: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(INPUT_ERROR);
        }
        Err(e) => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let result = RunConfig::from_flags(&cli.flags).and_then(|cfg| {
        let outcome = match &cli.command {
            Command::Poset(c) => commands::poset(c, &cfg),
            Command::Bundle(c) => commands::bundle(c, &cfg),
            Command::Khovanov(c) => commands::khovanov(c, &cfg),
            Command::Selftest { cases } => commands::run_selftest(*cases, &cfg),
        }?;
        output::emit(io::stdout().lock(), cfg.output, &outcome.json, &outcome.table)?;
        Ok(outcome.verified)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("colposet: verification failed");
            ExitCode::from(NOT_VERIFIED)
        }
        Err(e) => {
            eprintln!("colposet: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
