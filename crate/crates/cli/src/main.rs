//! `pepsavg`: command-line front end for exact PEPS contraction, the
//! reduction experiments and the permanent baseline.

mod args;
mod commands;
mod exit;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use args::{Cli, Command};
use commands::Outcome;

fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Contract { instance } => commands::contract(instance, g),
        Command::Uev(a) => commands::expectation(a, false, g),
        Command::Nev(a) => commands::expectation(a, true, g),
        Command::Reduce(a) => commands::reduce(a, g),
        Command::Permanent(a) => commands::permanent(a, g),
        Command::VerifyLemma { lemma, rakhmanov_c, rakhmanov_c_general } => {
            commands::verify_lemma(*lemma, *rakhmanov_c, *rakhmanov_c_general, g)
        }
        Command::Bench { reps } => commands::bench(*reps, g),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.global.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| emit(&cli, &out.text).map(|_| out.code));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit::code_for(&err))
        }
    }
}
