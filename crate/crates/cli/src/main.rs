//! `hyperop` command-line interface.
//!
//! Exit codes: 0 pass, 1 verified failure, 2 invalid input, 3 inconclusive.

mod args;
mod commands;
mod grid;
mod inputs;
mod output;

use std::process::ExitCode;

use clap::Parser;

use hyperop_core::error::Error;

use crate::args::Cli;

pub const EXIT_INVALID: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INVALID,
            msg: msg.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExhausted(_) => EXIT_INCONCLUSIVE,
            _ => EXIT_INVALID,
        };
        CliError { code, msg: e.to_string() }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args_os().map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    let result = if cli.grid.is_empty() {
        output::single(&cli)
    } else {
        grid::sweep(&cli, &argv)
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
