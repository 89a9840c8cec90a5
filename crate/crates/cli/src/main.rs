// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! `krausloom` command-line interface.
//!
//! Exit codes: 0 success, 2 validation, 3 lattice/Kraus mismatch, 4 i/o.

mod args;
mod commands;
mod error;
mod grid;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliResult;

fn run(cli: Cli) -> CliResult<()> {
    let (kind, args) = cli.command.split();
    let args = args.resolve()?;
    if args.grid.is_empty() {
        commands::run(kind, &args)
    } else {
        grid::run(kind, &args)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("krausloom: {e}");
            ExitCode::from(e.code())
        }
    }
}
