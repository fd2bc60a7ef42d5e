//! Command implementations behind the `sandpile` binary.
//!
//! Every command returns a [`CommandResult`]; `main` prints it as JSON on
//! stdout and maps its status to the process exit code.

pub mod args;
pub mod commands;
pub mod golden;
mod output;

pub use output::{CommandResult, Status};

use args::{Cli, Command};

pub fn run(cli: &Cli) -> CommandResult {
    let started = std::time::Instant::now();
    let result = match &cli.command {
        Command::Structure(a) => commands::structure::run(a),
        Command::Solve(a) => commands::solve::run(a),
        Command::Bench(a) => commands::bench::run(a),
        Command::VerifyPaper(a) => Ok(golden::run(a)),
    };
    let mut result = result.unwrap_or_else(CommandResult::error);
    result.elapsed_ms = started.elapsed().as_millis() as u64;
    result
}
