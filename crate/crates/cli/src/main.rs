mod commands;
mod config;
mod load;
mod report;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command};

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Pass,
    CheckFailed,
}

/// Failures that stop a command.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or malformed input, bad flags: exit 2.
    Input(String),
    /// A check failed or a prerequisite was refused: exit 1.
    Check(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Normalize(a) => commands::normalize_command(a),
        Command::CheckMap(a) => commands::check_map(a),
        Command::Reflect(a) => commands::reflect(a),
        Command::Corpus(a) => commands::corpus(a),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
