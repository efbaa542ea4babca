//! The `mcmp` command-line tool.

mod args;
mod commands;
mod error;
mod report;

use std::process::ExitCode;

use clap::Parser;
use mcmp_core::Limits;

use args::{Cli, CmvCommand, Command};
use commands::Env;
use error::CliError;
use report::{error_json, Report};

fn dispatch(env: &Env, command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Check(i) => commands::check(env, &i.file),
        Command::Safety(i) => commands::safety(env, &i.file),
        Command::Df(i) => commands::deadlock_freedom(env, &i.file),
        Command::Simulate {
            input,
            max_steps,
            trace,
        } => commands::simulate(env, &input.file, *max_steps, *trace),
        Command::Encode {
            input,
            via,
            sidecar,
        } => commands::encode_file(env, &input.file, via, sidecar.as_deref()),
        Command::VerifyEncoding { input, via } => commands::verify_encoding(env, &input.file, via),
        Command::Detect { input, pattern } => commands::detect(env, &input.file, *pattern),
        Command::Classify(i) => commands::classify_file(env, &i.file),
        Command::Electoral {
            input,
            station,
            label,
        } => commands::electoral(env, &input.file, station, label),
        Command::Cmv(CmvCommand::Check(i)) => commands::cmv_check(env, &i.file),
        Command::Cmv(CmvCommand::Encode(i)) => commands::cmv_encode(env, &i.file),
    }
}

fn name_and_file(command: &Command) -> (&'static str, String) {
    let (name, input) = match command {
        Command::Check(i) => ("check", i),
        Command::Safety(i) => ("safety", i),
        Command::Df(i) => ("df", i),
        Command::Simulate { input, .. } => ("simulate", input),
        Command::Encode { input, .. } => ("encode", input),
        Command::VerifyEncoding { input, .. } => ("verify-encoding", input),
        Command::Detect { input, .. } => ("detect", input),
        Command::Classify(i) => ("classify", i),
        Command::Electoral { input, .. } => ("electoral", input),
        Command::Cmv(CmvCommand::Check(i)) => ("cmv check", i),
        Command::Cmv(CmvCommand::Encode(i)) => ("cmv encode", i),
    };
    (name, input.file.display().to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env = Env {
        limits: Limits {
            max_states: cli.max_states,
            max_depth: cli.max_depth,
        },
        dot: cli.dot.clone(),
    };
    let (name, file) = name_and_file(&cli.command);
    match dispatch(&env, &cli.command) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json(name, &file));
            } else {
                println!("{}", report.text);
            }
            ExitCode::from(report.outcome.exit_code())
        }
        Err(e) => {
            if cli.json {
                println!("{}", error_json(name, &file, &e.to_string()));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
