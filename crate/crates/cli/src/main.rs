mod args;
mod commands;
mod render;

use std::process::ExitCode;

use clap::Parser;
use qdeform_core::QError;

/// Outcome of a command: text to print and whether every check held.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

fn exit_code_for(err: &QError) -> u8 {
    match err {
        QError::InvalidDeformation(_)
        | QError::Domain { .. }
        | QError::InvalidBase(_)
        | QError::InvalidQuantumNumbers { .. }
        | QError::OutsideInterval(_)
        | QError::InvalidProblem(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
