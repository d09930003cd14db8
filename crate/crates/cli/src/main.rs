use std::process::ExitCode;

use clap::Parser;
use gravent_cli::{emit, execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli.command).and_then(|outcome| {
        for note in &outcome.notes {
            eprintln!("{note}");
        }
        emit(&outcome)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
