use std::process::ExitCode;

use clap::Parser;
use resfluor_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match resfluor_cli::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("resfluor: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
