//! Command-line front end for `resfluor`: analytic curves, statistics and
//! simulated photon streams as reproducible CSV/JSON artifacts.

pub mod args;
mod commands;
mod error;
pub mod output;
pub mod validate;

use std::path::Path;

pub use args::Cli;
pub use error::CliError;

use args::Command;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let out_dir = cli.out_dir.as_deref();
    match &cli.command {
        Command::DelayCurve(a) => commands::delay_curve_cmd(a, out_dir),
        Command::Stats(a) => commands::stats_cmd(a, out_dir),
        Command::Spectrum(a) => commands::spectrum_cmd(a, out_dir),
        Command::Correlation(a) => commands::correlation_cmd(a, out_dir),
        Command::Simulate(a) => commands::simulate_cmd(a, out_dir),
        Command::Validate(a) => validate_cmd(a, out_dir),
    }
}

fn validate_cmd(args: &args::ValidateArgs, out_dir: Option<&Path>) -> Result<(), CliError> {
    let fault = args.inject_fault.as_deref();
    if let Some(name) = fault {
        if !validate::checks().iter().any(|c| c.name == name) {
            return Err(CliError::usage(
                "--inject-fault",
                format!("no check named `{name}`"),
            ));
        }
    }
    let report = validate::report(fault);
    let path = args.output.as_deref().map(|p| output::resolve(out_dir, p));
    output::emit(path.as_deref(), |w| output::write_json(&report, w))?;
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!(
            "FAIL {}: measured {:?}, tolerance {:e}{}",
            c.name,
            c.measured_error,
            c.tolerance,
            c.error
                .as_deref()
                .map(|e| format!(" ({e})"))
                .unwrap_or_default()
        );
    }
    if report.failed > 0 {
        return Err(CliError::ChecksFailed {
            failed: report.failed,
            total: report.checks.len(),
        });
    }
    Ok(())
}
