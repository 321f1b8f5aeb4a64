use std::process::ExitCode;

use clap::Parser;

use adshor::cli::{run, write_report, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("adshor: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = write_report(&report) {
        eprintln!("adshor: {e}");
        return ExitCode::from(2);
    }
    if report.passed() {
        return ExitCode::SUCCESS;
    }
    eprintln!("adshor: {} check(s) failed", report.failures.len());
    for f in &report.failures {
        eprintln!("{}", serde_json::to_string(f).unwrap_or_default());
    }
    ExitCode::from(1)
}
