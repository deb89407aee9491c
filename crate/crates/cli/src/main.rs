use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use symord_cli::config::Cli;
use symord_cli::{run, RunConfig, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let started = Instant::now();
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(report.render(config.output).as_bytes()).is_err() {
        return ExitCode::from(EXIT_USAGE as u8);
    }
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    ExitCode::from(if report.passed { EXIT_PASS } else { EXIT_FAIL } as u8)
}
