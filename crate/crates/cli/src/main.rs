use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use bures_cli::args::{Cli, Command};
use bures_cli::commands::{self, CliError, CliResult};
use clap::Parser;

const THREADS_ENV: &str = "BURES_THREADS";

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Failure(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> CliResult<bool> {
    configure_threads()?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let ok = match &cli.command {
        Command::Density(a) => commands::density(a, &mut out).map(|_| true),
        Command::Sample(a) => commands::sample(a, &mut out).map(|_| true),
        Command::Integrate(a) => commands::integrate_cmd(a, &mut out).map(|_| true),
        Command::Volume(a) => commands::volume(a, &mut out).map(|_| true),
        Command::Check(a) => commands::check(a, &mut out),
    }?;
    out.flush()?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
