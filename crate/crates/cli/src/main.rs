use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use frechet_cli::commands::run;
use frechet_cli::{Cli, CliError, RunConfig};

fn emit(config: &RunConfig, body: &str) -> Result<(), CliError> {
    match &config.output {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Input(format!("cannot write standard output: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };

    let result = RunConfig::from_cli(cli).and_then(|config| {
        let outcome = run(&config)?;
        for line in &outcome.diagnostics {
            eprintln!("{line}");
        }
        emit(&config, &outcome.body)?;
        Ok(outcome.exit_code)
    });

    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("frechet: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
