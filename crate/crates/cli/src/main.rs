mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use commands::{run, EXIT_UNDECIDED, EXIT_USAGE};
use config::{Cli, RunConfig, SCHEMA};

fn resolve(cli: Cli) -> Result<RunConfig, String> {
    if let Some(file) = &cli.config {
        let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", file.display()))?;
        if cfg.schema != SCHEMA {
            return Err(format!("config schema {} is not supported", cfg.schema));
        }
        return Ok(cfg);
    }
    let run = cli.command.ok_or("no subcommand given; see --help")?;
    Ok(RunConfig {
        schema: SCHEMA,
        common: cli.common,
        run,
    })
}

fn write(path: &std::path::Path, body: &str) -> Result<(), String> {
    std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE as u8),
            };
        }
    };
    let emit = cli.emit_config;
    let cfg = match resolve(cli) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    if emit {
        println!("{}", serde_json::to_string_pretty(&cfg).expect("config serializes"));
        return ExitCode::SUCCESS;
    }
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code as u8);
        }
    };
    let written = match &cfg.common.out {
        Some(path) => write(path, &outcome.body),
        None => std::io::stdout()
            .write_all(outcome.body.as_bytes())
            .map_err(|e| e.to_string()),
    };
    let written = written.and_then(|()| outcome.extra.iter().try_for_each(|(p, b)| write(p, b)));
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_UNDECIDED as u8);
    }
    ExitCode::from(outcome.code as u8)
}
