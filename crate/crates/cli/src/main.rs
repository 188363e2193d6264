use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ionspin_cli::{parse_config, run, CliError, Subcommand};

/// Simulate electric-field control of a single J=1 ion spin.
#[derive(Debug, Parser)]
#[command(name = "ionspin", version)]
struct Args {
    #[arg(value_enum)]
    command: Subcommand,

    /// Configuration file (`key = value` lines, `#` comments).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output CSV path; defaults to `output_path` in the config, else stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Grid points for sweeps, overriding `grid_points`.
    #[arg(long, global = true)]
    points: Option<usize>,
}

fn execute(args: Args) -> Result<(), CliError> {
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => String::new(),
    };
    let mut config = parse_config(&text)?;
    if let Some(n) = args.points {
        if n < 2 {
            return Err(CliError::Range {
                key: "points",
                value: n as f64,
                bound: ">= 2".into(),
            });
        }
        config.grid_points = n;
    }
    let output = run(args.command, &config)?;
    match args.out.or(config.output_path) {
        Some(path) => std::fs::write(&path, output).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(output.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
                    path: "<stdout>".into(),
                    source: e,
                }),
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.kind().as_str().unwrap_or("invalid arguments");
            eprintln!("error[E_USAGE]: {message}; see --help");
            return ExitCode::from(2);
        }
    };
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), e.to_string().replace('\n', " "));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
