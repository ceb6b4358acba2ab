//! `gcslab <MODE> --config <PATH> [--dotted.key value ...]`

mod config;
mod error;
mod modes;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{apply_overrides, parse_config, read_document, Mode};
use error::CliError;
use output::emit;

#[derive(Debug, Parser)]
#[command(
    name = "gcslab",
    version,
    about = "Generalized coherent states in a constant electric field"
)]
struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    mode: Mode,
    /// JSON config document, `-` for standard input.
    #[arg(long, short)]
    config: PathBuf,
    /// Config overrides as `--dotted.key value` pairs.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, num_args = 0..)]
    overrides: Vec<String>,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let mut doc = read_document(&cli.config)?;
    apply_overrides(&mut doc, &cli.overrides)?;
    let cfg = parse_config(doc)?;
    if let Some(mode) = cfg.mode {
        if mode != cli.mode {
            return Err(CliError::config(format!(
                "config says mode `{}` but `{}` was requested",
                mode.as_str(),
                cli.mode.as_str()
            )));
        }
    }
    let path = cfg.out.path.as_deref();
    let rendered = match cli.mode {
        Mode::Eval => modes::run_eval(&cfg)?,
        Mode::Moments => modes::run_moments(&cfg)?,
        Mode::Regime => modes::run_regime(&cfg)?,
        Mode::Map => modes::run_map(&cfg)?,
        Mode::Verify => {
            let (bytes, pass) = verify::run_verify(&cfg)?;
            emit(path, &bytes)?;
            return if pass {
                Ok(())
            } else {
                Err(CliError::verification("one or more verification checks failed"))
            };
        }
    };
    emit(path, &rendered.main)?;
    for (side, bytes) in &rendered.sidecars {
        emit(Some(side), bytes)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.code as u8)
        }
    }
}
