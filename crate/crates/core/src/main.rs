use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use saiqh::cli::{parse_config, run, CliError, Command, Options};
use saiqh::model::COMPARTMENTS;

/// Simulate and analyse the SAIQH epidemic model on time scales.
#[derive(Debug, Parser)]
#[command(name = "saiqh", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Run configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Estimate the lambda bounds from a simulated run.
    #[arg(long)]
    empirical: bool,
    /// Second initial state for `compare`.
    #[arg(long, value_name = "x1,...,x6", value_parser = parse_state)]
    second_initial: Option<[f64; COMPARTMENTS]>,
    /// Decay rate checked by `compare` instead of the certified one.
    #[arg(long, allow_negative_numbers = true)]
    psi: Option<f64>,
    /// Output file.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_state(s: &str) -> Result<[f64; COMPARTMENTS], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("`{x}` is not a number")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected {COMPARTMENTS} values, got {}", v.len()))
}

fn execute(args: Args) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|source| CliError::Io { path: args.config.display().to_string(), source })?;
    let cfg = parse_config(&text)?;
    let opts = Options { empirical: args.empirical, second_initial: args.second_initial, psi: args.psi, out: args.out };
    let status = run(args.command, &cfg, &opts, &mut std::io::stdout().lock())?;
    Ok(status.code())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
