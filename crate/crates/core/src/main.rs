use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use diratom::cli::{
    cmd_algebra_check, cmd_compare, cmd_run, cmd_sweep, parse_config, CliError, ParsedConfig,
};

#[derive(Parser)]
#[command(
    name = "diratom",
    version,
    about = "Two-level atom dynamics in the four-component spinor representation"
)]
struct Cli {
    /// Directory that receives CSV/JSON outputs.
    #[arg(long, global = true, default_value = ".")]
    output_dir: PathBuf,
    /// Concurrent sub-runs for sweeps (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Suppress progress output.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one configured problem; write trajectory CSV and summary JSON.
    Run { config: PathBuf },
    /// Run the base config once per sweep value and aggregate the results.
    Sweep { config: PathBuf },
    /// Verify the operator-algebra identities and print a pass/fail table.
    AlgebraCheck,
    /// Cross-model comparison experiments on a resonant configuration.
    Compare { config: PathBuf },
}

fn load(path: &PathBuf) -> Result<ParsedConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let jobs = cli
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    match cli.command {
        Command::Run { config } => match load(&config)? {
            ParsedConfig::Run(run) => {
                cmd_run(&run, &cli.output_dir, cli.quiet)?;
                Ok(0)
            }
            ParsedConfig::Sweep(_) => Err(CliError::Config(
                "this is a sweep config (it has a [sweep] table); use `diratom sweep`".into(),
            )),
        },
        Command::Sweep { config } => match load(&config)? {
            ParsedConfig::Sweep(sweep) => {
                let artifacts = cmd_sweep(&sweep, &cli.output_dir, jobs, cli.quiet)?;
                Ok(artifacts.exit_code())
            }
            ParsedConfig::Run(_) => Err(CliError::Config(
                "this is a run config (no [sweep] table); use `diratom run`".into(),
            )),
        },
        Command::AlgebraCheck => Ok(if cmd_algebra_check() { 0 } else { 1 }),
        Command::Compare { config } => match load(&config)? {
            ParsedConfig::Run(run) => {
                cmd_compare(&run, &cli.output_dir, cli.quiet)?;
                Ok(0)
            }
            ParsedConfig::Sweep(_) => Err(CliError::Config(
                "compare expects a run config without a [sweep] table".into(),
            )),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
