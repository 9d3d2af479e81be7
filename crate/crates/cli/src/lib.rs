//! `duality` command-line front end.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{CommandOutput, Overrides};
use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "duality",
    version,
    about = "Two-atom single-photon duality simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print V, D, mu and the residual V^2 + D^2 - mu^2
    Report(CommonArgs),
    /// Tabulate the detection rate over the relative phase (CSV theta,rate)
    Fringes(CommonArgs),
    /// Simulate photon counts and estimate V and D (CSV theta,counts)
    Montecarlo(CommonArgs),
    /// Sweep Stokes parameters and polarization visibilities (CSV theta,S0..S3)
    Stokes(CommonArgs),
    /// Duality reports along the mixing family (CSV mixing,V,D,mu,residual)
    Sweep(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Run configuration (TOML)
    #[arg(long)]
    pub config: PathBuf,
    /// Write the CSV table here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of uniform angles in [0, 2pi)
    #[arg(long)]
    pub angles: Option<usize>,
    /// RNG seed (overrides the config)
    #[arg(long)]
    pub seed: Option<u64>,
}

type CommandFn = fn(&RunConfig, Overrides) -> Result<CommandOutput, CliError>;

fn dispatch(command: &Command) -> Result<(CommandOutput, Option<PathBuf>), CliError> {
    let (args, f): (&CommonArgs, CommandFn) = match command {
        Command::Report(a) => (a, commands::report),
        Command::Fringes(a) => (a, commands::fringes),
        Command::Montecarlo(a) => (a, commands::montecarlo),
        Command::Stokes(a) => (a, commands::stokes),
        Command::Sweep(a) => (a, commands::sweep),
    };
    if args.angles == Some(0) {
        return Err(CliError::Usage("--angles must be positive".into()));
    }
    let cfg = RunConfig::load(&args.config)?;
    let output = f(
        &cfg,
        Overrides {
            angles: args.angles,
            seed: args.seed,
        },
    )?;
    Ok((output, args.out.clone()))
}

fn emit(
    output: CommandOutput,
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let io = |path: PathBuf| move |source| CliError::Io { path, source };
    match (output.csv, out) {
        (Some(csv), Some(path)) => std::fs::write(&path, csv).map_err(io(path))?,
        (Some(csv), None) if output.csv_to_stdout => {
            stdout
                .write_all(csv.as_bytes())
                .map_err(io("<stdout>".into()))?;
            if !output.summary.is_empty() {
                stdout.write_all(b"\n").map_err(io("<stdout>".into()))?;
            }
        }
        _ => {}
    }
    stdout
        .write_all(output.summary.as_bytes())
        .map_err(io("<stdout>".into()))?;
    Ok(())
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match dispatch(&cli.command).and_then(|(output, out)| emit(output, out, stdout)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
