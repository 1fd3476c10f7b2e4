//! Command-line front end: `whichpath-sim <verify|pattern|eraser|sample|sweep>
//! --config <path> [--section.field=value ...]`.
//!
//! Exit codes: 0 success, 1 failed invariant (verify), 2 config/usage error,
//! 3 I/O error.

mod commands;
mod config;
mod output;

pub use commands::{cmd_eraser, cmd_pattern, cmd_sample, cmd_sweep, cmd_verify, SweepSpec};
pub use config::{
    ConfigFile, DetectorSection, Formats, GeometrySection, MeasureInternal, OutputSection,
    RunSection, VariantKind, VariantSection, SEED_ENV_VAR,
};
pub use output::{
    atomic_write, events_csv, fmt_f64, histogram_csv, pattern_csv, sweep_csv, write_json,
    CheckResult, EraserJson, GofJson, PatternJson, Report, SweepRow, VerifyReport,
};

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::SimError;

#[derive(Parser)]
#[command(
    name = "whichpath-sim",
    version,
    about = "Simulate a two-slit detection chain: click patterns, which-path \
             records, eraser post-selection, and sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// TOML config file
    #[arg(long)]
    config: PathBuf,
    /// Dotted-path overrides of scalar config fields, e.g. --run.seed=7
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the invariant suite and print a JSON report (exit 1 on failure)
    Verify(CommonArgs),
    /// Compute the click pattern: pattern.csv + report.json
    Pattern(CommonArgs),
    /// Condition the pattern on the rotated internal outcome:
    /// eraser_{plus,minus,marginal}.csv + report.json
    Eraser(CommonArgs),
    /// Sample detection events: events.csv, histogram.csv, gof.json
    Sample(CommonArgs),
    /// Sweep a parameter and tabulate V, D, V^2+D^2, and mutual information
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// TOML config file
    #[arg(long)]
    config: PathBuf,
    /// parameter=start:stop:steps with parameter one of chi_rad,
    /// dephasing_sigma_rad, slit_separation_m
    #[arg(long)]
    sweep: String,
    /// Dotted-path overrides of scalar config fields
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    overrides: Vec<String>,
}

fn exit_code_for(e: &SimError) -> i32 {
    match e {
        SimError::Io { .. } => 3,
        _ => 2,
    }
}

/// Parse argv, run the chosen command, and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with success
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Verify(args) => load(args).and_then(|cfg| cmd_verify(&cfg)),
        Command::Pattern(args) => load(args).and_then(|cfg| cmd_pattern(&cfg).map(|_| 0)),
        Command::Eraser(args) => load(args).and_then(|cfg| cmd_eraser(&cfg).map(|_| 0)),
        Command::Sample(args) => load(args).and_then(|cfg| cmd_sample(&cfg).map(|_| 0)),
        Command::Sweep(args) => ConfigFile::load(&args.config, &args.overrides).and_then(|cfg| {
            let spec = SweepSpec::parse(&args.sweep)?;
            cmd_sweep(&cfg, &spec).map(|_| 0)
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn load(args: &CommonArgs) -> crate::Result<ConfigFile> {
    ConfigFile::load(&args.config, &args.overrides)
}
