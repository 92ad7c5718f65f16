//! `quadint`: verification, simulation, scanning and plotting.
//!
//! Exit codes: 0 on success, 1 on a domain error or failed check, 2 on an
//! internal error.

mod args;
mod commands;
mod config;
mod manifest;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use args::{RationalArg, Vec3Arg};
use plot::View;
use quadint::dynamics::Integrator;
use quadint::verifier::CheckFamily;

#[derive(Parser, Debug)]
#[command(name = "quadint", version, about = "Exact verification and numerical dynamics for a quadratically integrable 3D system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the exact symbolic checks and report.
    Verify(VerifyArgs),
    /// Integrate one trajectory and write it as CSV.
    Simulate(SimulateArgs),
    /// Draw trajectory CSVs and the singular lines as SVG.
    Plot(PlotArgs),
    /// Batch of runs recording closest approach to the singular lines (w0 < 0).
    Scan(ScanArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here (the text report still goes to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Restrict to these check families (comma-separated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<CheckFamily>,
    /// Use the misprinted `l_y = z·py − x·pz` (expected to fail).
    #[arg(long)]
    paper_literal_ly: bool,
    /// Run checks one after another on the calling thread.
    #[arg(long)]
    sequential: bool,
    #[arg(long, env = "QUADINT_JOBS")]
    jobs: Option<usize>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct SimulateArgs {
    #[arg(long, default_value = "1/4", allow_hyphen_values = true)]
    a: RationalArg,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    b: RationalArg,
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    w0: RationalArg,
    /// Initial position `x,y,z`.
    #[arg(long, allow_hyphen_values = true)]
    q0: Vec3Arg,
    /// Initial momentum `px,py,pz`.
    #[arg(long, allow_hyphen_values = true)]
    p0: Vec3Arg,
    #[arg(long)]
    t_end: f64,
    #[arg(long, default_value = "adaptive")]
    integrator: Integrator,
    #[arg(long, default_value_t = 1e-12)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    /// Fixed step for leapfrog.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[arg(long, default_value_t = 1e-12)]
    min_step: f64,
    #[arg(long, default_value_t = 1e-10)]
    u_floor: f64,
    #[arg(long, default_value_t = 1e3)]
    r_max: f64,
    #[arg(long, default_value_t = 0.1)]
    sample_interval: f64,
    #[arg(long, default_value = "trajectory.csv")]
    out: PathBuf,
    /// Exit 1 unless the run completes.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct PlotArgs {
    /// Trajectory CSV files.
    inputs: Vec<PathBuf>,
    #[arg(long, default_value = "plot.svg")]
    out: PathBuf,
    #[arg(long, default_value = "xy")]
    view: View,
    /// Parameters for the singular lines; read from the first input's
    /// manifest when omitted, else 1/4 and 1.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<RationalArg>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<RationalArg>,
    #[arg(long)]
    title: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct ScanArgs {
    #[arg(long, default_value = "1/4", allow_hyphen_values = true)]
    a: RationalArg,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    b: RationalArg,
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    w0: RationalArg,
    /// Number of random negative-energy initial conditions.
    #[arg(long, default_value_t = 10)]
    grid: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV of initial conditions `x0,y0,z0,px0,py0,pz0` (replaces the grid).
    #[arg(long)]
    ic_file: Option<PathBuf>,
    #[arg(long, default_value_t = 100.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-12)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    min_step: f64,
    #[arg(long, default_value_t = 1e-10)]
    u_floor: f64,
    #[arg(long, default_value_t = 1e3)]
    r_max: f64,
    #[arg(long, default_value = "scan.csv")]
    out: PathBuf,
    #[arg(long)]
    sequential: bool,
    #[arg(long, env = "QUADINT_JOBS")]
    jobs: Option<usize>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let argv = match config::expand_config_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Plot(a) => commands::plot(a),
        Command::Scan(a) => commands::scan(a),
    };
    match result {
        Ok(code) => code,
        Err(commands::CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(commands::CliError::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(2)
        }
    }
}
