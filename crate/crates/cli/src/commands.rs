use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use quadint::catalog::{singular_lines, AngularConvention};
use quadint::dynamics::{
    read_trajectory, scan_singularity, simulate as run_simulation, write_scan_table, write_trajectory, DynamicsError, ForceField,
    SimConfig,
};
use quadint::exec::{with_jobs, Execution};
use quadint::verifier::run_report;
use quadint::SystemContext;

use crate::manifest::{write_manifest, RunManifest};
use crate::plot::{render_svg, Series};
use crate::{Format, PlotArgs, ScanArgs, SimulateArgs, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    /// Bad parameters or input data (exit 1).
    Domain(String),
    /// Anything else (exit 2).
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Internal(e)
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Io(_) => CliError::Internal(anyhow::anyhow!(e)),
            other => CliError::Domain(other.to_string()),
        }
    }
}

type CmdResult = Result<ExitCode, CliError>;

fn execution(sequential: bool) -> Execution {
    if sequential || !Execution::available() {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

pub fn verify(args: VerifyArgs) -> CmdResult {
    let convention = if args.paper_literal_ly {
        AngularConvention::Misprint
    } else {
        AngularConvention::Standard
    };
    let exec = execution(args.sequential);
    let report = with_jobs(args.jobs, || {
        let ctx = SystemContext::with_convention(convention);
        run_report(&ctx, &args.only, exec)
    });
    let text = report.render_text();
    let rendered = match args.format {
        Format::Text => text.clone(),
        Format::Json => serde_json::to_string_pretty(&report).context("serializing report")? + "\n",
    };
    match &args.out {
        Some(out) => {
            std::fs::write(out, &rendered).with_context(|| format!("writing {}", out.display()))?;
            let mut m = RunManifest::new(
                "verify",
                json!({
                    "format": format!("{:?}", args.format).to_lowercase(),
                    "only": args.only.iter().map(|f| f.name()).collect::<Vec<_>>(),
                    "paper_literal_ly": args.paper_literal_ly,
                }),
            );
            m.outputs.push(path_str(out));
            write_manifest(out, &m)?;
            print!("{text}");
        }
        None => print!("{rendered}"),
    }
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn sim_config(args: &SimulateArgs) -> SimConfig {
    SimConfig {
        a: args.a.value,
        b: args.b.value,
        w0: args.w0.value,
        integrator: args.integrator,
        rel_tol: args.rel_tol,
        abs_tol: args.abs_tol,
        step: args.step,
        min_step: args.min_step,
        t_end: args.t_end,
        u_floor: args.u_floor,
        r_max: args.r_max,
        sample_interval: args.sample_interval,
    }
}

pub fn simulate(args: SimulateArgs) -> CmdResult {
    let cfg = sim_config(&args);
    let (traj, outcome) = run_simulation(&cfg, args.q0.0, args.p0.0)?;
    let mut w = create(&args.out)?;
    write_trajectory(&mut w, &traj)?;
    w.flush().context("flushing trajectory")?;

    let mut m = RunManifest::new(
        "simulate",
        json!({
            "a": args.a.text,
            "b": args.b.text,
            "w0": args.w0.text,
            "a_value": cfg.a,
            "b_value": cfg.b,
            "w0_value": cfg.w0,
            "q0": args.q0.0,
            "p0": args.p0.0,
            "t_end": cfg.t_end,
            "integrator": cfg.integrator.to_string(),
            "rel_tol": cfg.rel_tol,
            "abs_tol": cfg.abs_tol,
            "step": cfg.step,
            "min_step": cfg.min_step,
            "u_floor": cfg.u_floor,
            "r_max": cfg.r_max,
            "sample_interval": cfg.sample_interval,
        }),
    );
    m.outputs.push(path_str(&args.out));
    write_manifest(&args.out, &m)?;

    println!("classification  {}", outcome.classification);
    println!("t_final         {}", outcome.t_final);
    println!("steps           {} accepted, {} rejected", outcome.accepted_steps, outcome.rejected_steps);
    println!(
        "initial         H = {:.12e}  X1 = {:.12e}  X2 = {:.12e}",
        outcome.initial[0], outcome.initial[1], outcome.initial[2]
    );
    println!(
        "max drift       H = {:.3e}  X1 = {:.3e}  X2 = {:.3e}",
        outcome.max_drift[0], outcome.max_drift[1], outcome.max_drift[2]
    );
    println!("min u           {:.6e}", outcome.min_u);
    println!("min d_sing      {:.6e}", outcome.min_dsing);
    println!("max |q|         {:.6e}", outcome.max_r);
    println!("rows            {} -> {}", traj.rows.len(), args.out.display());
    if let Some(msg) = &outcome.message {
        println!("note            {msg}");
    }
    use quadint::dynamics::Classification::*;
    let failed = matches!(outcome.classification, StepFailure | SingularityApproach);
    Ok(if args.strict && failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

pub fn plot(args: PlotArgs) -> CmdResult {
    let mut series = Vec::with_capacity(args.inputs.len());
    for path in &args.inputs {
        let f = File::open(path).map_err(|e| CliError::Domain(format!("cannot open {}: {e}", path.display())))?;
        let traj = read_trajectory(f).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
        series.push(Series {
            label: path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
            points: traj.rows.iter().map(|r| r.q).collect(),
        });
    }
    let from_manifest = args.inputs.first().and_then(|p| crate::manifest::read_params(p));
    let a = args.a.as_ref().map(|r| r.value).or(from_manifest.map(|m| m.0)).unwrap_or(0.25);
    let b = args.b.as_ref().map(|r| r.value).or(from_manifest.map(|m| m.1)).unwrap_or(1.0);
    let lines = singular_lines(a, b).map_err(|e| CliError::Domain(e.to_string()))?;
    let title = args
        .title
        .clone()
        .unwrap_or_else(|| format!("a = {a}, b = {b}, {} projection", args.view.name()));
    let svg = render_svg(&series, &lines, args.view, &title);
    std::fs::write(&args.out, svg).with_context(|| format!("writing {}", args.out.display()))?;

    let mut m = RunManifest::new("plot", json!({ "view": args.view.name(), "a_value": a, "b_value": b }));
    m.inputs = args.inputs.iter().map(|p| path_str(p)).collect();
    m.outputs.push(path_str(&args.out));
    write_manifest(&args.out, &m)?;
    println!("{} trajectories -> {}", series.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

/// `q` uniform in `[-1.5, 1.5]³` at least 0.05 from the lines, `p` uniform
/// in `[-0.5, 0.5]³`, kept only when the energy is negative.
fn random_ics<F: ForceField>(
    pot: &F,
    dsing: impl Fn([f64; 3]) -> f64,
    n: usize,
    seed: u64,
) -> Result<Vec<([f64; 3], [f64; 3])>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while out.len() < n {
        attempts += 1;
        if attempts > 1000 * (n + 1) {
            return Err(CliError::Domain(format!(
                "could not draw {n} negative-energy initial conditions"
            )));
        }
        let q: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.5..1.5));
        let p: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.5..0.5));
        if dsing(q) <= 0.05 {
            continue;
        }
        if matches!(pot.energy(q, p), Ok(e) if e < 0.0) {
            out.push((q, p));
        }
    }
    Ok(out)
}

/// Six numbers per line; blank lines, `#` comments and a non-numeric
/// header line are skipped.
fn read_ic_file(path: &PathBuf) -> Result<Vec<([f64; 3], [f64; 3])>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Domain(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    let mut header_seen = false;
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Result<Vec<f64>, _> = line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        match fields {
            Ok(v) if v.len() == 6 => out.push(([v[0], v[1], v[2]], [v[3], v[4], v[5]])),
            Err(_) if out.is_empty() && !header_seen => header_seen = true,
            _ => {
                return Err(CliError::Domain(format!(
                    "{}:{}: expected six comma-separated numbers",
                    path.display(),
                    n + 1
                )))
            }
        }
    }
    Ok(out)
}

pub fn scan(args: ScanArgs) -> CmdResult {
    let cfg = SimConfig {
        a: args.a.value,
        b: args.b.value,
        w0: args.w0.value,
        rel_tol: args.rel_tol,
        abs_tol: args.abs_tol,
        min_step: args.min_step,
        t_end: args.t_end,
        u_floor: args.u_floor,
        r_max: args.r_max,
        ..SimConfig::default()
    };
    if !(cfg.w0 < 0.0) {
        return Err(DynamicsError::ScanDomain(cfg.w0).into());
    }
    let pot = cfg.potential()?;
    let ics = match &args.ic_file {
        Some(path) => read_ic_file(path)?,
        None => random_ics(&pot, |q| pot.distance_to_singular_lines(q), args.grid, args.seed)?,
    };
    let exec = execution(args.sequential);
    let rows = with_jobs(args.jobs, || scan_singularity(&cfg, &ics, exec))?;
    let mut w = create(&args.out)?;
    write_scan_table(&mut w, &rows)?;
    w.flush().context("flushing scan table")?;

    let mut m = RunManifest::new(
        "scan",
        json!({
            "a": args.a.text,
            "b": args.b.text,
            "w0": args.w0.text,
            "a_value": cfg.a,
            "b_value": cfg.b,
            "grid": args.grid,
            "seed": args.seed,
            "t_end": cfg.t_end,
            "rel_tol": cfg.rel_tol,
            "abs_tol": cfg.abs_tol,
            "min_step": cfg.min_step,
            "u_floor": cfg.u_floor,
            "r_max": cfg.r_max,
        }),
    );
    if let Some(p) = &args.ic_file {
        m.inputs.push(path_str(p));
    }
    m.outputs.push(path_str(&args.out));
    write_manifest(&args.out, &m)?;

    let mut counts = std::collections::BTreeMap::new();
    for r in &rows {
        *counts.entry(r.classification.as_str()).or_insert(0usize) += 1;
    }
    let summary: Vec<String> = counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
    println!("{} runs -> {} ({})", rows.len(), args.out.display(), summary.join(", "));
    Ok(ExitCode::SUCCESS)
}
