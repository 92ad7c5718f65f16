//! Trajectory runs with conservation and singularity monitoring.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::integrate::{leapfrog_with_force, AdaptiveOptions, Dopri5, PhaseState};
use super::system::{ForceField, SystemPotential};
use super::DynamicsError;
use crate::exec::{map_indexed, Execution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    /// Dormand–Prince 5(4).
    Adaptive,
    /// Velocity Verlet with fixed step.
    Leapfrog,
}

impl FromStr for Integrator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "adaptive" | "rk45" | "dopri5" => Ok(Integrator::Adaptive),
            "leapfrog" | "verlet" => Ok(Integrator::Leapfrog),
            other => Err(format!("unknown integrator '{other}' (expected adaptive or leapfrog)")),
        }
    }
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Integrator::Adaptive => "adaptive",
            Integrator::Leapfrog => "leapfrog",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimConfig {
    pub a: f64,
    pub b: f64,
    pub w0: f64,
    pub integrator: Integrator,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Fixed step for leapfrog.
    pub step: f64,
    /// Smallest adaptive step before the run is declared a step failure.
    pub min_step: f64,
    pub t_end: f64,
    pub u_floor: f64,
    pub r_max: f64,
    pub sample_interval: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            a: 0.25,
            b: 1.0,
            w0: -1.0,
            integrator: Integrator::Adaptive,
            rel_tol: 1e-12,
            abs_tol: 1e-12,
            step: 1e-3,
            min_step: 1e-12,
            t_end: 100.0,
            u_floor: 1e-10,
            r_max: 1e3,
            sample_interval: 0.1,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let positive = [
            ("rel-tol", self.rel_tol),
            ("abs-tol", self.abs_tol),
            ("step", self.step),
            ("min-step", self.min_step),
            ("t-end", self.t_end),
            ("r-max", self.r_max),
            ("sample-interval", self.sample_interval),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DynamicsError::InvalidConfig(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(self.u_floor >= 0.0) {
            return Err(DynamicsError::InvalidConfig(format!("u-floor must be non-negative, got {}", self.u_floor)));
        }
        crate::catalog::check_domain(self.a, self.b)?;
        Ok(())
    }

    pub fn potential(&self) -> Result<SystemPotential, DynamicsError> {
        self.validate()?;
        SystemPotential::new(self.a, self.b, self.w0, self.u_floor)
    }
}

/// One sampled row: `t, x, y, z, px, py, pz, H, X1, X2, u, d_sing`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub q: [f64; 3],
    pub p: [f64; 3],
    pub h: f64,
    pub x1: f64,
    pub x2: f64,
    pub u: f64,
    pub d_sing: f64,
}

impl TrajectoryRow {
    pub fn values(&self) -> [f64; 12] {
        [
            self.t, self.q[0], self.q[1], self.q[2], self.p[0], self.p[1], self.p[2], self.h, self.x1,
            self.x2, self.u, self.d_sing,
        ]
    }

    pub fn from_values(v: [f64; 12]) -> TrajectoryRow {
        TrajectoryRow {
            t: v[0],
            q: [v[1], v[2], v[3]],
            p: [v[4], v[5], v[6]],
            h: v[7],
            x1: v[8],
            x2: v[9],
            u: v[10],
            d_sing: v[11],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub rows: Vec<TrajectoryRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Completed,
    SingularityApproach,
    Escape,
    StepFailure,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Completed => "completed",
            Classification::SingularityApproach => "singularity-approach",
            Classification::Escape => "escape",
            Classification::StepFailure => "step-failure",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunOutcome {
    pub classification: Classification,
    pub t_final: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// `(H, X1, X2)` at `t = 0`.
    pub initial: [f64; 3],
    /// Max of `|X(t) − X(0)| / max(|X(0)|, 1e-3)` for `H, X1, X2`.
    pub max_drift: [f64; 3],
    pub min_u: f64,
    pub min_dsing: f64,
    pub max_r: f64,
    pub message: Option<String>,
}

/// Drift normalization floor.
const DRIFT_FLOOR: f64 = 1e-3;

struct Monitor<'p> {
    pot: &'p SystemPotential,
    cfg: &'p SimConfig,
    record: bool,
    rows: Vec<TrajectoryRow>,
    initial: [f64; 3],
    max_drift: [f64; 3],
    min_u: f64,
    min_dsing: f64,
    max_r: f64,
}

impl Monitor<'_> {
    /// Updates running extrema; returns a stop classification if a limit
    /// was crossed.
    fn observe(&mut self, s: &PhaseState) -> Option<Classification> {
        let u = self.pot.u(s.q);
        self.min_u = self.min_u.min(u);
        self.min_dsing = self.min_dsing.min(self.pot.distance_to_singular_lines(s.q));
        let r = (s.q[0] * s.q[0] + s.q[1] * s.q[1] + s.q[2] * s.q[2]).sqrt();
        self.max_r = self.max_r.max(r);
        if !s.is_finite() {
            return Some(Classification::StepFailure);
        }
        if !(u > self.cfg.u_floor) {
            return Some(Classification::SingularityApproach);
        }
        if r > self.cfg.r_max {
            return Some(Classification::Escape);
        }
        if let Ok(vals) = self.pot.integrals(s.q, s.p) {
            for i in 0..3 {
                let d = (vals[i] - self.initial[i]).abs() / self.initial[i].abs().max(DRIFT_FLOOR);
                self.max_drift[i] = self.max_drift[i].max(d);
            }
        }
        None
    }

    fn row(&self, s: &PhaseState) -> TrajectoryRow {
        let u = self.pot.u(s.q);
        let vals = self.pot.integrals(s.q, s.p).unwrap_or([f64::NAN; 3]);
        TrajectoryRow {
            t: s.t,
            q: s.q,
            p: s.p,
            h: vals[0],
            x1: vals[1],
            x2: vals[2],
            u,
            d_sing: self.pot.distance_to_singular_lines(s.q),
        }
    }

    fn push(&mut self, s: &PhaseState) {
        if self.record && self.rows.last().is_none_or(|r| s.t > r.t) {
            let row = self.row(s);
            self.rows.push(row);
        }
    }
}

/// Compiles the potential for `cfg` and runs from `(q0, p0)` at `t = 0`.
pub fn simulate(cfg: &SimConfig, q0: [f64; 3], p0: [f64; 3]) -> Result<(Trajectory, RunOutcome), DynamicsError> {
    let pot = cfg.potential()?;
    simulate_with(&pot, cfg, q0, p0, true)
}

/// Runs with a precompiled potential. Rows are kept only if `record`.
///
/// Fails only if the initial state is not admissible; every later stop is
/// reported through the outcome.
pub fn simulate_with(
    pot: &SystemPotential,
    cfg: &SimConfig,
    q0: [f64; 3],
    p0: [f64; 3],
    record: bool,
) -> Result<(Trajectory, RunOutcome), DynamicsError> {
    cfg.validate()?;
    if !q0.iter().chain(p0.iter()).all(|v| v.is_finite()) {
        return Err(DynamicsError::InvalidConfig("initial state must be finite".into()));
    }
    let initial = pot.integrals(q0, p0)?;
    let start = PhaseState::new(0.0, q0, p0);
    let mut mon = Monitor {
        pot,
        cfg,
        record,
        rows: Vec::new(),
        initial,
        max_drift: [0.0; 3],
        min_u: f64::INFINITY,
        min_dsing: f64::INFINITY,
        max_r: 0.0,
    };
    mon.observe(&start);
    mon.push(&start);

    let n_samples = (cfg.t_end / cfg.sample_interval).ceil() as u64;
    let sample_time = |k: u64| (k as f64 * cfg.sample_interval).min(cfg.t_end);

    let mut state = start;
    let mut stop: Option<(Classification, Option<String>)> = None;
    let (mut accepted, mut rejected) = (0usize, 0usize);

    match cfg.integrator {
        Integrator::Adaptive => {
            let opts = AdaptiveOptions {
                rel_tol: cfg.rel_tol,
                abs_tol: cfg.abs_tol,
                min_step: cfg.min_step,
                max_step: cfg.sample_interval,
            };
            let mut rk = Dopri5::new(pot, opts, &state)?;
            'outer: for k in 1..=n_samples {
                let target = sample_time(k);
                while state.t < target {
                    let remaining = target - state.t;
                    match rk.step(&state, remaining) {
                        Ok(res) => {
                            state = res.state;
                            if res.h == remaining {
                                state.t = target;
                            }
                            if let Some(c) = mon.observe(&state) {
                                stop = Some((c, None));
                                break 'outer;
                            }
                        }
                        Err(e) => {
                            let class = match e {
                                DynamicsError::SingularPoint { .. } => Classification::SingularityApproach,
                                _ => Classification::StepFailure,
                            };
                            stop = Some((class, Some(e.to_string())));
                            break 'outer;
                        }
                    }
                }
                mon.push(&state);
            }
            accepted = rk.accepted;
            rejected = rk.rejected;
        }
        Integrator::Leapfrog => {
            let mut force = pot.force(state.q)?;
            let mut prev_t = 0.0;
            'outer: for k in 1..=n_samples {
                let target = sample_time(k);
                let span = target - prev_t;
                let n = (span / cfg.step).ceil().max(1.0) as u64;
                let h = span / n as f64;
                for i in 0..n {
                    match leapfrog_with_force(pot, &state, &force, h) {
                        Ok((s, f)) => {
                            state = s;
                            force = f;
                            if i + 1 == n {
                                state.t = target;
                            }
                            accepted += 1;
                            if let Some(c) = mon.observe(&state) {
                                stop = Some((c, None));
                                break 'outer;
                            }
                        }
                        Err(e) => {
                            let class = match e {
                                DynamicsError::SingularPoint { .. } => Classification::SingularityApproach,
                                _ => Classification::StepFailure,
                            };
                            stop = Some((class, Some(e.to_string())));
                            break 'outer;
                        }
                    }
                }
                prev_t = target;
                mon.push(&state);
            }
        }
    }
    // The stopping state is recorded even off the sample grid.
    if stop.is_some() && state.is_finite() && pot.checked_u(state.q).is_ok() {
        mon.push(&state);
    }
    let (classification, message) = stop.unwrap_or((Classification::Completed, None));
    let outcome = RunOutcome {
        classification,
        t_final: state.t,
        accepted_steps: accepted,
        rejected_steps: rejected,
        initial,
        max_drift: mon.max_drift,
        min_u: mon.min_u,
        min_dsing: mon.min_dsing,
        max_r: mon.max_r,
        message,
    };
    Ok((Trajectory { rows: mon.rows }, outcome))
}

/// One row of a singularity scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub idx: usize,
    pub q0: [f64; 3],
    pub p0: [f64; 3],
    pub energy: f64,
    pub min_u: f64,
    pub min_dsing: f64,
    pub classification: Classification,
}

/// Batch of runs for `w0 < 0`, assembled in input order.
///
/// Exploratory only: the table records how close each run came to the
/// singular lines and makes no claim about reachability.
pub fn scan_singularity(
    cfg: &SimConfig,
    ics: &[([f64; 3], [f64; 3])],
    exec: Execution,
) -> Result<Vec<ScanRow>, DynamicsError> {
    if !(cfg.w0 < 0.0) {
        return Err(DynamicsError::ScanDomain(cfg.w0));
    }
    let pot = cfg.potential()?;
    Ok(map_indexed(ics, exec, |idx, &(q0, p0)| {
        let energy = pot.energy(q0, p0).unwrap_or(f64::NEG_INFINITY);
        match simulate_with(&pot, cfg, q0, p0, false) {
            Ok((_, out)) => ScanRow {
                idx,
                q0,
                p0,
                energy,
                min_u: out.min_u,
                min_dsing: out.min_dsing,
                classification: out.classification,
            },
            Err(_) => ScanRow {
                idx,
                q0,
                p0,
                energy,
                min_u: pot.u(q0),
                min_dsing: pot.distance_to_singular_lines(q0),
                classification: Classification::SingularityApproach,
            },
        }
    }))
}
