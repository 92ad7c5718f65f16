//! Numerical integration of Hamilton's equations with conservation and
//! singularity monitoring.
//!
//! Evaluators are compiled from the exact catalog polynomials after
//! substituting the parameters exactly, so the numeric integrals are the
//! same expressions whose brackets the verifier proves zero.

mod csvio;
mod integrate;
mod simulate;
mod system;

pub use csvio::{format_f64, read_trajectory, write_scan_table, write_trajectory, SCAN_HEADER, TRAJECTORY_HEADER};
pub use integrate::{
    dopri5_fixed_step, leapfrog_with_force, step_leapfrog, AdaptiveOptions, Dopri5, PhaseState, StepResult,
};
pub use simulate::{
    scan_singularity, simulate, simulate_with, Classification, Integrator, RunOutcome, ScanRow, SimConfig,
    Trajectory, TrajectoryRow,
};
pub use system::{distance_to_singular_lines, CompiledPoly, ForceField, FreeParticle, IsotropicOscillator, SystemPotential};

use crate::algebra::AlgebraError;
use crate::catalog::CatalogError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("singular point: u = {u:e} at q = {q:?} is at or below the floor")]
    SingularPoint { q: [f64; 3], u: f64 },
    #[error("step size {h:e} fell below the floor at t = {t}")]
    StepFailure { t: f64, h: f64 },
    #[error("singularity scans require w0 < 0 (got w0 = {0})")]
    ScanDomain(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Domain(#[from] CatalogError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Parameters of the bounded runs: `a = 1/4`, `b = 1`, `w0 = −1`.
pub const BOUNDED_PARAMS: (f64, f64, f64) = (0.25, 1.0, -1.0);

/// Three negative-energy initial conditions `(q0, p0)` at
/// [`BOUNDED_PARAMS`], mirrored in `configs/`. They were picked from a
/// random scan for staying comparatively far from the singular lines.
pub const BOUNDED_INITIAL_CONDITIONS: [([f64; 3], [f64; 3]); 3] = [
    ([0.6787, -0.3774, 0.8647], [-0.4643, -0.3638, 0.0770]),
    ([0.0706, 0.4235, -0.0513], [0.3539, 0.3007, 0.1024]),
    ([1.4184, 0.0433, 0.2487], [-0.4884, -0.0269, 0.1008]),
];
