//! Symbolic verification of the integrability identities.
//!
//! Each check family produces one or more [`CheckResult`]s. Families are
//! independent, so [`run_report`] evaluates them through
//! [`crate::exec::map_indexed`] and reassembles them in a fixed order.

mod bracket;
mod checks;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use bracket::{poisson_bracket, poly_bracket};
pub use checks::*;

use crate::algebra::{rat, Rational};
use crate::catalog::SystemContext;
use crate::exec::{map_indexed, Execution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub residual_summary: String,
    pub elapsed_ms: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckFamily {
    Involution,
    MSystem,
    InvariantCoordinate,
    OdeReduction,
    RankR,
    FunctionalIndependence,
    KillingCommutator,
    FirstOrderScan,
    Factorization,
    ScalarAnsatz,
}

impl CheckFamily {
    pub const ALL: [CheckFamily; 10] = [
        CheckFamily::Involution,
        CheckFamily::MSystem,
        CheckFamily::InvariantCoordinate,
        CheckFamily::OdeReduction,
        CheckFamily::RankR,
        CheckFamily::FunctionalIndependence,
        CheckFamily::KillingCommutator,
        CheckFamily::FirstOrderScan,
        CheckFamily::Factorization,
        CheckFamily::ScalarAnsatz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckFamily::Involution => "involution",
            CheckFamily::MSystem => "m-system",
            CheckFamily::InvariantCoordinate => "invariant-coordinate",
            CheckFamily::OdeReduction => "ode-reduction",
            CheckFamily::RankR => "rank-r",
            CheckFamily::FunctionalIndependence => "functional-independence",
            CheckFamily::KillingCommutator => "killing-commutator",
            CheckFamily::FirstOrderScan => "first-order-scan",
            CheckFamily::Factorization => "factorization",
            CheckFamily::ScalarAnsatz => "scalar-ansatz",
        }
    }
}

impl fmt::Display for CheckFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        CheckFamily::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| {
                let names: Vec<_> = CheckFamily::ALL.iter().map(|f| f.name()).collect();
                format!("unknown check family '{s}' (expected one of: {})", names.join(", "))
            })
    }
}

/// Runs one family against `ctx`.
pub fn run_family(ctx: &SystemContext, family: CheckFamily) -> Vec<CheckResult> {
    match family {
        CheckFamily::Involution => verify_involution(ctx),
        CheckFamily::MSystem => verify_m_system(ctx),
        CheckFamily::InvariantCoordinate => verify_invariant_coordinate(ctx),
        CheckFamily::OdeReduction => vec![verify_ode_reduction()],
        CheckFamily::RankR => vec![verify_rank_r(ctx)],
        CheckFamily::FunctionalIndependence => vec![verify_functional_independence(ctx)],
        CheckFamily::KillingCommutator => vec![verify_killing_commutator(ctx)],
        CheckFamily::FirstOrderScan => vec![first_order_integral_scan(ctx, &default_scan_params())],
        CheckFamily::Factorization => {
            let a: Rational = rat(9, 25);
            match verify_factorization(ctx, &a) {
                Ok(r) => vec![r],
                Err(e) => vec![timed("factorization", || (false, e.to_string()))],
            }
        }
        CheckFamily::ScalarAnsatz => match solve_scalar_ansatz(ctx) {
            Ok(sol) => vec![sol.check],
            Err(e) => vec![timed("scalar-ansatz", || (false, e.to_string()))],
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub version: String,
    pub fingerprint: String,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    /// One line per check: status, name, elapsed time, summary.
    pub fn render_text(&self) -> String {
        let mut out = format!("quadint {} catalog {}\n", self.version, &self.fingerprint[..16.min(self.fingerprint.len())]);
        for c in &self.checks {
            out.push_str(&format!(
                "{:<4} {:<40} {:>10.1} ms  {}\n",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.elapsed_ms,
                c.residual_summary
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}

/// Runs the requested families (all if empty) in canonical order.
pub fn run_report(ctx: &SystemContext, families: &[CheckFamily], exec: Execution) -> VerificationReport {
    let mut fams: Vec<CheckFamily> = if families.is_empty() {
        CheckFamily::ALL.to_vec()
    } else {
        families.to_vec()
    };
    fams.sort();
    fams.dedup();
    let checks = map_indexed(&fams, exec, |_, &f| run_family(ctx, f))
        .into_iter()
        .flatten()
        .collect();
    VerificationReport {
        version: crate::VERSION.to_string(),
        fingerprint: ctx.fingerprint(),
        checks,
    }
}
