//! Exact verification kernel and numerical dynamics harness for a
//! quadratically integrable, non-separable natural Hamiltonian on
//! three-dimensional Euclidean space.
//!
//! The potential is `V = w0 / sqrt(u)` for a fixed quartic `u(x, y, z; a, b)`;
//! the two extra integrals are quadratic in the momenta. [`verifier`] proves
//! the algebraic identities exactly with `a`, `b`, `w0` symbolic, and
//! [`dynamics`] integrates trajectories while monitoring the conserved
//! quantities.

pub mod algebra;
pub mod catalog;
pub mod dynamics;
pub mod exec;
pub mod radical;
pub mod verifier;

pub use catalog::SystemContext;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
