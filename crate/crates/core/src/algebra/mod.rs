//! Exact sparse polynomial arithmetic over the rationals, exact linear
//! algebra, and Gaussian-rational polynomials.

mod gauss;
mod linalg;
mod monomial;
mod poly;
mod rational;

pub use gauss::{gauss_poly_expand, split_re_im, to_gauss, GaussPoly, GaussRational};
pub use linalg::{nullspace_exact, RatMatrix, SparseRow, SparseSystem};
pub use monomial::{Monomial, Var, VarSet, NVARS};
pub use poly::{build, Assignment, CompensatedSum, Poly, Polynomial};
pub use rational::{from_f64, int, parse_rational, rat, rational_sqrt, to_f64, Coeff, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("variable {0} has no assigned value")]
    Unassigned(Var),
    #[error("cannot parse '{0}' as a rational")]
    Parse(String),
    #[error("non-finite value {0} has no rational representation")]
    NonFinite(f64),
    #[error("factor is not linear in the coordinates")]
    NotLinear,
}
