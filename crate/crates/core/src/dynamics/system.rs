//! Binary64 evaluators compiled from the exact catalog polynomials.

use crate::algebra::{from_f64, CompensatedSum, Polynomial, Rational, Var};
use crate::catalog::{
    check_domain, invariant_u, leading_parts, scalar_numerators, singular_lines, AngularConvention,
    SingularLine,
};

use super::DynamicsError;

/// Phase-space variable order used by compiled polynomials.
const PHASE: [Var; 6] = [Var::X, Var::Y, Var::Z, Var::Px, Var::Py, Var::Pz];

/// A polynomial in `(x, y, z, px, py, pz)` with binary64 coefficients,
/// evaluated with compensated summation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, [u8; 6])>,
    max_exp: [u8; 6],
}

impl CompiledPoly {
    /// Panics if `p` still involves `a`, `b` or `w0`; substitute them first.
    pub fn new(p: &Polynomial) -> CompiledPoly {
        let mut terms = Vec::with_capacity(p.len());
        let mut max_exp = [0u8; 6];
        for (m, c) in p.terms() {
            for v in [Var::A, Var::B, Var::W0] {
                assert_eq!(m.exp(v), 0, "parameter {v} not substituted");
            }
            let e: [u8; 6] = std::array::from_fn(|i| m.exp(PHASE[i]));
            for i in 0..6 {
                max_exp[i] = max_exp[i].max(e[i]);
            }
            terms.push((crate::algebra::to_f64(c), e));
        }
        CompiledPoly { terms, max_exp }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, q: [f64; 3], p: [f64; 3]) -> f64 {
        let vals = [q[0], q[1], q[2], p[0], p[1], p[2]];
        // powers[i][k] = vals[i]^k
        let mut powers = [[1.0f64; 9]; 6];
        for i in 0..6 {
            for k in 1..=self.max_exp[i] as usize {
                powers[i][k] = powers[i][k - 1] * vals[i];
            }
        }
        let mut sum = CompensatedSum::default();
        for (c, e) in &self.terms {
            let mut t = *c;
            for i in 0..6 {
                if e[i] != 0 {
                    t *= powers[i][e[i] as usize];
                }
            }
            sum.add(t);
        }
        sum.value()
    }
}

/// Specializes the parameters exactly, then compiles.
fn specialize(p: &Polynomial, a: &Rational, b: &Rational, w0: &Rational) -> CompiledPoly {
    CompiledPoly::new(&p.substitute(Var::A, a).substitute(Var::B, b).substitute(Var::W0, w0))
}

/// Source of the force `−∇V` for the integrators.
pub trait ForceField: Sync {
    fn potential(&self, q: [f64; 3]) -> Result<f64, DynamicsError>;
    fn force(&self, q: [f64; 3]) -> Result<[f64; 3], DynamicsError>;

    fn energy(&self, q: [f64; 3], p: [f64; 3]) -> Result<f64, DynamicsError> {
        Ok(0.5 * (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) + self.potential(q)?)
    }
}

/// `V = 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FreeParticle;

impl ForceField for FreeParticle {
    fn potential(&self, _q: [f64; 3]) -> Result<f64, DynamicsError> {
        Ok(0.0)
    }

    fn force(&self, _q: [f64; 3]) -> Result<[f64; 3], DynamicsError> {
        Ok([0.0; 3])
    }
}

/// `V = ½ω²|q|²`.
#[derive(Clone, Copy, Debug)]
pub struct IsotropicOscillator {
    pub omega: f64,
}

impl ForceField for IsotropicOscillator {
    fn potential(&self, q: [f64; 3]) -> Result<f64, DynamicsError> {
        Ok(0.5 * self.omega * self.omega * (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]))
    }

    fn force(&self, q: [f64; 3]) -> Result<[f64; 3], DynamicsError> {
        let w2 = self.omega * self.omega;
        Ok(q.map(|x| -w2 * x))
    }
}

/// The system at fixed `(a, b, w0)`: potential, force, integrals and
/// singular lines.
#[derive(Clone, Debug)]
pub struct SystemPotential {
    pub a: f64,
    pub b: f64,
    pub w0: f64,
    pub u_floor: f64,
    u: CompiledPoly,
    du: [CompiledPoly; 3],
    lead1: CompiledPoly,
    lead2: CompiledPoly,
    q1: CompiledPoly,
    q2: CompiledPoly,
    lines: [SingularLine; 2],
}

impl SystemPotential {
    /// Compiles the evaluators. Parameters are converted to rationals
    /// exactly before substitution.
    pub fn new(a: f64, b: f64, w0: f64, u_floor: f64) -> Result<SystemPotential, DynamicsError> {
        check_domain(a, b)?;
        if !w0.is_finite() {
            return Err(DynamicsError::InvalidConfig(format!("w0 = {w0} is not finite")));
        }
        let (ar, br, wr) = (from_f64(a)?, from_f64(b)?, from_f64(w0)?);
        let u = invariant_u();
        let du = [Var::X, Var::Y, Var::Z].map(|v| specialize(&u.partial(v), &ar, &br, &wr));
        let (l1, l2) = leading_parts(AngularConvention::Standard);
        let (q1, q2) = scalar_numerators();
        Ok(SystemPotential {
            a,
            b,
            w0,
            u_floor,
            u: specialize(&u, &ar, &br, &wr),
            du,
            lead1: specialize(&l1, &ar, &br, &wr),
            lead2: specialize(&l2, &ar, &br, &wr),
            q1: specialize(&q1, &ar, &br, &wr),
            q2: specialize(&q2, &ar, &br, &wr),
            lines: singular_lines(a, b)?,
        })
    }

    pub fn u(&self, q: [f64; 3]) -> f64 {
        self.u.eval(q, [0.0; 3])
    }

    pub fn grad_u(&self, q: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| self.du[i].eval(q, [0.0; 3]))
    }

    /// `u(q)`, or `SingularPoint` when it is at or below the floor.
    pub fn checked_u(&self, q: [f64; 3]) -> Result<f64, DynamicsError> {
        let u = self.u(q);
        if u > self.u_floor && u.is_finite() {
            Ok(u)
        } else {
            Err(DynamicsError::SingularPoint { q, u })
        }
    }

    /// `(H, X1, X2)` at a phase point.
    pub fn integrals(&self, q: [f64; 3], p: [f64; 3]) -> Result<[f64; 3], DynamicsError> {
        let u = self.checked_u(q)?;
        let s = 1.0 / u.sqrt();
        let t = 0.5 * (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        Ok([
            t + self.w0 * s,
            self.lead1.eval(q, p) + self.q1.eval(q, p) * s,
            self.lead2.eval(q, p) + self.q2.eval(q, p) * s,
        ])
    }

    pub fn singular_lines(&self) -> &[SingularLine; 2] {
        &self.lines
    }

    pub fn distance_to_singular_lines(&self, q: [f64; 3]) -> f64 {
        self.lines[0].distance(q).min(self.lines[1].distance(q))
    }
}

impl ForceField for SystemPotential {
    fn potential(&self, q: [f64; 3]) -> Result<f64, DynamicsError> {
        Ok(self.w0 / self.checked_u(q)?.sqrt())
    }

    /// `−∇V = (w0/2)·u^(−3/2)·∇u`.
    fn force(&self, q: [f64; 3]) -> Result<[f64; 3], DynamicsError> {
        let u = self.checked_u(q)?;
        let k = 0.5 * self.w0 / (u * u.sqrt());
        let g = self.grad_u(q);
        Ok(g.map(|gi| k * gi))
    }
}

/// Minimum distance from `q` to the two singular lines at `(a, b)`.
pub fn distance_to_singular_lines(q: [f64; 3], a: f64, b: f64) -> Result<f64, DynamicsError> {
    let [l1, l2] = singular_lines(a, b)?;
    Ok(l1.distance(q).min(l2.distance(q)))
}
