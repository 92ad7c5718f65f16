//! The ring `Q[vars, s] / (s²·u − 1)` localized at `u`.
//!
//! Elements are stored as `(A + B·s) / u^m` with `s = u^(-1/2)`. The
//! representation is not unique; `(A, B, m)` and `(A·u, B·u, m + 1)` denote
//! the same element. Because `u` is squarefree and not a square, `A + B·s`
//! vanishes only when both `A` and `B` do, so the zero test never needs to
//! divide by `u`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{rat, Assignment, Polynomial, Rational, Var, VarSet, NVARS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RadicalError {
    #[error("operands belong to different ring contexts")]
    ContextMismatch,
    #[error("u = {0:e} is not positive at the evaluation point")]
    SingularPoint(f64),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}

/// Holds the fixed radicand `u` and its cached partial derivatives.
#[derive(Debug)]
pub struct RingContext {
    u: Polynomial,
    du: [Polynomial; NVARS],
}

impl RingContext {
    /// Panics if `u` involves a momentum variable.
    pub fn new(u: Polynomial) -> Arc<RingContext> {
        assert!(u.is_free_of(VarSet::momenta()), "radicand must be momentum-free");
        let du = std::array::from_fn(|i| u.partial(Var::ALL[i]));
        Arc::new(RingContext { u, du })
    }

    pub fn u(&self) -> &Polynomial {
        &self.u
    }

    pub fn du(&self, v: Var) -> &Polynomial {
        &self.du[v.index()]
    }
}

/// `(A + B·s) / u^m`.
#[derive(Clone)]
pub struct RadicalElement {
    ring: Arc<RingContext>,
    a: Polynomial,
    b: Polynomial,
    m: u32,
}

/// A phase-space function; shares the radical-ring representation.
pub type Observable = RadicalElement;

impl RadicalElement {
    pub fn new(ring: &Arc<RingContext>, a: Polynomial, b: Polynomial, m: u32) -> Self {
        RadicalElement {
            ring: Arc::clone(ring),
            a,
            b,
            m,
        }
    }

    pub fn from_poly(ring: &Arc<RingContext>, p: Polynomial) -> Self {
        Self::new(ring, p, Polynomial::zero(), 0)
    }

    /// `s = u^(-1/2)`.
    pub fn s(ring: &Arc<RingContext>) -> Self {
        Self::new(ring, Polynomial::zero(), Polynomial::one(), 0)
    }

    pub fn zero(ring: &Arc<RingContext>) -> Self {
        Self::from_poly(ring, Polynomial::zero())
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn rational_part(&self) -> &Polynomial {
        &self.a
    }

    pub fn radical_part(&self) -> &Polynomial {
        &self.b
    }

    pub fn denominator_power(&self) -> u32 {
        self.m
    }

    /// Parts `(A, B, m)`.
    pub fn parts(&self) -> (&Polynomial, &Polynomial, u32) {
        (&self.a, &self.b, self.m)
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring)
    }

    fn check(&self, other: &Self) -> Result<(), RadicalError> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(RadicalError::ContextMismatch)
        }
    }

    /// Multiplies numerator parts by `u^k`.
    fn lift(&self, k: u32) -> (Polynomial, Polynomial) {
        if k == 0 {
            return (self.a.clone(), self.b.clone());
        }
        let uk = self.ring.u.pow(k);
        (&self.a * &uk, &self.b * &uk)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RadicalError> {
        self.check(other)?;
        let m = self.m.max(other.m);
        let (a1, b1) = self.lift(m - self.m);
        let (a2, b2) = other.lift(m - other.m);
        Ok(RadicalElement {
            ring: Arc::clone(&self.ring),
            a: a1 + a2,
            b: b1 + b2,
            m,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RadicalError> {
        self.checked_add(&other.neg_ref())
    }

    /// `(A1 + B1 s)(A2 + B2 s) = (A1A2·u + B1B2 + (A1B2 + A2B1)·u·s) / u`.
    ///
    /// When one factor has no radical part the extra power of `u` is not
    /// introduced.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, RadicalError> {
        self.check(other)?;
        let ring = Arc::clone(&self.ring);
        if self.b.is_zero() || other.b.is_zero() {
            let a = &self.a * &other.a;
            let b = &(&self.a * &other.b) + &(&self.b * &other.a);
            return Ok(RadicalElement {
                ring,
                a,
                b,
                m: self.m + other.m,
            });
        }
        let u = &self.ring.u;
        let a = &(&(&self.a * &other.a) * u) + &(&self.b * &other.b);
        let b = &(&(&self.a * &other.b) + &(&self.b * &other.a)) * u;
        Ok(RadicalElement {
            ring,
            a,
            b,
            m: self.m + other.m + 1,
        })
    }

    pub fn neg_ref(&self) -> Self {
        RadicalElement {
            ring: Arc::clone(&self.ring),
            a: -&self.a,
            b: -&self.b,
            m: self.m,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RadicalElement {
            ring: Arc::clone(&self.ring),
            a: self.a.scale(c),
            b: self.b.scale(c),
            m: self.m,
        }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        RadicalElement {
            ring: Arc::clone(&self.ring),
            a: &self.a * p,
            b: &self.b * p,
            m: self.m,
        }
    }

    /// Partial derivative, using `∂s = -½·(∂u)·s/u`.
    pub fn partial(&self, v: Var) -> Self {
        let du = self.ring.du(v);
        if du.is_zero() {
            return RadicalElement {
                ring: Arc::clone(&self.ring),
                a: self.a.partial(v),
                b: self.b.partial(v),
                m: self.m,
            };
        }
        let u = &self.ring.u;
        let m = Rational::from_integer(self.m.into());
        let half_odd = rat(2 * self.m as i64 + 1, 2);
        let a = &(&self.a.partial(v) * u) - &(&self.a * du).scale(&m);
        let b = &(&self.b.partial(v) * u) - &(&self.b * du).scale(&half_odd);
        RadicalElement {
            ring: Arc::clone(&self.ring),
            a,
            b,
            m: self.m + 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Value equality (as elements of the ring), not structural equality.
    pub fn value_eq(&self, other: &Self) -> Result<bool, RadicalError> {
        Ok(self.checked_sub(other)?.is_zero())
    }

    /// Cancels common powers of `u` where exact division allows.
    pub fn normalize(&self) -> Self {
        let mut out = self.clone();
        while out.m > 0 {
            let u = &out.ring.u;
            let Some(a) = out.a.div_exact(u) else { break };
            let Some(b) = out.b.div_exact(u) else { break };
            out.a = a;
            out.b = b;
            out.m -= 1;
        }
        out
    }

    /// Total number of stored terms, a size measure.
    pub fn term_count(&self) -> usize {
        self.a.len() + self.b.len()
    }

    /// `true` when neither part involves a variable of `set`.
    pub fn is_free_of(&self, set: VarSet) -> bool {
        self.a.is_free_of(set) && self.b.is_free_of(set)
    }

    /// Substitutes constants for some variables in both parts and in `u`,
    /// producing an element of a new (specialized) ring.
    pub fn specialize(&self, ring: &Arc<RingContext>, values: &[(Var, Rational)]) -> Self {
        let sub = |p: &Polynomial| {
            values
                .iter()
                .fold(p.clone(), |acc, (v, c)| acc.substitute(*v, c))
        };
        RadicalElement::new(ring, sub(&self.a), sub(&self.b), self.m)
    }

    /// `(A + B·u^(-1/2)) / u^m` in binary64.
    pub fn eval_f64(&self, point: &Assignment<f64>) -> Result<f64, RadicalError> {
        let u = self.ring.u.eval_f64(point)?;
        if !(u > 1e-300) {
            return Err(RadicalError::SingularPoint(u));
        }
        let a = self.a.eval_f64(point)?;
        let b = if self.b.is_zero() {
            0.0
        } else {
            self.b.eval_f64(point)?
        };
        Ok((a + b / u.sqrt()) / u.powi(self.m as i32))
    }
}

impl fmt::Debug for RadicalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[({}) + ({})*s] / u^{}", self.a, self.b, self.m)
    }
}

impl fmt::Display for RadicalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

// Operator forms panic on context mismatch; use the `checked_*` methods
// where operands may come from different contexts.
impl Add for &RadicalElement {
    type Output = RadicalElement;
    fn add(self, rhs: &RadicalElement) -> RadicalElement {
        self.checked_add(rhs).expect("ring context mismatch")
    }
}

impl Sub for &RadicalElement {
    type Output = RadicalElement;
    fn sub(self, rhs: &RadicalElement) -> RadicalElement {
        self.checked_sub(rhs).expect("ring context mismatch")
    }
}

impl Mul for &RadicalElement {
    type Output = RadicalElement;
    fn mul(self, rhs: &RadicalElement) -> RadicalElement {
        self.checked_mul(rhs).expect("ring context mismatch")
    }
}

impl Neg for &RadicalElement {
    type Output = RadicalElement;
    fn neg(self) -> RadicalElement {
        self.neg_ref()
    }
}

/// Half-integer power series `Σ c_k · t^(k/2)` in a single abstract
/// variable `t`, used to check univariate reductions such as
/// `2t·v'' + 3v' = 0`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct HalfPowers {
    // doubled exponent -> coefficient
    terms: std::collections::BTreeMap<i64, Rational>,
}

impl HalfPowers {
    /// `c · t^(num/2)`.
    pub fn monomial(c: Rational, doubled_exp: i64) -> Self {
        let mut h = HalfPowers::default();
        h.add_term(doubled_exp, c);
        h
    }

    fn add_term(&mut self, e: i64, c: Rational) {
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn derivative(&self) -> Self {
        let mut out = HalfPowers::default();
        for (&e, c) in &self.terms {
            if e != 0 {
                out.add_term(e - 2, c * rat(e, 2));
            }
        }
        out
    }

    /// Multiplies by `c · t^(doubled_exp/2)`.
    pub fn mul_monomial(&self, c: &Rational, doubled_exp: i64) -> Self {
        let mut out = HalfPowers::default();
        for (&e, k) in &self.terms {
            out.add_term(e + doubled_exp, k * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

/// Residual `2t·v'' + 3v'` of the univariate reduction.
pub fn ode_residual(v: &HalfPowers) -> HalfPowers {
    let d1 = v.derivative();
    let d2 = d1.derivative();
    d2.mul_monomial(&rat(2, 1), 2)
        .add(&d1.mul_monomial(&Rational::from_integer(3.into()), 0))
}
