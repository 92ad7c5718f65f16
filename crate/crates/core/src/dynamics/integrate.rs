//! Dormand–Prince 5(4) with PI step control, and velocity Verlet.

use super::system::ForceField;
use super::DynamicsError;

/// Time, position and momentum of a unit-mass particle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseState {
    pub t: f64,
    pub q: [f64; 3],
    pub p: [f64; 3],
}

impl PhaseState {
    pub fn new(t: f64, q: [f64; 3], p: [f64; 3]) -> PhaseState {
        PhaseState { t, q, p }
    }

    fn y(&self) -> [f64; 6] {
        [self.q[0], self.q[1], self.q[2], self.p[0], self.p[1], self.p[2]]
    }

    fn from_y(t: f64, y: [f64; 6]) -> PhaseState {
        PhaseState {
            t,
            q: [y[0], y[1], y[2]],
            p: [y[3], y[4], y[5]],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.q.iter().chain(self.p.iter()).all(|v| v.is_finite())
    }
}

fn rhs<F: ForceField + ?Sized>(force: &F, y: &[f64; 6]) -> Result<[f64; 6], DynamicsError> {
    let f = force.force([y[0], y[1], y[2]])?;
    Ok([y[3], y[4], y[5], f[0], f[1], f[2]])
}

fn axpy(y: &[f64; 6], h: f64, terms: &[(f64, &[f64; 6])]) -> [f64; 6] {
    std::array::from_fn(|i| {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        y[i] + h * acc
    })
}

// Dormand–Prince tableau; the nodes c_i are not needed for autonomous systems.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One Dormand–Prince trial step: new state vector, derivative at the new
/// state (first stage of the next step), and the embedded error vector.
fn dopri_trial<F: ForceField + ?Sized>(
    force: &F,
    y: &[f64; 6],
    k1: &[f64; 6],
    h: f64,
) -> Result<([f64; 6], [f64; 6], [f64; 6]), DynamicsError> {
    let k2 = rhs(force, &axpy(y, h, &[(A21, k1)]))?;
    let k3 = rhs(force, &axpy(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = rhs(force, &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = rhs(force, &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
    let k6 = rhs(
        force,
        &axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    )?;
    let y_new = axpy(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let k7 = rhs(force, &y_new)?;
    let err = std::array::from_fn(|i| {
        h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
    });
    Ok((y_new, k7, err))
}

/// Single fixed-size Dormand–Prince step; returns the new state and the
/// max-norm of the embedded error estimate.
pub fn dopri5_fixed_step<F: ForceField + ?Sized>(
    force: &F,
    state: &PhaseState,
    h: f64,
) -> Result<(PhaseState, f64), DynamicsError> {
    let y = state.y();
    let k1 = rhs(force, &y)?;
    let (y_new, _, err) = dopri_trial(force, &y, &k1, h)?;
    let e = err.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok((PhaseState::from_y(state.t + h, y_new), e))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptiveOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub min_step: f64,
    pub max_step: f64,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions {
            rel_tol: 1e-12,
            abs_tol: 1e-12,
            min_step: 1e-12,
            max_step: f64::INFINITY,
        }
    }
}

/// An accepted adaptive step.
#[derive(Clone, Copy, Debug)]
pub struct StepResult {
    pub state: PhaseState,
    pub h: f64,
    /// Scaled error norm of the accepted step (at most 1).
    pub error: f64,
}

/// Adaptive Dormand–Prince integrator state (FSAL derivative and PI
/// controller memory).
pub struct Dopri5<'f, F: ForceField + ?Sized> {
    force: &'f F,
    opts: AdaptiveOptions,
    h: f64,
    err_old: f64,
    k1: [f64; 6],
    pub accepted: usize,
    pub rejected: usize,
}

fn scaled_norm(v: &[f64; 6], y0: &[f64; 6], y1: &[f64; 6], opts: &AdaptiveOptions) -> f64 {
    let mut acc = 0.0;
    for i in 0..6 {
        let sk = opts.abs_tol + opts.rel_tol * y0[i].abs().max(y1[i].abs());
        let r = v[i] / sk;
        acc += r * r;
    }
    (acc / 6.0).sqrt()
}

impl<'f, F: ForceField + ?Sized> Dopri5<'f, F> {
    pub fn new(force: &'f F, opts: AdaptiveOptions, state: &PhaseState) -> Result<Self, DynamicsError> {
        let y = state.y();
        let k1 = rhs(force, &y)?;
        // Starting step from the usual derivative-based estimate.
        let d0 = scaled_norm(&y, &y, &y, &opts);
        let d1 = scaled_norm(&k1, &y, &y, &opts);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1 = axpy(&y, h0, &[(1.0, &k1)]);
        let d2 = match rhs(force, &y1) {
            Ok(k) => {
                let diff = std::array::from_fn(|i| k[i] - k1[i]);
                scaled_norm(&diff, &y, &y, &opts) / h0
            }
            Err(_) => f64::INFINITY,
        };
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        let h = (100.0 * h0).min(h1).min(opts.max_step).max(opts.min_step);
        Ok(Dopri5 {
            force,
            opts,
            h,
            err_old: 1e-4,
            k1,
            accepted: 0,
            rejected: 0,
        })
    }

    /// Step size the controller will try next.
    pub fn next_step(&self) -> f64 {
        self.h
    }

    /// Advances `state` by one accepted step of length at most `h_max`.
    pub fn step(&mut self, state: &PhaseState, h_max: f64) -> Result<StepResult, DynamicsError> {
        let y = state.y();
        let mut h = self.h.min(h_max).min(self.opts.max_step);
        let clipped = h < self.h;
        let mut was_rejected = false;
        loop {
            if h < self.opts.min_step && h < h_max {
                return Err(DynamicsError::StepFailure { t: state.t, h });
            }
            match dopri_trial(self.force, &y, &self.k1, h) {
                Err(DynamicsError::SingularPoint { .. }) if h * 0.25 >= self.opts.min_step => {
                    // A stage left the admissible region; retry smaller.
                    self.rejected += 1;
                    was_rejected = true;
                    h *= 0.25;
                }
                Err(e) => return Err(e),
                Ok((y_new, k7, err)) => {
                    let en = scaled_norm(&err, &y, &y_new, &self.opts);
                    if en.is_finite() && en <= 1.0 {
                        let mut fac = 0.9 * en.max(1e-10).powf(-0.7 / 5.0) * self.err_old.powf(0.4 / 5.0);
                        fac = fac.clamp(0.2, 10.0);
                        if was_rejected {
                            fac = fac.min(1.0);
                        }
                        let proposal = h * fac;
                        self.h = if clipped && !was_rejected { self.h.max(proposal) } else { proposal };
                        self.err_old = en.max(1e-4);
                        self.k1 = k7;
                        self.accepted += 1;
                        return Ok(StepResult {
                            state: PhaseState::from_y(state.t + h, y_new),
                            h,
                            error: en,
                        });
                    }
                    self.rejected += 1;
                    was_rejected = true;
                    let fac = if en.is_finite() { (0.9 * en.powf(-0.2)).max(0.2) } else { 0.2 };
                    h *= fac;
                }
            }
        }
    }
}

/// One kick-drift-kick step.
pub fn step_leapfrog<F: ForceField + ?Sized>(
    force: &F,
    state: &PhaseState,
    h: f64,
) -> Result<PhaseState, DynamicsError> {
    let f0 = force.force(state.q)?;
    leapfrog_with_force(force, state, &f0, h).map(|(s, _)| s)
}

/// Leapfrog step reusing the force at the current position; also returns
/// the force at the new position.
pub fn leapfrog_with_force<F: ForceField + ?Sized>(
    force: &F,
    state: &PhaseState,
    f0: &[f64; 3],
    h: f64,
) -> Result<(PhaseState, [f64; 3]), DynamicsError> {
    let half: [f64; 3] = std::array::from_fn(|i| state.p[i] + 0.5 * h * f0[i]);
    let q: [f64; 3] = std::array::from_fn(|i| state.q[i] + h * half[i]);
    let f1 = force.force(q)?;
    let p = std::array::from_fn(|i| half[i] + 0.5 * h * f1[i]);
    Ok((PhaseState::new(state.t + h, q, p), f1))
}
