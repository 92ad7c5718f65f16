//! Closed-form objects of the integrable system, transcribed once.
//!
//! Everything here is built with `a`, `b`, `w0` as ordinary polynomial
//! variables, so every identity checked downstream is generic in the
//! parameters. Domain restrictions (`0 < a <= 1/2`, `b != 0`) are enforced
//! only at numeric entry points.

use std::sync::Arc;

use num_traits::{One, Zero};
use sha2::{Digest, Sha256};

use crate::algebra::build::{c, v};
use crate::algebra::{
    rational_sqrt, Monomial, Polynomial, Rational, Var, VarSet,
};
use crate::radical::{Observable, RadicalElement, RingContext};

/// Which definition of `l_y` the catalog uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AngularConvention {
    /// `l_y = z·px − x·pz`, the right-handed component of `x × p`.
    Standard,
    /// `l_y = z·py − x·pz`, kept only to reproduce a known misprint.
    Misprint,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("parameters outside the domain 0 < a <= 1/2, b != 0 (a = {a}, b = {b})")]
    ParamDomain { a: f64, b: f64 },
    #[error("a = {0} is not Pythagorean: sqrt(a) and sqrt(1 - a) must both be rational")]
    ParamNotPythagorean(String),
    #[error("observable is not quadratic in the momenta")]
    NonQuadratic,
}

/// The two independent characteristic ratios `∂xV/∂zV = N1/D1`,
/// `∂yV/∂zV = N2/D2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Characteristics {
    pub n1: Polynomial,
    pub d1: Polynomial,
    pub n2: Polynomial,
    pub d2: Polynomial,
}

/// All closed-form data of the system.
#[derive(Clone, Debug)]
pub struct SystemContext {
    pub convention: AngularConvention,
    pub ring: Arc<RingContext>,
    pub u: Polynomial,
    pub kinetic: Polynomial,
    pub v: RadicalElement,
    pub lead1: Polynomial,
    pub lead2: Polynomial,
    pub m1: RadicalElement,
    pub m2: RadicalElement,
    pub h: Observable,
    pub x1: Observable,
    pub x2: Observable,
    pub characteristics: Characteristics,
}

/// `x`, `y`, `z`, `px`, `py`, `pz`, `a`, `b`, `w0` as polynomials.
struct Vars {
    x: Polynomial,
    y: Polynomial,
    z: Polynomial,
    px: Polynomial,
    py: Polynomial,
    pz: Polynomial,
    a: Polynomial,
    b: Polynomial,
    w0: Polynomial,
}

fn vars() -> Vars {
    Vars {
        x: v(Var::X),
        y: v(Var::Y),
        z: v(Var::Z),
        px: v(Var::Px),
        py: v(Var::Py),
        pz: v(Var::Pz),
        a: v(Var::A),
        b: v(Var::B),
        w0: v(Var::W0),
    }
}

/// Product of polynomial references.
fn prod(factors: &[&Polynomial]) -> Polynomial {
    factors.iter().fold(Polynomial::one(), |acc, f| &acc * *f)
}

/// The invariant coordinate
/// `u = (a−1)²x⁴ + (az²+y²)² + 2(1−a)x²(y²−az²)
///      + 6ab(a−1)(3((x²−z²)a − x² + y²)b − 4xyz) + 81a²(1−a)²b⁴`.
pub fn invariant_u() -> Polynomial {
    let Vars { x, y, z, a, b, .. } = vars();
    let (x2, y2, z2) = (x.pow(2), y.pow(2), z.pow(2));
    let one_minus_a = &c(1) - &a;
    let a_minus_1 = &a - &c(1);
    // (a−1)² x⁴
    let t1 = &a_minus_1.pow(2) * &x.pow(4);
    // (a z² + y²)²
    let t2 = (&(&a * &z2) + &y2).pow(2);
    // 2 (1−a) x² (y² − a z²)
    let t3 = prod(&[&c(2), &one_minus_a, &x2, &(&y2 - &(&a * &z2))]);
    // 6 a b (a−1) (3((x²−z²)a − x² + y²) b − 4xyz)
    let inner = &(&(&(&x2 - &z2) * &a) - &x2) + &y2;
    let bracket = &prod(&[&c(3), &inner, &b]) - &prod(&[&c(4), &x, &y, &z]);
    let t4 = prod(&[&c(6), &a, &b, &a_minus_1, &bracket]);
    // 81 a² (1−a)² b⁴
    let t5 = prod(&[&c(81), &a.pow(2), &one_minus_a.pow(2), &b.pow(4)]);
    t1 + t2 + t3 + t4 + t5
}

/// Angular momenta `(l_x, l_y, l_z)` under the given convention.
pub fn angular_momenta(convention: AngularConvention) -> [Polynomial; 3] {
    let Vars { x, y, z, px, py, pz, .. } = vars();
    let lx = &(&y * &pz) - &(&z * &py);
    let ly = match convention {
        AngularConvention::Standard => &(&z * &px) - &(&x * &pz),
        AngularConvention::Misprint => &(&z * &py) - &(&x * &pz),
    };
    let lz = &(&x * &py) - &(&y * &px);
    [lx, ly, lz]
}

/// `½(px² + py² + pz²)`.
pub fn kinetic_energy() -> Polynomial {
    let Vars { px, py, pz, .. } = vars();
    (&(&px.pow(2) + &py.pow(2)) + &pz.pow(2)).scale(&crate::algebra::rat(1, 2))
}

/// Momentum-quadratic leading parts of `X1` and `X2`.
pub fn leading_parts(convention: AngularConvention) -> (Polynomial, Polynomial) {
    let Vars { px, py, pz, a, b, .. } = vars();
    let [lx, ly, lz] = angular_momenta(convention);
    let b2 = b.pow(2);

    // X1: l² + 2b(l_x px − (3a−1) l_y py − 2 l_z pz)
    //     + 3b²((1−4a)px² − (3a²−2a−1)py² + 2(a−1)pz²)
    let l_sq = &(&lx.pow(2) + &ly.pow(2)) + &lz.pow(2);
    let mixed = &(&(&lx * &px) - &prod(&[&(&(&c(3) * &a) - &c(1)), &ly, &py]))
        - &prod(&[&c(2), &lz, &pz]);
    let p_quad = &(&(&(&c(1) - &(&c(4) * &a)) * &px.pow(2))
        - &(&(&(&(&c(3) * &a.pow(2)) - &(&c(2) * &a)) - &c(1)) * &py.pow(2)))
        + &prod(&[&c(2), &(&a - &c(1)), &pz.pow(2)]);
    let lead1 = &(&l_sq + &prod(&[&c(2), &b, &mixed])) + &prod(&[&c(3), &b2, &p_quad]);

    // X2: a l_y² + l_z² + 6ab l_x px + 9ab²(a pz² + py²)
    let lead2 = &(&(&(&a * &ly.pow(2)) + &lz.pow(2)) + &prod(&[&c(6), &a, &b, &lx, &px]))
        + &prod(&[&c(9), &a, &b2, &(&(&a * &pz.pow(2)) + &py.pow(2))]);
    (lead1, lead2)
}

/// Numerator polynomials `Q1`, `Q2` of the scalar parts, `m_i = Q_i / √u`:
/// `Q1 = 2w0(x² + y² + z² + 3b²(1−a))`,
/// `Q2 = w0(x² + y² + a(x² + z²) + 9ab²(a+1))`.
pub fn scalar_numerators() -> (Polynomial, Polynomial) {
    let Vars { x, y, z, a, b, w0, .. } = vars();
    let (x2, y2, z2, b2) = (x.pow(2), y.pow(2), z.pow(2), b.pow(2));
    let q1 = prod(&[
        &c(2),
        &w0,
        &(&(&(&x2 + &y2) + &z2) + &prod(&[&c(3), &b2, &(&c(1) - &a)])),
    ]);
    let q2 = &w0
        * &(&(&(&x2 + &y2) + &(&a * &(&x2 + &z2))) + &prod(&[&c(9), &a, &b2, &(&a + &c(1))]));
    (q1, q2)
}

/// The characteristic ratios, transcribed as printed (including the overall
/// sign of `N2`).
pub fn characteristics() -> Characteristics {
    let Vars { x, y, z, a, b, .. } = vars();
    let (x2, y2, z2, b2) = (x.pow(2), y.pow(2), z.pow(2), b.pow(2));
    let a_minus_1 = &a - &c(1);
    let one_minus_a = &c(1) - &a;

    // N1 = (1−a)(9a(a−1)b²x − 6abyz + ax(x²+z²) − x(x²+y²))
    let n1 = &one_minus_a
        * &(&(&(&prod(&[&c(9), &a, &a_minus_1, &b2, &x]) - &prod(&[&c(6), &a, &b, &y, &z]))
            + &prod(&[&a, &x, &(&x2 + &z2)]))
            - &(&x * &(&x2 + &y2)));
    // D1 = a(9(a−1)ab²z + 6abxy − az(x²+z²) − 6bxy + z(x²−y²))
    let d1 = &a
        * &(&(&(&(&prod(&[&c(9), &a_minus_1, &a, &b2, &z]) + &prod(&[&c(6), &a, &b, &x, &y]))
            - &prod(&[&a, &z, &(&x2 + &z2)]))
            - &prod(&[&c(6), &b, &x, &y]))
            + &(&z * &(&x2 - &y2)));
    // N2 = −(9a(a−1)b²y + 6a(1−a)bxz + ay(z²−x²) + y(x²+y²))
    let n2 = -(&(&(&prod(&[&c(9), &a, &a_minus_1, &b2, &y])
        + &prod(&[&c(6), &a, &one_minus_a, &b, &x, &z]))
        + &prod(&[&a, &y, &(&z2 - &x2)]))
        + &(&y * &(&x2 + &y2)));
    // D2 = a(9a(a−1)b²z + 6(a−1)bxy − az(x²+z²) + z(x²−y²))
    let d2 = &a
        * &(&(&(&prod(&[&c(9), &a, &a_minus_1, &b2, &z]) + &prod(&[&c(6), &a_minus_1, &b, &x, &y]))
            - &prod(&[&a, &z, &(&x2 + &z2)]))
            + &(&z * &(&x2 - &y2)));
    Characteristics { n1, d1, n2, d2 }
}

/// Coefficient matrices `C_i` with `∂_q m_i = Σ_j C_i[q][j]·∂_j V`.
pub fn m_system_coefficients() -> [[[Polynomial; 3]; 3]; 2] {
    let Vars { x, y, z, a, b, .. } = vars();
    let (x2, y2, z2, b2) = (x.pow(2), y.pow(2), z.pow(2), b.pow(2));
    // 3abz + xy, 3by − xz, 3b(1−a)x + yz
    let sxy = &prod(&[&c(3), &a, &b, &z]) + &(&x * &y);
    let sxz = &prod(&[&c(3), &b, &y]) - &(&x * &z);
    let syz = &prod(&[&c(3), &b, &(&c(1) - &a), &x]) + &(&y * &z);
    let two = c(2);
    let m1 = [
        [
            &two * &(&(&prod(&[&c(3), &(&c(1) - &(&c(4) * &a)), &b2]) + &y2) + &z2),
            -(&two * &sxy),
            &two * &sxz,
        ],
        [
            -(&two * &sxy),
            &two
                * &(&(&prod(&[
                    &c(3),
                    &(&(&c(1) + &(&c(2) * &a)) - &(&c(3) * &a.pow(2))),
                    &b2,
                ]) + &x2)
                    + &z2),
            -(&two * &syz),
        ],
        [
            &two * &sxz,
            -(&two * &syz),
            &two * &(&(&prod(&[&c(6), &(&a - &c(1)), &b2]) + &x2) + &y2),
        ],
    ];
    let m2 = [
        [
            &two * &(&(&a * &z2) + &y2),
            -(&two * &sxy),
            prod(&[&two, &a, &sxz]),
        ],
        [
            -(&two * &sxy),
            &two * &(&prod(&[&c(9), &a, &b2]) + &x2),
            Polynomial::zero(),
        ],
        [
            prod(&[&two, &a, &sxz]),
            Polynomial::zero(),
            prod(&[&two, &a, &(&prod(&[&c(9), &a, &b2]) + &x2)]),
        ],
    ];
    [m1, m2]
}

impl SystemContext {
    /// Builds the context with the standard angular momenta.
    pub fn build() -> SystemContext {
        SystemContext::with_convention(AngularConvention::Standard)
    }

    pub fn with_convention(convention: AngularConvention) -> SystemContext {
        let u = invariant_u();
        let ring = RingContext::new(u.clone());
        let s = RadicalElement::s(&ring);
        let w0 = v(Var::W0);
        let kinetic = kinetic_energy();
        let pot = s.mul_poly(&w0);
        let (lead1, lead2) = leading_parts(convention);
        let (q1, q2) = scalar_numerators();
        let m1 = s.mul_poly(&q1);
        let m2 = s.mul_poly(&q2);
        let h = &RadicalElement::from_poly(&ring, kinetic.clone()) + &pot;
        let x1 = &RadicalElement::from_poly(&ring, lead1.clone()) + &m1;
        let x2 = &RadicalElement::from_poly(&ring, lead2.clone()) + &m2;
        SystemContext {
            convention,
            ring,
            u,
            kinetic,
            v: pot,
            lead1,
            lead2,
            m1,
            m2,
            h,
            x1,
            x2,
            characteristics: characteristics(),
        }
    }

    /// Replaces the scalar parts, rebuilding `X1`, `X2`.
    pub fn with_scalar_parts(&self, m1: RadicalElement, m2: RadicalElement) -> SystemContext {
        let mut out = self.clone();
        out.x1 = &RadicalElement::from_poly(&self.ring, self.lead1.clone()) + &m1;
        out.x2 = &RadicalElement::from_poly(&self.ring, self.lead2.clone()) + &m2;
        out.m1 = m1;
        out.m2 = m2;
        out
    }

    /// Replaces the potential, rebuilding `H`.
    pub fn with_potential(&self, v: RadicalElement) -> SystemContext {
        let mut out = self.clone();
        out.h = &RadicalElement::from_poly(&self.ring, self.kinetic.clone()) + &v;
        out.v = v;
        out
    }

    /// SHA-256 over the rendered closed forms.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("{:?}", self.convention));
        for p in [&self.u, &self.kinetic, &self.lead1, &self.lead2] {
            hasher.update(p.to_string());
            hasher.update(b"\n");
        }
        for r in [&self.v, &self.m1, &self.m2] {
            hasher.update(r.to_string());
            hasher.update(b"\n");
        }
        let ch = &self.characteristics;
        for p in [&ch.n1, &ch.d1, &ch.n2, &ch.d2] {
            hasher.update(p.to_string());
            hasher.update(b"\n");
        }
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Symmetric 3×3 matrix `K` with `X_leading = Σ K^{ij} p_i p_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct KillingTensor {
    pub k: [[Polynomial; 3]; 3],
}

impl KillingTensor {
    /// From a polynomial homogeneous of degree two in the momenta.
    pub fn from_leading(p: &Polynomial) -> Result<KillingTensor, CatalogError> {
        let groups = p.collect(VarSet::momenta());
        if groups.keys().any(|m| m.total_degree() != 2) {
            return Err(CatalogError::NonQuadratic);
        }
        let k = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mono = Monomial::var(Var::MOMENTA[i]).mul(&Monomial::var(Var::MOMENTA[j]));
                let coeff = groups.get(&mono).cloned().unwrap_or_default();
                if i == j {
                    coeff
                } else {
                    coeff.scale(&crate::algebra::rat(1, 2))
                }
            })
        });
        Ok(KillingTensor { k })
    }

    pub fn identity_scaled(c: &Rational) -> KillingTensor {
        KillingTensor {
            k: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    if i == j {
                        Polynomial::constant(c.clone())
                    } else {
                        Polynomial::zero()
                    }
                })
            }),
        }
    }

    pub fn matmul(&self, other: &KillingTensor) -> [[Polynomial; 3]; 3] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3).fold(Polynomial::zero(), |acc, l| {
                    &acc + &(&self.k[i][l] * &other.k[l][j])
                })
            })
        })
    }

    /// `K1·K2 − K2·K1`.
    pub fn commutator(&self, other: &KillingTensor) -> [[Polynomial; 3]; 3] {
        let ab = self.matmul(other);
        let ba = other.matmul(self);
        std::array::from_fn(|i| std::array::from_fn(|j| &ab[i][j] - &ba[i][j]))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.k[i][j] == self.k[j][i]))
    }
}

/// Killing tensor of an observable's momentum-quadratic part. The
/// observable must carry no denominator and a momentum-free radical part.
pub fn extract_killing_tensor(x: &Observable) -> Result<KillingTensor, CatalogError> {
    let x = x.normalize();
    let (a, b, m) = x.parts();
    if m != 0 || !b.is_free_of(VarSet::momenta()) {
        return Err(CatalogError::NonQuadratic);
    }
    if a.degree_in(VarSet::momenta()) != Some(2) {
        return Err(CatalogError::NonQuadratic);
    }
    let scalar = a.homogeneous_part(VarSet::momenta(), 0);
    KillingTensor::from_leading(&(a - &scalar))
}

/// A singular line `{point + t·direction}` where `u` vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularLine {
    pub point: [f64; 3],
    pub direction: [f64; 3],
    /// `ε = ε1·ε2`.
    pub sign: i8,
}

impl SingularLine {
    pub fn at(&self, t: f64) -> [f64; 3] {
        std::array::from_fn(|i| self.point[i] + t * self.direction[i])
    }

    /// Euclidean distance from `q` to the line.
    pub fn distance(&self, q: [f64; 3]) -> f64 {
        let d = self.direction;
        let dn = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        let w = [q[0] - self.point[0], q[1] - self.point[1], q[2] - self.point[2]];
        let cross = [
            w[1] * d[2] - w[2] * d[1],
            w[2] * d[0] - w[0] * d[2],
            w[0] * d[1] - w[1] * d[0],
        ];
        (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt() / dn
    }
}

/// Same line with exact rational data, available at Pythagorean `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactSingularLine {
    pub point: [Rational; 3],
    pub direction: [Rational; 3],
    pub sign: i8,
}

pub fn check_domain(a: f64, b: f64) -> Result<(), CatalogError> {
    if a > 0.0 && a <= 0.5 && b != 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(CatalogError::ParamDomain { a, b })
    }
}

/// Lines `x = −ε√(a/(1−a))·z`, `y = 3ε√(a(1−a))·b`, parametrized by `z`,
/// for `ε = +1, −1`.
pub fn singular_lines(a: f64, b: f64) -> Result<[SingularLine; 2], CatalogError> {
    check_domain(a, b)?;
    let slope = (a / (1.0 - a)).sqrt();
    let offset = 3.0 * (a * (1.0 - a)).sqrt() * b;
    Ok([1i8, -1].map(|eps| {
        let e = eps as f64;
        SingularLine {
            point: [0.0, e * offset, 0.0],
            direction: [-e * slope, 0.0, 1.0],
            sign: eps,
        }
    }))
}

/// `(√a, √(1−a))` for a Pythagorean parameter.
pub fn pythagorean_roots(a: &Rational) -> Result<(Rational, Rational), CatalogError> {
    let one = Rational::one();
    let sa = rational_sqrt(a);
    let sc = rational_sqrt(&(&one - a));
    match (sa, sc) {
        (Some(sa), Some(sc)) => Ok((sa, sc)),
        _ => Err(CatalogError::ParamNotPythagorean(a.to_string())),
    }
}

pub fn singular_lines_exact(
    a: &Rational,
    b: &Rational,
) -> Result<[ExactSingularLine; 2], CatalogError> {
    let af = crate::algebra::to_f64(a);
    let bf = crate::algebra::to_f64(b);
    check_domain(af, bf)?;
    let (sa, sc) = pythagorean_roots(a)?;
    let slope = &sa / &sc;
    let offset = &(&Rational::from_integer(3.into()) * &sa) * &(&sc * b);
    let zero = Rational::zero();
    let one = Rational::one();
    Ok([1i8, -1].map(|eps| {
        let e = Rational::from_integer(eps.into());
        ExactSingularLine {
            point: [zero.clone(), &e * &offset, zero.clone()],
            direction: [-(&e * &slope), zero.clone(), one.clone()],
            sign: eps,
        }
    }))
}

/// The four linear factors `ε1√(1−a)·i·x + ε1ε2·y + ε2√a·i·z − 3√(a(1−a))·b`
/// at a Pythagorean `a`, in the order `(ε1, ε2) = (+,+), (+,−), (−,+), (−,−)`.
pub fn hyperplane_factors(a: &Rational) -> Result<Vec<crate::algebra::GaussPoly>, CatalogError> {
    use crate::algebra::{GaussPoly, GaussRational};
    let (sa, sc) = pythagorean_roots(a)?;
    let k = &(&Rational::from_integer(3.into()) * &sa) * &sc;
    let mut out = Vec::with_capacity(4);
    for e1 in [1i64, -1] {
        for e2 in [1i64, -1] {
            let (e1r, e2r) = (
                Rational::from_integer(e1.into()),
                Rational::from_integer(e2.into()),
            );
            let mut f = GaussPoly::zero();
            f.add_term(Monomial::var(Var::X), &GaussRational::imag(&e1r * &sc));
            f.add_term(Monomial::var(Var::Y), &GaussRational::real(&e1r * &e2r));
            f.add_term(Monomial::var(Var::Z), &GaussRational::imag(&e2r * &sa));
            f.add_term(Monomial::var(Var::B), &GaussRational::real(-k.clone()));
            out.push(f);
        }
    }
    Ok(out)
}

/// Degree-one coefficient helper used by tests and checks.
pub fn coefficient_of(p: &Polynomial, pairs: &[(Var, u8)]) -> Polynomial {
    let groups = p.collect(VarSet::coords());
    groups
        .get(&Monomial::from_pairs(pairs))
        .cloned()
        .unwrap_or_default()
}
