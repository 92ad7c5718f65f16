use crate::algebra::{Polynomial, Var};
use crate::radical::{Observable, RadicalError};

/// `{F, G} = Σ ∂F/∂q_i · ∂G/∂p_i − ∂F/∂p_i · ∂G/∂q_i`, so `{x, px} = 1`.
pub fn poisson_bracket(f: &Observable, g: &Observable) -> Result<Observable, RadicalError> {
    if !f.same_ring(g) {
        return Err(RadicalError::ContextMismatch);
    }
    let mut acc = Observable::zero(f.ring());
    for q in Var::COORDS {
        let p = q.conjugate().expect("coordinate has a conjugate momentum");
        let fp = f.partial(p);
        let gp = g.partial(p);
        if !gp.is_zero() {
            acc = acc.checked_add(&f.partial(q).checked_mul(&gp)?)?;
        }
        if !fp.is_zero() {
            acc = acc.checked_sub(&fp.checked_mul(&g.partial(q))?)?;
        }
    }
    Ok(acc)
}

/// The same bracket for plain polynomials.
pub fn poly_bracket(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let mut acc = Polynomial::zero();
    for q in Var::COORDS {
        let p = q.conjugate().expect("coordinate has a conjugate momentum");
        acc += &(&f.partial(q) * &g.partial(p));
        acc -= &(&f.partial(p) * &g.partial(q));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build::v;
    use crate::catalog::{angular_momenta, AngularConvention};
    use crate::radical::{RadicalElement, RingContext};

    #[test]
    fn canonical_pair() {
        let ring = RingContext::new(&v(Var::X).pow(2) + &Polynomial::one());
        let x = RadicalElement::from_poly(&ring, v(Var::X));
        let px = RadicalElement::from_poly(&ring, v(Var::Px));
        let b = poisson_bracket(&x, &px).unwrap();
        assert!(b.value_eq(&RadicalElement::from_poly(&ring, Polynomial::one())).unwrap());
    }

    #[test]
    fn angular_momentum_algebra() {
        let [lx, ly, lz] = angular_momenta(AngularConvention::Standard);
        assert_eq!(poly_bracket(&lx, &ly), lz);
        assert_eq!(poly_bracket(&ly, &lz), lx);
        assert_eq!(poly_bracket(&lz, &lx), ly);
        let [lx, ly, lz] = angular_momenta(AngularConvention::Misprint);
        assert_ne!(poly_bracket(&lx, &ly), lz);
    }

    #[test]
    fn kinetic_bracket_is_a_chain_rule() {
        // {½|p|², s} = −p·∇s for s = u^(−1/2)
        let u = &(&v(Var::X).pow(2) + &v(Var::Y).pow(4)) + &(&v(Var::Z) * &v(Var::X)) + Polynomial::one();
        let ring = RingContext::new(u);
        let t = RadicalElement::from_poly(&ring, crate::catalog::kinetic_energy());
        let s = RadicalElement::s(&ring);
        let lhs = poisson_bracket(&t, &s).unwrap();
        let mut rhs = RadicalElement::zero(&ring);
        for q in Var::COORDS {
            rhs = &rhs - &s.partial(q).mul_poly(&v(q.conjugate().unwrap()));
        }
        assert!(lhs.value_eq(&rhs).unwrap());
    }

    #[test]
    fn mismatched_rings_rejected() {
        let r1 = RingContext::new(&v(Var::X).pow(2) + &Polynomial::one());
        let r2 = RingContext::new(&v(Var::X).pow(2) + &Polynomial::one());
        let f = RadicalElement::s(&r1);
        let g = RadicalElement::from_poly(&r2, v(Var::Px));
        assert_eq!(poisson_bracket(&f, &g).unwrap_err(), RadicalError::ContextMismatch);
    }
}
