//! Gaussian rationals `re + i·im` and products of linear forms over them.

use std::fmt;

use std::ops::{Add, Mul};

use num_traits::{One, Signed, Zero};

use super::monomial::VarSet;
use super::poly::{Poly, Polynomial};
use super::rational::{Coeff, Rational};
use super::AlgebraError;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn imag(im: Rational) -> Self {
        GaussRational {
            re: Rational::zero(),
            im,
        }
    }

    pub fn i() -> Self {
        GaussRational::imag(Rational::one())
    }

    pub fn conj(&self) -> Self {
        GaussRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            let sign = if self.im.is_negative() { "-" } else { "+" };
            write!(f, "{}{}{}i", self.re, sign, self.im.abs())
        }
    }
}

impl Zero for GaussRational {
    fn zero() -> Self {
        GaussRational::real(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRational {
    fn one() -> Self {
        GaussRational::real(Rational::one())
    }
}

impl Add for GaussRational {
    type Output = GaussRational;
    fn add(mut self, rhs: GaussRational) -> GaussRational {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Mul for GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: GaussRational) -> GaussRational {
        self.mul_ref(&rhs)
    }
}

impl Coeff for GaussRational {
    fn add_assign_ref(&mut self, other: &Self) {
        self.re += &other.re;
        self.im += &other.im;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        GaussRational {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }
    fn neg_ref(&self) -> Self {
        GaussRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
    fn from_i64(n: i64) -> Self {
        GaussRational::real(<Rational as Coeff>::from_i64(n))
    }
}

/// Polynomial with Gaussian-rational coefficients.
pub type GaussPoly = Poly<GaussRational>;

pub fn to_gauss(p: &Polynomial) -> GaussPoly {
    p.map_coeffs(|c| GaussRational::real(c.clone()))
}

/// Real and imaginary coefficient parts.
pub fn split_re_im(p: &GaussPoly) -> (Polynomial, Polynomial) {
    (
        p.map_coeffs(|c| c.re.clone()),
        p.map_coeffs(|c| c.im.clone()),
    )
}

/// Expands a product of factors, each of which must have degree at most one
/// in the coordinates.
pub fn gauss_poly_expand(factors: &[GaussPoly]) -> Result<GaussPoly, AlgebraError> {
    let mut out = GaussPoly::one();
    for f in factors {
        if f.degree_in(VarSet::coords()).unwrap_or(0) > 1 {
            return Err(AlgebraError::NotLinear);
        }
        out = out.mul_ref(f);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::monomial::{Monomial, Var};
    use crate::algebra::rational::int;

    fn lin(re_x: i64, im_y: i64, c: i64) -> GaussPoly {
        let mut p = GaussPoly::zero();
        p.add_term(Monomial::var(Var::X), &GaussRational::real(int(re_x)));
        p.add_term(Monomial::var(Var::Y), &GaussRational::imag(int(im_y)));
        p.add_term(Monomial::ONE, &GaussRational::real(int(c)));
        p
    }

    #[test]
    fn conjugate_pair_is_real() {
        let prod = gauss_poly_expand(&[lin(1, 1, 0), lin(1, -1, 0)]).unwrap();
        let (re, im) = split_re_im(&prod);
        assert!(im.is_zero());
        let x = Polynomial::var(Var::X);
        let y = Polynomial::var(Var::Y);
        assert_eq!(re, &(&x * &x) + &(&y * &y));
    }

    #[test]
    fn real_factors() {
        let prod = gauss_poly_expand(&[lin(1, 0, -1), lin(1, 0, 1)]).unwrap();
        let (re, im) = split_re_im(&prod);
        assert!(im.is_zero());
        let x = Polynomial::var(Var::X);
        assert_eq!(re, &(&x * &x) - &Polynomial::one());
    }

    #[test]
    fn conjugation_is_involution() {
        let g = GaussRational::new(int(3), int(-7));
        assert_eq!(g.conj().conj(), g);
        assert_eq!(g.mul_ref(&g.conj()), GaussRational::real(int(58)));
    }

    #[test]
    fn rejects_nonlinear_factor() {
        let sq = lin(1, 0, 0).pow(2);
        assert!(gauss_poly_expand(&[sq]).is_err());
    }
}
