//! Sparse multivariate polynomials over the fixed alphabet.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::Signed;

use super::monomial::{Monomial, Var, VarSet, NVARS};
use super::rational::{to_f64, Coeff, Rational};
use super::AlgebraError;

/// Sparse polynomial: a map from monomial to nonzero coefficient.
///
/// The map never holds zero coefficients, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C: Coeff> {
    terms: BTreeMap<Monomial, C>,
}

/// Polynomial with exact rational coefficients.
pub type Polynomial = Poly<Rational>;

/// A (partial) assignment of values to the alphabet.
#[derive(Clone, Debug)]
pub struct Assignment<T> {
    values: [Option<T>; NVARS],
}

impl<T> Default for Assignment<T> {
    fn default() -> Self {
        Assignment {
            values: std::array::from_fn(|_| None),
        }
    }
}

impl<T> Assignment<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: Var, value: T) -> Self {
        self.values[v.index()] = Some(value);
        self
    }

    pub fn set(&mut self, v: Var, value: T) {
        self.values[v.index()] = Some(value);
    }

    pub fn get(&self, v: Var) -> Option<&T> {
        self.values[v.index()].as_ref()
    }
}

impl<C: Coeff> Default for Poly<C> {
    fn default() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), C::one())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Sums the given terms, merging repeated monomials.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(iter: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Highest degree in the variables of `set`, `None` for the zero polynomial.
    pub fn degree_in(&self, set: VarSet) -> Option<u32> {
        self.terms.keys().map(|m| m.degree_in(set)).max()
    }

    pub fn degree_in_var(&self, v: Var) -> Option<u32> {
        self.degree_in(VarSet::of(&[v]))
    }

    /// True when no term involves a variable of `set`.
    pub fn is_free_of(&self, set: VarSet) -> bool {
        self.terms.keys().all(|m| m.degree_in(set) == 0)
    }

    pub fn add_term(&mut self, m: Monomial, c: &C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (*m, k.mul_ref(c)))
                .filter(|(_, k)| !k.is_zero())
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &C) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.mul(mono), k.mul_ref(c)))
                .filter(|(_, k)| !k.is_zero())
                .collect(),
        }
    }

    /// Full product: all cross terms are accumulated, then merged.
    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if self.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return other.mul_monomial(m, c);
        }
        if other.len() == 1 {
            let (m, c) = other.terms.iter().next().unwrap();
            return self.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.len() * other.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let prod = c1.mul_ref(c2);
                acc.entry(m1.mul(m2))
                    .and_modify(|c| c.add_assign_ref(&prod))
                    .or_insert(prod);
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul_ref(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_ref(&base);
            }
        }
        result
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: Var) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(v) > 0)
                .map(|(m, c)| {
                    let e = m.exp(v);
                    (m.with_exp(v, e - 1), c.mul_ref(&C::from_i64(e as i64)))
                })
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Groups terms by their monomial in `subset`; the values are the
    /// coefficient polynomials in the complementary variables.
    pub fn collect(&self, subset: VarSet) -> BTreeMap<Monomial, Poly<C>> {
        let mut out: BTreeMap<Monomial, Poly<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (inside, outside) = m.split(subset);
            out.entry(inside).or_default().add_term(outside, c);
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Terms whose degree in `set` equals `deg`.
    pub fn homogeneous_part(&self, set: VarSet, deg: u32) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree_in(set) == deg)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Replaces `v` by a constant.
    pub fn substitute(&self, v: Var, value: &C) -> Self {
        let max = self.degree_in_var(v).unwrap_or(0) as usize;
        let mut powers = Vec::with_capacity(max + 1);
        powers.push(C::one());
        for i in 1..=max {
            let next = powers[i - 1].mul_ref(value);
            powers.push(next);
        }
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let e = m.exp(v) as usize;
            (m.with_exp(v, 0), c.mul_ref(&powers[e]))
        }))
    }

    /// Replaces `v` by a polynomial.
    pub fn compose(&self, v: Var, value: &Poly<C>) -> Self {
        let max = self.degree_in_var(v).unwrap_or(0) as usize;
        let mut powers = Vec::with_capacity(max + 1);
        powers.push(Poly::one());
        for i in 1..=max {
            let next = powers[i - 1].mul_ref(value);
            powers.push(next);
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            out += &powers[e].mul_monomial(&m.with_exp(v, 0), c);
        }
        out
    }

    /// Negates every variable in `set` (`v -> -v`).
    pub fn reflect(&self, set: VarSet) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    if m.degree_in(set) % 2 == 1 {
                        (*m, c.neg_ref())
                    } else {
                        (*m, c.clone())
                    }
                })
                .collect(),
        }
    }

    /// Exact evaluation; every occurring variable must be assigned.
    pub fn eval(&self, point: &Assignment<C>) -> Result<C, AlgebraError> {
        let mut total = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                let x = point.get(v).ok_or(AlgebraError::Unassigned(v))?;
                for _ in 0..e {
                    t = t.mul_ref(x);
                }
            }
            total.add_assign_ref(&t);
        }
        Ok(total)
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }
}

impl Polynomial {
    /// Binary64 evaluation: each term is formed in binary64 and the terms
    /// are added with compensated (Neumaier) summation.
    pub fn eval_f64(&self, point: &Assignment<f64>) -> Result<f64, AlgebraError> {
        let mut sum = CompensatedSum::default();
        for (m, c) in &self.terms {
            let mut t = to_f64(c);
            for v in Var::ALL {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                let x = *point.get(v).ok_or(AlgebraError::Unassigned(v))?;
                t *= x.powi(e as i32);
            }
            sum.add(t);
        }
        Ok(sum.value())
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = divisor.leading_term()?;
        let (lm, lc) = (*lm, lc.clone());
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem -= &divisor.mul_monomial(&qm, &qc);
            quot.add_term(qm, &qc);
        }
        Some(quot)
    }

    /// Largest absolute coefficient, for residual summaries.
    pub fn max_abs_coeff(&self) -> Option<Rational> {
        self.terms.values().map(|c| c.abs()).max()
    }
}

/// Neumaier's improved Kahan–Babuška summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Coeff> AddAssign<&Poly<C>> for Poly<C> {
    fn add_assign(&mut self, rhs: &Poly<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c);
        }
    }
}

impl<C: Coeff> SubAssign<&Poly<C>> for Poly<C> {
    fn sub_assign(&mut self, rhs: &Poly<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, &c.neg_ref());
        }
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Coeff> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(mut self, rhs: Poly<C>) -> Poly<C> {
        self += &rhs;
        self
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<C: Coeff> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(mut self, rhs: Poly<C>) -> Poly<C> {
        self -= &rhs;
        self
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        self.mul_ref(rhs)
    }
}

impl<C: Coeff> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Poly<C>) -> Poly<C> {
        self.mul_ref(&rhs)
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg_ref())).collect(),
        }
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

impl<C: Coeff> From<Var> for Poly<C> {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

/// Shorthand constructors used when transcribing closed forms.
pub mod build {
    use super::*;
    use crate::algebra::rational::{int, rat};

    pub fn v(var: Var) -> Polynomial {
        Polynomial::var(var)
    }

    pub fn c(n: i64) -> Polynomial {
        Polynomial::constant(int(n))
    }

    pub fn q(n: i64, d: i64) -> Polynomial {
        Polynomial::constant(rat(n, d))
    }
}
