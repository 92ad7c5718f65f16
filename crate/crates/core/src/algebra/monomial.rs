use std::cmp::Ordering;
use std::fmt;

/// Number of variables in the fixed alphabet.
pub const NVARS: usize = 9;

/// The fixed variable alphabet, in storage order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
    Px,
    Py,
    Pz,
    A,
    B,
    W0,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::X,
        Var::Y,
        Var::Z,
        Var::Px,
        Var::Py,
        Var::Pz,
        Var::A,
        Var::B,
        Var::W0,
    ];
    pub const COORDS: [Var; 3] = [Var::X, Var::Y, Var::Z];
    pub const MOMENTA: [Var; 3] = [Var::Px, Var::Py, Var::Pz];
    pub const PARAMS: [Var; 3] = [Var::A, Var::B, Var::W0];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Var> {
        Var::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::Px => "px",
            Var::Py => "py",
            Var::Pz => "pz",
            Var::A => "a",
            Var::B => "b",
            Var::W0 => "w0",
        }
    }

    pub fn is_momentum(self) -> bool {
        matches!(self, Var::Px | Var::Py | Var::Pz)
    }

    pub fn is_coordinate(self) -> bool {
        matches!(self, Var::X | Var::Y | Var::Z)
    }

    /// Momentum conjugate to a coordinate, and vice versa.
    pub fn conjugate(self) -> Option<Var> {
        match self {
            Var::X => Some(Var::Px),
            Var::Y => Some(Var::Py),
            Var::Z => Some(Var::Pz),
            Var::Px => Some(Var::X),
            Var::Py => Some(Var::Y),
            Var::Pz => Some(Var::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A subset of the alphabet, stored as a bit mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct VarSet(u16);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn of(vars: &[Var]) -> VarSet {
        VarSet(vars.iter().fold(0, |m, v| m | (1 << v.index())))
    }

    pub fn momenta() -> VarSet {
        VarSet::of(&Var::MOMENTA)
    }

    pub fn coords() -> VarSet {
        VarSet::of(&Var::COORDS)
    }

    pub fn params() -> VarSet {
        VarSet::of(&Var::PARAMS)
    }

    #[inline]
    pub fn contains(self, v: Var) -> bool {
        self.0 & (1 << v.index()) != 0
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn complement(self) -> VarSet {
        VarSet(!self.0 & ((1 << NVARS) - 1))
    }
}

/// Exponent vector over the fixed alphabet.
///
/// Ordered graded-lexicographically: higher total degree first compares
/// greater, ties broken lexicographically with `x > y > ... > w0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u8; NVARS],
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0; NVARS] };

    pub fn new(exps: [u8; NVARS]) -> Monomial {
        Monomial { exps }
    }

    pub fn var(v: Var) -> Monomial {
        Monomial::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u8) -> Monomial {
        let mut exps = [0; NVARS];
        exps[v.index()] = e;
        Monomial { exps }
    }

    /// Builds a monomial from `(variable, exponent)` pairs; repeated
    /// variables accumulate.
    pub fn from_pairs(pairs: &[(Var, u8)]) -> Monomial {
        let mut exps = [0; NVARS];
        for &(v, e) in pairs {
            exps[v.index()] += e;
        }
        Monomial { exps }
    }

    #[inline]
    pub fn exps(&self) -> &[u8; NVARS] {
        &self.exps
    }

    #[inline]
    pub fn exp(&self, v: Var) -> u8 {
        self.exps[v.index()]
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn degree_in(&self, set: VarSet) -> u32 {
        Var::ALL
            .iter()
            .filter(|v| set.contains(**v))
            .map(|v| self.exp(*v) as u32)
            .sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = e.checked_add(*o).expect("monomial exponent overflow");
        }
        Monomial { exps }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = e.checked_sub(*o)?;
        }
        Some(Monomial { exps })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// Splits into the part supported on `set` and the remainder.
    pub fn split(&self, set: VarSet) -> (Monomial, Monomial) {
        let mut inside = [0; NVARS];
        let mut outside = [0; NVARS];
        for v in Var::ALL {
            if set.contains(v) {
                inside[v.index()] = self.exp(v);
            } else {
                outside[v.index()] = self.exp(v);
            }
        }
        (Monomial { exps: inside }, Monomial { exps: outside })
    }

    pub(crate) fn with_exp(&self, v: Var, e: u8) -> Monomial {
        let mut exps = self.exps;
        exps[v.index()] = e;
        Monomial { exps }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let x = Monomial::var(Var::X);
        let y2 = Monomial::var_pow(Var::Y, 2);
        let xy = Monomial::from_pairs(&[(Var::X, 1), (Var::Y, 1)]);
        assert!(y2 > x);
        assert!(xy < Monomial::var_pow(Var::X, 2));
        assert!(xy > y2);
        assert!(Monomial::ONE < Monomial::var(Var::W0));
    }

    #[test]
    fn split_and_divide() {
        let m = Monomial::from_pairs(&[(Var::X, 2), (Var::Px, 1), (Var::A, 3)]);
        let (p, rest) = m.split(VarSet::momenta());
        assert_eq!(p, Monomial::var(Var::Px));
        assert_eq!(rest.mul(&p), m);
        assert_eq!(m.div(&Monomial::var(Var::A)).unwrap().exp(Var::A), 2);
        assert!(m.div(&Monomial::var(Var::Y)).is_none());
    }

    #[test]
    fn varset_complement() {
        let s = VarSet::momenta();
        let c = s.complement();
        for v in Var::ALL {
            assert_ne!(s.contains(v), c.contains(v));
        }
    }
}
