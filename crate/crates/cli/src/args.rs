//! Value parsers for command-line flags.

use std::fmt;
use std::str::FromStr;

use quadint::algebra::{parse_rational, to_f64, Rational};

/// A number given as `p/q` or a decimal; keeps the exact value.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalArg {
    pub text: String,
    pub exact: Rational,
    pub value: f64,
}

impl FromStr for RationalArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let exact = parse_rational(s.trim()).map_err(|e| e.to_string())?;
        let value = to_f64(&exact);
        Ok(RationalArg {
            text: s.trim().to_string(),
            exact,
            value,
        })
    }
}

impl fmt::Display for RationalArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Three comma-separated numbers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec3Arg(pub [f64; 3]);

impl FromStr for Vec3Arg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected three comma-separated numbers, got '{s}'"));
        }
        let mut v = [0.0; 3];
        for (i, p) in parts.iter().enumerate() {
            v[i] = p.parse::<RationalArg>()?.value;
        }
        Ok(Vec3Arg(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_numbers() {
        let r: RationalArg = "9/25".parse().unwrap();
        assert_eq!(r.value, 0.36);
        assert_eq!(r.exact, Rational::new(9.into(), 25.into()));
        assert_eq!("-1".parse::<RationalArg>().unwrap().value, -1.0);
        assert_eq!("0.25".parse::<RationalArg>().unwrap().value, 0.25);
        assert!("x".parse::<RationalArg>().is_err());
        assert_eq!("1, -2.5,1/2".parse::<Vec3Arg>().unwrap().0, [1.0, -2.5, 0.5]);
        assert!("1,2".parse::<Vec3Arg>().is_err());
    }
}
