//! Exact membership degrees in the closed unit interval.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A membership degree `p/q` with `0 <= p <= q`, always stored reduced.
///
/// Equality and ordering are exact. Meet is `min`, join is `max`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grade(Ratio<u64>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradeError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("grade {0}/{1} exceeds 1")]
    AboveOne(u64, u64),
    #[error("malformed grade {0:?}: expected `0`, `1` or a reduced fraction `p/q` with 0 < p < q")]
    Malformed(String),
}

impl Grade {
    pub const ZERO: Grade = Grade(Ratio::new_raw(0, 1));
    pub const ONE: Grade = Grade(Ratio::new_raw(1, 1));

    pub fn new(numer: u64, denom: u64) -> Result<Self, GradeError> {
        if denom == 0 {
            return Err(GradeError::ZeroDenominator);
        }
        if numer > denom {
            return Err(GradeError::AboveOne(numer, denom));
        }
        Ok(Grade(Ratio::new(numer, denom)))
    }

    /// `1 / 2^k`: the canonical strictly descending chain 1 > 1/2 > 1/4 > ...
    pub fn halving(k: u32) -> Self {
        assert!(k < 64, "halving chain index {k} overflows u64");
        Grade(Ratio::new_raw(1, 1u64 << k))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn meet(self, other: Self) -> Self {
        self.min(other)
    }

    pub fn join(self, other: Self) -> Self {
        self.max(other)
    }
}

impl Default for Grade {
    fn default() -> Self {
        Grade::ZERO
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_digits(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for Grade {
    type Err = GradeError;

    /// Strict: accepts `0`, `1`, or `p/q` in lowest terms with `0 < p < q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || GradeError::Malformed(s.to_string());
        match s {
            "0" => return Ok(Grade::ZERO),
            "1" => return Ok(Grade::ONE),
            _ => {}
        }
        let (p, q) = s.split_once('/').ok_or_else(malformed)?;
        let p = parse_digits(p).ok_or_else(malformed)?;
        let q = parse_digits(q).ok_or_else(malformed)?;
        if q == 0 {
            return Err(GradeError::ZeroDenominator);
        }
        if p > q {
            return Err(GradeError::AboveOne(p, q));
        }
        if p == 0 || p == q || p.gcd(&q) != 1 {
            return Err(malformed());
        }
        Ok(Grade(Ratio::new_raw(p, q)))
    }
}

impl Serialize for Grade {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Grade {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn stored_reduced() {
        let g = Grade::new(2, 4).unwrap();
        assert_eq!((g.numer(), g.denom()), (1, 2));
        assert_eq!(g, Grade::halving(1));
        assert_eq!(Grade::new(3, 3).unwrap(), Grade::ONE);
        assert_eq!(Grade::new(0, 7).unwrap(), Grade::ZERO);
    }

    #[test]
    fn rejects_out_of_range() {
        assert_eq!(Grade::new(1, 0), Err(GradeError::ZeroDenominator));
        assert_eq!(Grade::new(3, 2), Err(GradeError::AboveOne(3, 2)));
    }

    #[test]
    fn lattice_ops() {
        let a = Grade::halving(1);
        let b = Grade::halving(2);
        assert_eq!(a.meet(b), b);
        assert_eq!(a.join(b), a);
        assert!(Grade::new(1, 3).unwrap() < Grade::new(1, 2).unwrap());
    }

    #[test]
    fn strict_parse() {
        assert_eq!("1".parse::<Grade>().unwrap(), Grade::ONE);
        assert_eq!("0".parse::<Grade>().unwrap(), Grade::ZERO);
        assert_eq!("3/7".parse::<Grade>().unwrap(), Grade::new(3, 7).unwrap());
        for bad in ["2/4", "1/1", "0/3", "4/3", "1/0", "-1/2", " 1/2", "0.5", "1/2x", "", "/2", "+1/2"] {
            assert!(bad.parse::<Grade>().is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn json_uses_fraction_strings() {
        let gs = vec![Grade::ONE, Grade::halving(1), Grade::ZERO];
        let s = serde_json::to_string(&gs).unwrap();
        assert_eq!(s, r#"["1","1/2","0"]"#);
        let back: Vec<Grade> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, gs);
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(q in 1u64..10_000, p in 0u64..10_000) {
            let g = Grade::new(p % (q + 1), q).unwrap();
            prop_assert_eq!(g.to_string().parse::<Grade>().unwrap(), g);
        }

        #[test]
        fn order_matches_cross_multiplication(a in 0u64..500, b in 1u64..500, c in 0u64..500, d in 1u64..500) {
            let x = Grade::new(a % (b + 1), b).unwrap();
            let y = Grade::new(c % (d + 1), d).unwrap();
            let lhs = (a % (b + 1)) as u128 * d as u128;
            let rhs = (c % (d + 1)) as u128 * b as u128;
            prop_assert_eq!(x.cmp(&y), lhs.cmp(&rhs));
        }
    }
}
