//! Exact rational arithmetic.
//!
//! Values are `num/den` pairs of `i64` kept in lowest terms with a positive
//! denominator. All rule evaluations in this crate go through `Rat`; there is
//! no floating point anywhere, so comparisons (including the product
//! comparisons used by the guarded product rule) are bit-exact and
//! reproducible.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("rational literal `{0}` out of range")]
    OutOfRange(String),
}

/// A rational number in lowest terms, denominator strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rat {
    num: i64,
    den: i64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

fn reduce128(num: i128, den: i128) -> Rat {
    assert!(den != 0, "rational with zero denominator");
    let sign = if (num < 0) == (den < 0) { 1 } else { -1 };
    let (an, ad) = (num.unsigned_abs(), den.unsigned_abs());
    let g = {
        let mut a = an;
        let mut b = ad;
        while b != 0 {
            let t = b;
            b = a % b;
            a = t;
        }
        if a == 0 { 1 } else { a }
    };
    let num = i64::try_from(sign * (an / g) as i128).expect("rational overflow");
    let den = i64::try_from((ad / g) as i128).expect("rational overflow");
    Rat { num, den }
}

impl Rat {
    pub const ZERO: Rat = Rat { num: 0, den: 1 };
    pub const ONE: Rat = Rat { num: 1, den: 1 };

    /// Builds `num/den`, reducing to lowest terms. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "rational with zero denominator");
        let sign = if (num < 0) == (den < 0) { 1 } else { -1 };
        let (an, ad) = (num.unsigned_abs(), den.unsigned_abs());
        let g = gcd(an, ad).max(1);
        Rat {
            num: sign * (an / g) as i64,
            den: (ad / g) as i64,
        }
    }

    pub fn from_int(v: i64) -> Rat {
        Rat { num: v, den: 1 }
    }

    pub fn numer(self) -> i64 {
        self.num
    }

    pub fn denom(self) -> i64 {
        self.den
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    pub fn is_positive(self) -> bool {
        self.num > 0
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        // Denominators are positive, so cross-multiplication preserves order.
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, rhs: Rat) -> Rat {
        reduce128(
            self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Sub for Rat {
    type Output = Rat;
    fn sub(self, rhs: Rat) -> Rat {
        self + (-rhs)
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        reduce128(
            self.num as i128 * rhs.num as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat {
            num: -self.num,
            den: self.den,
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rat {
    type Err = RatParseError;

    /// Parses `p` or `p/q` with optional leading `-` on the numerator.
    fn from_str(s: &str) -> Result<Rat, RatParseError> {
        if s.is_empty() {
            return Err(RatParseError::Empty);
        }
        let bad = || RatParseError::Invalid(s.to_string());
        let (num_s, den_s) = match s.split_once('/') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let num: i64 = num_s.parse().map_err(|_| bad())?;
        let den: i64 = match den_s {
            Some(d) => {
                if d.starts_with('+') || d.starts_with('-') {
                    return Err(bad());
                }
                d.parse().map_err(|_| bad())?
            }
            None => 1,
        };
        if den == 0 {
            return Err(RatParseError::ZeroDenominator(s.to_string()));
        }
        // `new` only panics on den == 0, which is excluded above; i64::MIN
        // numerators still reduce through unsigned_abs without overflow.
        if num == i64::MIN || den == i64::MIN {
            return Err(RatParseError::OutOfRange(s.to_string()));
        }
        Ok(Rat::new(num, den))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "1", "-3", "1/2", "-7/3", "3/4"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        // Non-canonical inputs normalize.
        assert_eq!("2/4".parse::<Rat>().unwrap(), Rat::new(1, 2));
        assert_eq!("-2/4".parse::<Rat>().unwrap(), Rat::new(-1, 2));
        assert_eq!("4/2".parse::<Rat>().unwrap().to_string(), "2");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in [
            "", "/", "1/", "/2", "1/0", "a", "1/2/3", "1/-2", "0.5", "1 /2",
        ] {
            assert!(s.parse::<Rat>().is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn ordering_matches_cross_multiplication() {
        let half = Rat::new(1, 2);
        let third = Rat::new(1, 3);
        assert!(half > third);
        assert!(Rat::new(-1, 2) < Rat::ZERO);
        assert_eq!(Rat::new(2, 4), half);
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| Rat::new(n, d))
    }

    proptest! {
        #[test]
        fn add_commutes(a in arb_rat(), b in arb_rat()) {
            prop_assert_eq!(a + b, b + a);
        }

        #[test]
        fn mul_commutes_and_associates(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!((a * b) * c, a * (b * c));
        }

        #[test]
        fn order_is_total_and_transitive(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            prop_assert!(a <= b || b <= a);
            if a <= b && b <= c {
                prop_assert!(a <= c);
            }
        }

        #[test]
        fn display_round_trips(a in arb_rat()) {
            let s = a.to_string();
            prop_assert_eq!(s.parse::<Rat>().unwrap(), a);
        }

        #[test]
        fn sub_inverts_add(a in arb_rat(), b in arb_rat()) {
            prop_assert_eq!(a + b - b, a);
        }
    }
}
