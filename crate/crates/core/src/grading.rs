//! Exact rational gradings.
//!
//! Maslov gradings in this crate are rationals (half-integers show up as soon
//! as a three-manifold has `b1 > 0`). They are stored as reduced fractions and
//! serialized as canonical fraction strings: `"0"`, `"-3/2"`, `"5"`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Grading(Ratio<i64>);

impl Grading {
    pub const ZERO: Grading = Grading(Ratio::new_raw(0, 1));

    pub fn new(numer: i64, denom: i64) -> Self {
        Grading(Ratio::new(numer, denom))
    }

    pub fn int(n: i64) -> Self {
        Grading(Ratio::from_integer(n))
    }

    pub fn half(n: i64) -> Self {
        Grading::new(n, 2)
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Returns the integer value if this grading is integral.
    pub fn to_integer(&self) -> Option<i64> {
        self.0.is_integer().then(|| self.0.to_integer())
    }

    pub fn abs(&self) -> Self {
        Grading(self.0.abs())
    }

    /// Fractional class in `[0, 1)`; two gradings are an even integer apart
    /// only if they share this class.
    pub fn frac(&self) -> Grading {
        let floor = self.0.floor();
        Grading(self.0 - floor)
    }

    /// `(self - other) / 2` when that is an integer.
    pub fn half_gap(&self, other: Grading) -> Option<i64> {
        let d = (self.0 - other.0) / Ratio::from_integer(2);
        d.is_integer().then(|| d.to_integer())
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Grading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("invalid grading {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<i64>().map(Grading::int).map_err(|_| bad()),
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Grading::new(p, q))
            }
        }
    }
}

impl Serialize for Grading {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Grading {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Grading {
    fn from(n: i64) -> Self {
        Grading::int(n)
    }
}

impl Add for Grading {
    type Output = Grading;
    fn add(self, rhs: Grading) -> Grading {
        Grading(self.0 + rhs.0)
    }
}

impl Sub for Grading {
    type Output = Grading;
    fn sub(self, rhs: Grading) -> Grading {
        Grading(self.0 - rhs.0)
    }
}

impl Neg for Grading {
    type Output = Grading;
    fn neg(self) -> Grading {
        Grading(-self.0)
    }
}

impl Mul<i64> for Grading {
    type Output = Grading;
    fn mul(self, rhs: i64) -> Grading {
        Grading(self.0 * rhs)
    }
}

impl Add<i64> for Grading {
    type Output = Grading;
    fn add(self, rhs: i64) -> Grading {
        Grading(self.0 + rhs)
    }
}

impl Sub<i64> for Grading {
    type Output = Grading;
    fn sub(self, rhs: i64) -> Grading {
        Grading(self.0 - rhs)
    }
}

impl AddAssign for Grading {
    fn add_assign(&mut self, rhs: Grading) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Grading {
    fn sub_assign(&mut self, rhs: Grading) {
        self.0 -= rhs.0;
    }
}
