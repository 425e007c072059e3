//! Exact rationals for exponents and series coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::NumericsError;

/// Rational number kept in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExactRational(Rational);

impl ExactRational {
    pub fn new(num: i64, den: i64) -> Result<Self, NumericsError> {
        if den == 0 {
            return Err(NumericsError::ZeroDenominator);
        }
        Ok(ExactRational(Rational::from((num, den))))
    }

    pub fn from_int(n: i64) -> Self {
        ExactRational(Rational::from(n))
    }

    pub fn zero() -> Self {
        ExactRational(Rational::new())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_rug(r: Rational) -> Self {
        ExactRational(r)
    }

    pub fn as_rug(&self) -> &Rational {
        &self.0
    }

    pub fn into_rug(self) -> Rational {
        self.0
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }

    /// Integer value when the rational is integral and fits an i64.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn floor(&self) -> Integer {
        self.0.clone().floor().into_numer_denom().0
    }

    /// Fractional part in [0, 1).
    pub fn fract(&self) -> ExactRational {
        let f = Rational::from(self.floor());
        ExactRational(Rational::from(&self.0 - &f))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn abs(&self) -> ExactRational {
        ExactRational(self.0.clone().abs())
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp0() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn recip(&self) -> Result<ExactRational, NumericsError> {
        if self.is_zero() {
            return Err(NumericsError::ZeroDenominator);
        }
        Ok(ExactRational(self.0.clone().recip()))
    }

    /// r reduced into [0, 2).
    pub fn mod_two(&self) -> ExactRational {
        let half = ExactRational(Rational::from(&self.0 / 2u32));
        let f = half.fract();
        ExactRational(f.0 * 2u32)
    }

    pub fn pow(&self, e: u32) -> ExactRational {
        let mut acc = Rational::from(1);
        for _ in 0..e {
            acc *= &self.0;
        }
        ExactRational(acc)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = NumericsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || NumericsError::Parse(s.to_string());
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n = Integer::from_str(n).map_err(|_| bad())?;
        let d = Integer::from_str(d).map_err(|_| bad())?;
        if d == 0 {
            return Err(NumericsError::ZeroDenominator);
        }
        Ok(ExactRational(Rational::from((n, d))))
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PartialOrd for ExactRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &ExactRational) -> ExactRational {
                ExactRational(Rational::from((&self.0).$m(&rhs.0)))
            }
        }
        impl $tr<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$m(rhs.0))
            }
        }
        impl $tr<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &ExactRational) -> ExactRational {
                ExactRational(self.0.$m(&rhs.0))
            }
        }
        impl $tr<i64> for &ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: i64) -> ExactRational {
                ExactRational(Rational::from((&self.0).$m(rhs)))
            }
        }
        impl $tr<i64> for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: i64) -> ExactRational {
                ExactRational(self.0.$m(rhs))
            }
        }
        impl $atr<&ExactRational> for ExactRational {
            fn $am(&mut self, rhs: &ExactRational) {
                self.0.$am(&rhs.0);
            }
        }
        impl $atr<ExactRational> for ExactRational {
            fn $am(&mut self, rhs: ExactRational) {
                self.0.$am(rhs.0);
            }
        }
    };
}

rat_binop!(Add, add, AddAssign, add_assign);
rat_binop!(Sub, sub, SubAssign, sub_assign);
rat_binop!(Mul, mul, MulAssign, mul_assign);

impl Div<&ExactRational> for &ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: &ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "rational division by zero");
        ExactRational(Rational::from(&self.0 / &rhs.0))
    }
}

impl Div<ExactRational> for ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: ExactRational) -> ExactRational {
        &self / &rhs
    }
}

impl Div<i64> for &ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: i64) -> ExactRational {
        assert!(rhs != 0, "rational division by zero");
        ExactRational(Rational::from(&self.0 / rhs))
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(Rational::from(-&self.0))
    }
}

/// Shorthand used all over the crate and its tests.
pub fn rat(num: i64, den: i64) -> ExactRational {
    ExactRational::new(num, den).expect("nonzero denominator")
}
