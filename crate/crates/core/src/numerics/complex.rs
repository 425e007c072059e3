//! `PrecComplex`: a complex number carrying its working precision in decimal digits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use super::rational::ExactRational;
use super::NumericsError;

/// Guard digits added on top of the user-facing precision.
pub const GUARD_DIGITS: u32 = 10;
pub const MIN_DIGITS: u32 = 20;
pub const DEFAULT_DIGITS: u32 = 60;

/// Bits of mantissa used for `digits` decimal digits plus guard digits.
pub fn prec_bits(digits: u32) -> u32 {
    ((digits + GUARD_DIGITS) as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

#[derive(Clone, Debug)]
pub struct PrecComplex {
    z: Complex,
    digits: u32,
}

impl PrecComplex {
    pub fn from_complex(z: Complex, digits: u32) -> Self {
        let digits = digits.max(MIN_DIGITS);
        let bits = prec_bits(digits);
        let z = if z.prec() == (bits, bits) {
            z
        } else {
            Complex::with_val(bits, z)
        };
        PrecComplex { z, digits }
    }

    pub fn from_floats(re: Float, im: Float, digits: u32) -> Self {
        let bits = prec_bits(digits.max(MIN_DIGITS));
        Self::from_complex(Complex::with_val(bits, (re, im)), digits)
    }

    pub fn zero(digits: u32) -> Self {
        let bits = prec_bits(digits.max(MIN_DIGITS));
        Self::from_complex(Complex::new(bits), digits)
    }

    pub fn one(digits: u32) -> Self {
        Self::from_int(1, digits)
    }

    pub fn i(digits: u32) -> Self {
        let bits = prec_bits(digits.max(MIN_DIGITS));
        Self::from_complex(Complex::with_val(bits, (0, 1)), digits)
    }

    pub fn from_int(n: i64, digits: u32) -> Self {
        let bits = prec_bits(digits.max(MIN_DIGITS));
        Self::from_complex(Complex::with_val(bits, (n, 0)), digits)
    }

    pub fn from_rational(r: &ExactRational, digits: u32) -> Self {
        let bits = prec_bits(digits.max(MIN_DIGITS));
        Self::from_complex(Complex::with_val(bits, (r.as_rug(), 0)), digits)
    }

    pub fn from_f64(x: f64, digits: u32) -> Self {
        let bits = prec_bits(digits.max(MIN_DIGITS));
        Self::from_complex(Complex::with_val(bits, (x, 0.0)), digits)
    }

    pub fn pi(digits: u32) -> Self {
        let bits = prec_bits(digits.max(MIN_DIGITS));
        let p = Float::with_val(bits, Constant::Pi);
        Self::from_floats(p, Float::new(bits), digits)
    }

    /// 2πi
    pub fn two_pi_i(digits: u32) -> Self {
        let p = Self::pi(digits);
        (&p + &p).mul_i()
    }

    pub fn euler_gamma(digits: u32) -> Self {
        let bits = prec_bits(digits.max(MIN_DIGITS));
        let g = Float::with_val(bits, Constant::Euler);
        Self::from_floats(g, Float::new(bits), digits)
    }

    pub fn zeta_int(k: u32, digits: u32) -> Self {
        let bits = prec_bits(digits.max(MIN_DIGITS));
        let z = Float::with_val(bits, Float::zeta_u(k));
        Self::from_floats(z, Float::new(bits), digits)
    }

    /// Parses decimal strings for the two parts.
    pub fn parse(re: &str, im: &str, digits: u32) -> Result<Self, NumericsError> {
        let bits = prec_bits(digits.max(MIN_DIGITS));
        let pr = Float::parse(re).map_err(|_| NumericsError::Parse(re.to_string()))?;
        let pi = Float::parse(im).map_err(|_| NumericsError::Parse(im.to_string()))?;
        Ok(Self::from_floats(
            Float::with_val(bits, pr),
            Float::with_val(bits, pi),
            digits,
        ))
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> u32 {
        prec_bits(self.digits)
    }

    pub fn with_digits(&self, digits: u32) -> Self {
        Self::from_complex(self.z.clone(), digits)
    }

    pub fn as_complex(&self) -> &Complex {
        &self.z
    }

    pub fn re(&self) -> &Float {
        self.z.real()
    }

    pub fn im(&self) -> &Float {
        self.z.imag()
    }

    pub fn real_part(&self) -> PrecComplex {
        Self::from_floats(self.re().clone(), Float::new(self.bits()), self.digits)
    }

    pub fn imag_part(&self) -> PrecComplex {
        Self::from_floats(self.im().clone(), Float::new(self.bits()), self.digits)
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.bits(), self.z.abs_ref())
    }

    /// |z| as f64, saturating to 0 on underflow.
    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// log10|z|, -inf for zero; safe where f64 would underflow.
    pub fn log10_abs(&self) -> f64 {
        let a = self.abs();
        if a.is_zero() {
            return f64::NEG_INFINITY;
        }
        Float::with_val(64, a.log10_ref()).to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.re().is_zero() && self.im().is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re().is_finite() && self.im().is_finite()
    }

    pub fn conj(&self) -> Self {
        Self::from_complex(Complex::with_val(self.bits(), self.z.conj_ref()), self.digits)
    }

    pub fn mul_i(&self) -> Self {
        Self::from_complex(Complex::with_val(self.bits(), self.z.mul_i_ref(false)), self.digits)
    }

    pub fn recip(&self) -> Self {
        Self::from_complex(Complex::with_val(self.bits(), self.z.recip_ref()), self.digits)
    }

    pub fn exp(&self) -> Self {
        Self::from_complex(Complex::with_val(self.bits(), self.z.exp_ref()), self.digits)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Self::from_complex(Complex::with_val(self.bits(), self.z.ln_ref()), self.digits)
    }

    pub fn sqrt(&self) -> Self {
        Self::from_complex(Complex::with_val(self.bits(), self.z.sqrt_ref()), self.digits)
    }

    pub fn sin(&self) -> Self {
        Self::from_complex(Complex::with_val(self.bits(), self.z.sin_ref()), self.digits)
    }

    pub fn cos(&self) -> Self {
        Self::from_complex(Complex::with_val(self.bits(), self.z.cos_ref()), self.digits)
    }

    pub fn powi(&self, n: i32) -> Self {
        Self::from_complex(Complex::with_val(self.bits(), (&self.z).pow(n)), self.digits)
    }

    /// Principal power z^w.
    pub fn powc(&self, w: &PrecComplex) -> Self {
        let d = self.digits.min(w.digits);
        Self::from_complex(Complex::with_val(prec_bits(d), (&self.z).pow(&w.z)), d)
    }

    pub fn scale(&self, r: &ExactRational) -> Self {
        let q = Complex::with_val(self.bits(), (r.as_rug(), 0));
        Self::from_complex(Complex::with_val(self.bits(), &self.z * &q), self.digits)
    }

    pub fn scale_int(&self, n: i64) -> Self {
        Self::from_complex(Complex::with_val(self.bits(), &self.z * n), self.digits)
    }

    pub fn div_int(&self, n: i64) -> Self {
        Self::from_complex(Complex::with_val(self.bits(), &self.z / n), self.digits)
    }

    pub fn add_rational(&self, r: &ExactRational) -> Self {
        self + &Self::from_rational(r, self.digits)
    }

    /// |a - b| as f64.
    pub fn dist(&self, other: &PrecComplex) -> f64 {
        (self - other).abs_f64()
    }

    /// Relative distance |a-b| / max(|b|, tiny).
    pub fn rel_dist(&self, other: &PrecComplex) -> f64 {
        let d = (self - other).abs();
        let b = other.abs();
        if b.is_zero() {
            return d.to_f64();
        }
        Float::with_val(64, d / b).to_f64()
    }

    /// Decimal strings with `sig` significant digits.
    pub fn to_decimal(&self, sig: u32) -> (String, String) {
        (float_to_decimal(self.re(), sig), float_to_decimal(self.im(), sig))
    }
}

/// Scientific-notation decimal string with `sig` significant digits.
pub fn float_to_decimal(x: &Float, sig: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix(10, Some(sig.max(1) as usize));
    s.replace('@', "")
}

impl fmt::Display for PrecComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal(self.digits.min(25));
        write!(f, "({re}, {im})")
    }
}

impl PartialEq for PrecComplex {
    fn eq(&self, other: &Self) -> bool {
        self.z == other.z
    }
}

impl PartialOrd for PrecComplex {
    /// Compares real parts only when both imaginary parts vanish.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.im().is_zero() && other.im().is_zero() {
            self.re().partial_cmp(other.re())
        } else {
            None
        }
    }
}

macro_rules! cx_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<&PrecComplex> for &PrecComplex {
            type Output = PrecComplex;
            fn $m(self, rhs: &PrecComplex) -> PrecComplex {
                let d = self.digits.min(rhs.digits);
                PrecComplex::from_complex(
                    Complex::with_val(prec_bits(d), (&self.z).$m(&rhs.z)),
                    d,
                )
            }
        }
        impl $tr<PrecComplex> for PrecComplex {
            type Output = PrecComplex;
            fn $m(self, rhs: PrecComplex) -> PrecComplex {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&PrecComplex> for PrecComplex {
            type Output = PrecComplex;
            fn $m(self, rhs: &PrecComplex) -> PrecComplex {
                (&self).$m(rhs)
            }
        }
        impl $tr<PrecComplex> for &PrecComplex {
            type Output = PrecComplex;
            fn $m(self, rhs: PrecComplex) -> PrecComplex {
                self.$m(&rhs)
            }
        }
        impl $atr<&PrecComplex> for PrecComplex {
            fn $am(&mut self, rhs: &PrecComplex) {
                if rhs.digits < self.digits {
                    *self = (&*self).$m(rhs);
                } else {
                    self.z.$am(&rhs.z);
                }
            }
        }
        impl $atr<PrecComplex> for PrecComplex {
            fn $am(&mut self, rhs: PrecComplex) {
                self.$am(&rhs);
            }
        }
    };
}

cx_binop!(Add, add, AddAssign, add_assign);
cx_binop!(Sub, sub, SubAssign, sub_assign);
cx_binop!(Mul, mul, MulAssign, mul_assign);
cx_binop!(Div, div, DivAssign, div_assign);

impl Neg for PrecComplex {
    type Output = PrecComplex;
    fn neg(self) -> PrecComplex {
        PrecComplex { z: -self.z, digits: self.digits }
    }
}

impl Neg for &PrecComplex {
    type Output = PrecComplex;
    fn neg(self) -> PrecComplex {
        PrecComplex::from_complex(Complex::with_val(self.bits(), -&self.z), self.digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;

    #[test]
    fn min_digits_rule() {
        let a = PrecComplex::from_int(1, 80);
        let b = PrecComplex::from_int(2, 30);
        assert_eq!((&a + &b).digits(), 30);
        let mut c = a.clone();
        c *= &b;
        assert_eq!(c.digits(), 30);
    }

    #[test]
    fn parse_roundtrip() {
        let z = PrecComplex::from_rational(&rat(1, 3), 40);
        let (re, im) = z.to_decimal(40);
        let back = PrecComplex::parse(&re, &im, 40).unwrap();
        assert!(back.dist(&z) < 1e-39);
        assert_eq!(back.to_decimal(40), (re, im));
    }

    #[test]
    fn constants() {
        let p = PrecComplex::pi(50);
        assert!((p.abs_f64() - std::f64::consts::PI).abs() < 1e-15);
        let e = PrecComplex::two_pi_i(50).exp();
        assert!(e.dist(&PrecComplex::one(50)) < 1e-50);
    }
}
