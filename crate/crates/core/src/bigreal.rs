//! Extended-precision reals and signed logarithms.
//!
//! [`BigReal`] is a thin wrapper over an MPFR float. Binary operations
//! run at the larger of the two operand precisions, so mixing a 128-bit
//! constant into a 512-bit computation never silently truncates the
//! result. [`LogValue`] carries partition-function sized quantities as
//! `sign · exp(log_abs)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};

/// Smallest precision a [`BigReal`] is ever created with.
pub const MIN_BITS: u32 = 64;
/// Working precision used when callers do not ask for one.
pub const DEFAULT_BITS: u32 = 256;

fn clamp_bits(bits: u32) -> u32 {
    bits.max(MIN_BITS)
}

#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigReal(Float);

impl BigReal {
    pub fn from_float(f: Float) -> Self {
        if f.prec() < MIN_BITS {
            let mut f = f;
            f.set_prec(MIN_BITS);
            Self(f)
        } else {
            Self(f)
        }
    }

    pub fn from_f64(v: f64, bits: u32) -> Self {
        Self(Float::with_val(clamp_bits(bits), v))
    }

    pub fn from_i64(v: i64, bits: u32) -> Self {
        Self(Float::with_val(clamp_bits(bits), v))
    }

    pub fn from_ratio(num: i64, den: i64, bits: u32) -> Self {
        Self(Float::with_val(clamp_bits(bits), Rational::from((num, den))))
    }

    pub fn from_rational(q: &Rational, bits: u32) -> Self {
        Self(Float::with_val(clamp_bits(bits), q))
    }

    pub fn zero(bits: u32) -> Self {
        Self::from_i64(0, bits)
    }

    pub fn one(bits: u32) -> Self {
        Self::from_i64(1, bits)
    }

    pub fn pi(bits: u32) -> Self {
        Self(Float::with_val(clamp_bits(bits), Constant::Pi))
    }

    /// `log(2π)`.
    pub fn ln_2pi(bits: u32) -> Self {
        let two_pi = Float::with_val(clamp_bits(bits), Constant::Pi) * 2u32;
        Self(two_pi.ln())
    }

    pub fn bits(&self) -> u32 {
        self.0.prec()
    }

    /// Rounds (or widens) to a new precision.
    pub fn with_bits(&self, bits: u32) -> Self {
        Self(Float::with_val(clamp_bits(bits), &self.0))
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        match self.0.cmp0() {
            Some(Ordering::Less) => -1,
            Some(Ordering::Greater) => 1,
            _ => 0,
        }
    }

    pub fn abs(&self) -> Self {
        Self(self.0.clone().abs())
    }

    pub fn ln(&self) -> Self {
        Self(self.0.clone().ln())
    }

    pub fn exp(&self) -> Self {
        Self(self.0.clone().exp())
    }

    pub fn sqrt(&self) -> Self {
        Self(self.0.clone().sqrt())
    }

    pub fn square(&self) -> Self {
        Self(self.0.clone().square())
    }

    pub fn recip(&self) -> Self {
        Self(self.0.clone().recip())
    }

    pub fn powi(&self, k: i32) -> Self {
        Self(self.0.clone().pow(k))
    }

    pub fn powf(&self, e: &BigReal) -> Self {
        let bits = self.bits().max(e.bits());
        Self(Float::with_val(bits, &self.0).pow(&e.0))
    }

    pub fn floor(&self) -> Self {
        Self(self.0.clone().floor())
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Number of decimal digits that round-trip this precision.
    pub fn decimal_digits(&self) -> usize {
        (f64::from(self.bits()) * std::f64::consts::LOG10_2).ceil() as usize + 2
    }

    /// Full-precision decimal rendering (round-trips through [`BigReal::parse`]).
    pub fn to_decimal(&self) -> String {
        self.0.to_string_radix(10, Some(self.decimal_digits()))
    }

    pub fn parse(s: &str, bits: u32) -> Result<Self> {
        let parsed = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Ok(Self(Float::with_val(clamp_bits(bits), parsed)))
    }
}

/// Serialised as a full-precision decimal string.
impl serde::Serialize for BigReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_decimal())
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({}, {} bits)", self.0.to_string_radix(10, Some(24)), self.bits())
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => f.write_str(&self.0.to_string_radix(10, Some(p.max(1)))),
            None => f.write_str(&self.to_decimal()),
        }
    }
}

macro_rules! big_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &BigReal) -> BigReal {
                let bits = self.bits().max(rhs.bits());
                BigReal(Float::with_val(bits, (&self.0).$m(&rhs.0)))
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &BigReal) -> BigReal {
                (&self).$m(rhs)
            }
        }
        impl $tr<BigReal> for &BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                self.$m(&rhs)
            }
        }
        impl $tr<f64> for &BigReal {
            type Output = BigReal;
            fn $m(self, rhs: f64) -> BigReal {
                BigReal(Float::with_val(self.bits(), (&self.0).$m(rhs)))
            }
        }
        impl $tr<f64> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: f64) -> BigReal {
                (&self).$m(rhs)
            }
        }
        impl $tr<i64> for &BigReal {
            type Output = BigReal;
            fn $m(self, rhs: i64) -> BigReal {
                BigReal(Float::with_val(self.bits(), (&self.0).$m(rhs)))
            }
        }
        impl $tr<i64> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: i64) -> BigReal {
                (&self).$m(rhs)
            }
        }
        impl $atr<&BigReal> for BigReal {
            fn $am(&mut self, rhs: &BigReal) {
                if rhs.bits() > self.bits() {
                    self.0.set_prec(rhs.bits());
                }
                self.0.$am(&rhs.0);
            }
        }
        impl $atr<BigReal> for BigReal {
            fn $am(&mut self, rhs: BigReal) {
                self.$am(&rhs);
            }
        }
        impl $atr<f64> for BigReal {
            fn $am(&mut self, rhs: f64) {
                self.0.$am(rhs);
            }
        }
        impl $atr<i64> for BigReal {
            fn $am(&mut self, rhs: i64) {
                self.0.$am(rhs);
            }
        }
    };
}

big_binop!(Add, add, AddAssign, add_assign);
big_binop!(Sub, sub, SubAssign, sub_assign);
big_binop!(Mul, mul, MulAssign, mul_assign);
big_binop!(Div, div, DivAssign, div_assign);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0.clone())
    }
}

impl PartialEq<f64> for BigReal {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for BigReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

/// Sums a sequence at a fixed precision.
pub fn sum<'a, I: IntoIterator<Item = &'a BigReal>>(items: I, bits: u32) -> BigReal {
    let mut acc = BigReal::zero(bits);
    for x in items {
        acc += x;
    }
    acc
}

/// A real number stored as `sign · exp(log_abs)`.
///
/// `sign == 0` means the value is exactly zero and `log_abs` is ignored.
#[derive(Clone, Debug)]
pub struct LogValue {
    pub sign: i8,
    pub log_abs: BigReal,
}

impl LogValue {
    pub fn zero(bits: u32) -> Self {
        Self { sign: 0, log_abs: BigReal::zero(bits) }
    }

    pub fn one(bits: u32) -> Self {
        Self { sign: 1, log_abs: BigReal::zero(bits) }
    }

    pub fn from_log(log_abs: BigReal) -> Self {
        Self { sign: 1, log_abs }
    }

    pub fn from_big(x: &BigReal) -> Self {
        match x.signum() {
            0 => Self::zero(x.bits()),
            s => Self { sign: s, log_abs: x.abs().ln() },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Back to linear scale; only sensible when the magnitude fits the exponent range.
    pub fn to_big(&self) -> BigReal {
        match self.sign {
            0 => BigReal::zero(self.log_abs.bits()),
            s => self.log_abs.exp() * i64::from(s),
        }
    }
}

impl Mul<&LogValue> for &LogValue {
    type Output = LogValue;
    fn mul(self, rhs: &LogValue) -> LogValue {
        if self.is_zero() || rhs.is_zero() {
            return LogValue::zero(self.log_abs.bits().max(rhs.log_abs.bits()));
        }
        LogValue { sign: self.sign * rhs.sign, log_abs: &self.log_abs + &rhs.log_abs }
    }
}

impl Div<&LogValue> for &LogValue {
    type Output = LogValue;
    /// Panics on division by an exact zero.
    fn div(self, rhs: &LogValue) -> LogValue {
        assert!(!rhs.is_zero(), "LogValue division by zero");
        if self.is_zero() {
            return self.clone();
        }
        LogValue { sign: self.sign * rhs.sign, log_abs: &self.log_abs - &rhs.log_abs }
    }
}

impl MulAssign<&LogValue> for LogValue {
    fn mul_assign(&mut self, rhs: &LogValue) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_precision_uses_the_wider_operand() {
        let a = BigReal::from_ratio(1, 3, 64);
        let b = BigReal::from_ratio(1, 3, 512);
        assert_eq!((&a + &b).bits(), 512);
        assert_eq!((&b * &a).bits(), 512);
        let mut c = a.clone();
        c += &b;
        assert_eq!(c.bits(), 512);
    }

    #[test]
    fn precision_never_drops_below_the_floor() {
        assert_eq!(BigReal::from_f64(1.5, 8).bits(), MIN_BITS);
    }

    #[test]
    fn decimal_round_trip_at_several_precisions() {
        for bits in [64u32, 113, 256, 700] {
            let x = BigReal::pi(bits) / 7.0 + BigReal::from_ratio(1, 3, bits).ln();
            let s = x.to_decimal();
            let y = BigReal::parse(&s, bits).unwrap();
            let diff = (&x - &y).abs();
            let ulp = x.abs() * BigReal::from_f64(2.0, bits).powi(-(bits as i32) + 1);
            assert!(diff <= ulp, "bits={bits}: {x:?} vs {y:?}");
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(BigReal::parse("1.2.3x", 128), Err(Error::Parse(_))));
    }

    #[test]
    fn log_value_multiplication_tracks_signs() {
        let a = LogValue::from_big(&BigReal::from_f64(-2.0, 128));
        let b = LogValue::from_big(&BigReal::from_f64(-3.0, 128));
        let p = &a * &b;
        assert_eq!(p.sign, 1);
        assert!((p.to_big().to_f64() - 6.0).abs() < 1e-15);
        let q = &a / &b;
        assert_eq!(q.sign, 1);
        assert!((q.to_big().to_f64() - 2.0 / 3.0).abs() < 1e-15);
        let z = LogValue::from_big(&BigReal::zero(128));
        assert!((&a * &z).is_zero());
    }
}
