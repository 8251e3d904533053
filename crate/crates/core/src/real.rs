//! Binary fixed-point reals: an integer mantissa over `2^bits`.
//!
//! Every value produced by the numeric code in this crate carries an absolute
//! error bound next to it, so a fixed number of fractional bits is all the
//! precision control needed. Multiplication and division truncate toward zero,
//! which keeps `-(a*b) == (-a)*b` exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Real {
    mant: BigInt,
    bits: u32,
}

fn shr_trunc(x: &BigInt, s: u32) -> BigInt {
    match x.sign() {
        Sign::Minus => -((-x) >> s),
        _ => x >> s,
    }
}

impl Real {
    pub fn zero(bits: u32) -> Self {
        Real { mant: BigInt::zero(), bits }
    }

    pub fn one(bits: u32) -> Self {
        Real { mant: BigInt::one() << bits, bits }
    }

    pub fn from_int(n: impl Into<BigInt>, bits: u32) -> Self {
        Real { mant: n.into() << bits, bits }
    }

    pub fn from_rational(r: &Rational, bits: u32) -> Self {
        let num: BigInt = r.numer() << bits;
        Real { mant: num / r.denom(), bits }
    }

    pub fn from_mantissa(mant: BigInt, bits: u32) -> Self {
        Real { mant, bits }
    }

    /// `1/n^p` for positive `n`.
    pub fn inv_pow(n: u64, p: u32, bits: u32) -> Self {
        let den = num_traits::pow(BigInt::from(n), p as usize);
        Real { mant: (BigInt::one() << bits) / den, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        Real { mant: self.mant.abs(), bits: self.bits }
    }

    /// Value of one unit in the last place.
    pub fn ulp(bits: u32) -> f64 {
        (-(bits as f64)).exp2()
    }

    /// Re-express at a different number of fractional bits (truncating).
    pub fn with_bits(&self, bits: u32) -> Self {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => Real { mant: &self.mant << (bits - self.bits), bits },
            Ordering::Less => Real { mant: shr_trunc(&self.mant, self.bits - bits), bits },
        }
    }

    fn aligned(&self, other: &Real) -> (BigInt, BigInt, u32) {
        if self.bits == other.bits {
            (self.mant.clone(), other.mant.clone(), self.bits)
        } else {
            let bits = self.bits.max(other.bits);
            (self.with_bits(bits).mant, other.with_bits(bits).mant, bits)
        }
    }

    pub fn mul_int(&self, n: impl Into<BigInt>) -> Self {
        Real { mant: &self.mant * n.into(), bits: self.bits }
    }

    pub fn div_int(&self, n: impl Into<BigInt>) -> Self {
        Real { mant: &self.mant / n.into(), bits: self.bits }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        Real { mant: (&self.mant * r.numer()) / r.denom(), bits: self.bits }
    }

    pub fn div(&self, other: &Real) -> Self {
        let (a, b, bits) = self.aligned(other);
        assert!(!b.is_zero(), "fixed-point division by zero");
        Real { mant: (a << bits) / b, bits }
    }

    pub fn recip(&self) -> Self {
        Real::one(self.bits).div(self)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Real::one(self.bits);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn shl(&self, s: u32) -> Self {
        Real { mant: &self.mant << s, bits: self.bits }
    }

    pub fn shr(&self, s: u32) -> Self {
        Real { mant: shr_trunc(&self.mant, s), bits: self.bits }
    }

    /// Square root of a non-negative value.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative value");
        Real { mant: (&self.mant << self.bits).sqrt(), bits: self.bits }
    }

    pub fn to_f64(&self) -> f64 {
        let len = self.mant.bits();
        if len <= 1000 {
            let m = self.mant.to_f64().unwrap_or(0.0);
            return m * (-(self.bits as f64)).exp2();
        }
        let shift = len - 60;
        let m = shr_trunc(&self.mant, shift as u32).to_f64().unwrap_or(0.0);
        m * ((shift as f64) - self.bits as f64).exp2()
    }

    /// Nearest rational with denominator `2^bits` (exact).
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mant.clone(), BigInt::one() << self.bits)
    }

    /// Decimal expansion rounded to `places` digits after the point.
    pub fn to_decimal(&self, places: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), places);
        let num = self.mant.abs() * scale;
        let den = BigInt::one() << self.bits;
        let (q, r) = num.div_rem(&den);
        let q = if r * 2 >= den { q + 1 } else { q };
        let mut digits = q.to_string();
        if digits.len() <= places {
            digits = "0".repeat(places + 1 - digits.len()) + &digits;
        }
        let split = digits.len() - places;
        let sign = if self.is_negative() && !q_is_zero(&digits) { "-" } else { "" };
        if places == 0 {
            format!("{sign}{digits}")
        } else {
            format!("{sign}{}.{}", &digits[..split], &digits[split..])
        }
    }

    /// Largest `e` with `2^e <= |self|`, or `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 - self.bits as i64)
        }
    }
}

fn q_is_zero(digits: &str) -> bool {
    digits.bytes().all(|b| b == b'0')
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = ((self.bits as f64) * std::f64::consts::LOG10_2) as usize;
        write!(f, "{}", self.to_decimal(places.min(60)))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = ((self.bits as f64) * std::f64::consts::LOG10_2) as usize;
        write!(f, "{}", self.to_decimal(f.precision().unwrap_or(places)))
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl<'a> Add<&'a Real> for &'a Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        if self.bits == rhs.bits {
            return Real { mant: &self.mant + &rhs.mant, bits: self.bits };
        }
        let (a, b, bits) = self.aligned(rhs);
        Real { mant: a + b, bits }
    }
}

impl<'a> Sub<&'a Real> for &'a Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        if self.bits == rhs.bits {
            return Real { mant: &self.mant - &rhs.mant, bits: self.bits };
        }
        let (a, b, bits) = self.aligned(rhs);
        Real { mant: a - b, bits }
    }
}

impl<'a> Mul<&'a Real> for &'a Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        let (a, b, bits) = if self.bits == rhs.bits {
            (self.mant.clone(), rhs.mant.clone(), self.bits)
        } else {
            self.aligned(rhs)
        };
        Real { mant: shr_trunc(&(a * b), bits), bits }
    }
}

impl Add for Real {
    type Output = Real;
    fn add(self, rhs: Real) -> Real {
        &self + &rhs
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, rhs: Real) -> Real {
        &self - &rhs
    }
}

impl Mul for Real {
    type Output = Real;
    fn mul(self, rhs: Real) -> Real {
        &self * &rhs
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mant: -self.mant, bits: self.bits }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mant: -&self.mant, bits: self.bits }
    }
}

impl AddAssign<&Real> for Real {
    fn add_assign(&mut self, rhs: &Real) {
        if self.bits == rhs.bits {
            self.mant += &rhs.mant;
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&Real> for Real {
    fn sub_assign(&mut self, rhs: &Real) {
        if self.bits == rhs.bits {
            self.mant -= &rhs.mant;
        } else {
            *self = &*self - rhs;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn decimal_rendering() {
        let x = Real::from_rational(&rat(1, 3), 128);
        assert_eq!(x.to_decimal(10), "0.3333333333");
        let y = Real::from_rational(&rat(-5, 4), 64);
        assert_eq!(y.to_decimal(3), "-1.250");
        assert_eq!(Real::from_rational(&rat(2, 3), 64).to_decimal(2), "0.67");
    }

    #[test]
    fn multiplication_is_sign_symmetric() {
        let a = Real::from_rational(&rat(7, 13), 100);
        let b = Real::from_rational(&rat(-11, 17), 100);
        assert_eq!(-(&a * &b), &(-&a) * &b);
        assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn sqrt_two() {
        let two = Real::from_int(2, 200);
        let s = two.sqrt();
        assert_eq!(s.to_decimal(40), "1.4142135623730950488016887242096980785697");
    }

    #[test]
    fn rescaling_and_f64() {
        let x = Real::from_rational(&rat(3, 8), 20);
        assert_eq!(x.with_bits(100).to_f64(), 0.375);
        assert_eq!(x.with_bits(2).to_f64(), 0.25);
        assert_eq!(x.ilog2(), Some(-2));
    }
}
