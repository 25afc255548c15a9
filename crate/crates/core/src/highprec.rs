//! Binary fixed-point reals and complexes on top of `BigInt`.
//!
//! A [`HighPrecReal`] with precision `P` is `mantissa / 2^P`. The absolute
//! error of every primitive operation is at most one unit in the last place;
//! magnitude is unbounded, so values such as `4^n` are represented without
//! loss.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{ComplexRational, Rational};

const GUARD_BITS: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighPrecReal {
    mantissa: BigInt,
    precision: u32,
}

fn round_shift(value: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return value.clone();
    }
    let half = BigInt::one() << (bits - 1);
    (value + half) >> bits
}

fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (den, num) = if den.is_negative() {
        (-den, -num)
    } else {
        (den.clone(), num.clone())
    };
    let twice_num: BigInt = (num << 1) + &den;
    let twice_den: BigInt = den << 1;
    twice_num.div_floor(&twice_den)
}

impl HighPrecReal {
    pub fn from_mantissa(mantissa: BigInt, precision: u32) -> Self {
        Self { mantissa, precision }
    }

    pub fn zero(precision: u32) -> Self {
        Self::from_mantissa(BigInt::zero(), precision)
    }

    pub fn from_int(value: &BigInt, precision: u32) -> Self {
        Self::from_mantissa(value << precision, precision)
    }

    pub fn from_i64(value: i64, precision: u32) -> Self {
        Self::from_int(&BigInt::from(value), precision)
    }

    pub fn from_rational(value: &Rational, precision: u32) -> Self {
        Self::from_mantissa(round_div(&(value.numer() << precision), value.denom()), precision)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    /// Re-expresses the value at another precision.
    pub fn with_precision(&self, precision: u32) -> Self {
        let mantissa = match precision.cmp(&self.precision) {
            Ordering::Equal => self.mantissa.clone(),
            Ordering::Greater => &self.mantissa << (precision - self.precision),
            Ordering::Less => round_shift(&self.mantissa, self.precision - precision),
        };
        Self::from_mantissa(mantissa, precision)
    }

    /// `pi`, via Machin's formula with guard bits.
    pub fn pi(precision: u32) -> Self {
        let work = precision + GUARD_BITS;
        let atan_inv = |k: u64| -> BigInt {
            let k = BigInt::from(k);
            let k2 = &k * &k;
            let mut power = (BigInt::one() << work) / &k;
            let mut sum = BigInt::zero();
            let mut i = 0u64;
            while !power.is_zero() {
                let term = &power / BigInt::from(2 * i + 1);
                if i % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
                power /= &k2;
                i += 1;
            }
            sum
        };
        let pi = atan_inv(5) * 16 - atan_inv(239) * 4;
        Self::from_mantissa(round_shift(&pi, GUARD_BITS), precision)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self::from_mantissa(self.mantissa.abs(), self.precision)
    }

    pub fn neg(&self) -> Self {
        Self::from_mantissa(-&self.mantissa, self.precision)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.precision, other.precision, "mixed precisions");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        Self::from_mantissa(&self.mantissa + &other.mantissa, self.precision)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        Self::from_mantissa(&self.mantissa - &other.mantissa, self.precision)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let prod = &self.mantissa * &other.mantissa;
        Self::from_mantissa(round_shift(&prod, self.precision), self.precision)
    }

    /// Panics on division by zero.
    pub fn div(&self, other: &Self) -> Self {
        self.check(other);
        assert!(!other.is_zero(), "division by zero");
        let num = &self.mantissa << self.precision;
        Self::from_mantissa(round_div(&num, &other.mantissa), self.precision)
    }

    /// Multiplies by an exact rational, rounding once.
    pub fn mul_rational(&self, factor: &Rational) -> Self {
        let num = &self.mantissa * factor.numer();
        Self::from_mantissa(round_div(&num, factor.denom()), self.precision)
    }

    /// Square root, truncated; panics for negative input.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative number");
        let shifted: BigInt = (&self.mantissa << (self.precision + 2 * GUARD_BITS)).sqrt();
        Self::from_mantissa(round_shift(&shifted, GUARD_BITS), self.precision)
    }

    pub fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::from_i64(1, self.precision);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mantissa.bits();
        // Keep 64 significant bits before converting so tiny values survive.
        let drop = bits.saturating_sub(64);
        let top = (&self.mantissa >> drop).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(drop as i32 - self.precision as i32)
    }

    /// Decimal digits that the precision can support.
    pub fn significant_digits(&self) -> usize {
        ((self.precision as f64) * std::f64::consts::LOG10_2).floor() as usize
    }

    /// Scientific notation with `digits` significant digits, e.g. `1.2500e-3`.
    pub fn to_sci_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return format!("0.{}e0", "0".repeat(digits - 1));
        }
        let magnitude = self.mantissa.abs();
        let log2 = magnitude.bits() as f64 - self.precision as f64;
        let mut exp10 = (log2 * std::f64::consts::LOG10_2).floor() as i64 - 1;
        loop {
            let shift = digits as i64 - 1 - exp10;
            let scaled = if shift >= 0 {
                round_shift(
                    &(&magnitude * num_traits::pow(BigInt::from(10), shift as usize)),
                    self.precision,
                )
            } else {
                let den = num_traits::pow(BigInt::from(10), (-shift) as usize) << self.precision;
                round_div(&magnitude, &den)
            };
            let text = scaled.to_string();
            match text.len().cmp(&digits) {
                Ordering::Greater => exp10 += 1,
                Ordering::Less => exp10 -= 1,
                Ordering::Equal => {
                    let sign = if self.is_negative() { "-" } else { "" };
                    let (head, tail) = text.split_at(1);
                    return if tail.is_empty() {
                        format!("{sign}{head}e{exp10}")
                    } else {
                        format!("{sign}{head}.{tail}e{exp10}")
                    };
                }
            }
        }
    }
}

impl PartialOrd for HighPrecReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.precision == other.precision).then(|| self.mantissa.cmp(&other.mantissa))
    }
}

impl fmt::Display for HighPrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(|| self.significant_digits().min(40));
        write!(f, "{}", self.to_sci_string(digits))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighPrecComplex {
    pub re: HighPrecReal,
    pub im: HighPrecReal,
}

impl HighPrecComplex {
    pub fn new(re: HighPrecReal, im: HighPrecReal) -> Self {
        assert_eq!(re.precision, im.precision, "mixed precisions");
        Self { re, im }
    }

    pub fn from_real(re: HighPrecReal) -> Self {
        let im = HighPrecReal::zero(re.precision);
        Self { re, im }
    }

    pub fn from_rational(value: &ComplexRational, precision: u32) -> Self {
        Self::new(
            HighPrecReal::from_rational(&value.re, precision),
            HighPrecReal::from_rational(&value.im, precision),
        )
    }

    pub fn precision(&self) -> u32 {
        self.re.precision
    }

    pub fn to_string_digits(&self, digits: usize) -> String {
        format!("{:.*}", digits, self)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.re.add(&other.re), self.im.add(&other.im))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.re.sub(&other.re), self.im.sub(&other.im))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        )
    }

    pub fn scale(&self, factor: &HighPrecReal) -> Self {
        Self::new(self.re.mul(factor), self.im.mul(factor))
    }

    pub fn norm_sqr(&self) -> HighPrecReal {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> HighPrecReal {
        self.norm_sqr().sqrt()
    }

    pub fn div(&self, other: &Self) -> Self {
        let den = other.norm_sqr();
        let re = self.re.mul(&other.re).add(&self.im.mul(&other.im));
        let im = self.im.mul(&other.re).sub(&self.re.mul(&other.im));
        Self::new(re.div(&den), im.div(&den))
    }

    /// Principal square root: nonnegative real part, and for negative reals
    /// the root on the positive imaginary axis.
    pub fn sqrt(&self) -> Self {
        let r = self.abs();
        let half = Rational::new(1.into(), 2.into());
        let re = r.add(&self.re).mul_rational(&half);
        let im = r.sub(&self.re).mul_rational(&half);
        let re = if re.is_negative() {
            HighPrecReal::zero(re.precision)
        } else {
            re.sqrt()
        };
        let im = if im.is_negative() {
            HighPrecReal::zero(im.precision)
        } else {
            im.sqrt()
        };
        let im = if self.im.mantissa.sign() == Sign::Minus {
            im.neg()
        } else {
            im
        };
        Self::new(re, im)
    }
}

impl fmt::Display for HighPrecComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(|| self.re.significant_digits().min(40));
        if self.im.is_zero() {
            write!(f, "{}", self.re.to_sci_string(digits))
        } else {
            let (sign, im) = if self.im.is_negative() {
                ("-", self.im.neg())
            } else {
                ("+", self.im.clone())
            };
            write!(
                f,
                "{} {sign} {}i",
                self.re.to_sci_string(digits),
                im.to_sci_string(digits)
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn pi_digits() {
        let pi = HighPrecReal::pi(256);
        assert_eq!(
            pi.to_sci_string(50),
            "3.1415926535897932384626433832795028841971693993751e0"
        );
    }

    #[test]
    fn sqrt_two() {
        let two = HighPrecReal::from_i64(2, 200);
        assert_eq!(two.sqrt().to_sci_string(30), "1.41421356237309504880168872421e0");
    }

    #[test]
    fn rational_round_trip_is_within_one_ulp() {
        let x = HighPrecReal::from_rational(&rat(1, 3), 128);
        let back = x.mul(&HighPrecReal::from_i64(3, 128));
        let one = HighPrecReal::from_i64(1, 128);
        assert!(back.sub(&one).mantissa().abs() <= BigInt::from(2));
    }

    #[test]
    fn sci_formatting() {
        assert_eq!(
            HighPrecReal::from_rational(&rat(1, 800), 128).to_sci_string(3),
            "1.25e-3"
        );
        assert_eq!(HighPrecReal::from_i64(-42, 64).to_sci_string(2), "-4.2e1");
        assert_eq!(HighPrecReal::from_i64(0, 64).to_sci_string(3), "0.00e0");
        let big = HighPrecReal::from_int(&num_traits::pow(BigInt::from(4), 1000), 64);
        assert!(big.to_sci_string(5).ends_with("e602"));
    }

    #[test]
    fn to_f64_handles_small_values() {
        let tiny = HighPrecReal::from_rational(&rat(1, 1 << 40), 512);
        assert!((tiny.to_f64() - 2f64.powi(-40)).abs() < 1e-25);
        assert!((HighPrecReal::from_rational(&rat(-7, 4), 64).to_f64() + 1.75).abs() < 1e-15);
    }

    #[test]
    fn complex_square_roots() {
        let prec = 128;
        let minus_four = HighPrecComplex::from_rational(&ComplexRational::real(rat(-4, 1)), prec);
        let root = minus_four.sqrt();
        assert!(root.re.to_f64().abs() < 1e-30);
        assert!((root.im.to_f64() - 2.0).abs() < 1e-30);
        // 1 - i has principal root with positive real part and negative imaginary part.
        let z = HighPrecComplex::from_rational(&ComplexRational::new(rat(1, 1), rat(-1, 1)), prec);
        let w = z.sqrt();
        assert!(w.re.to_f64() > 0.0 && w.im.to_f64() < 0.0);
        let back = w.mul(&w).sub(&z);
        assert!(back.abs().to_f64() < 1e-30);
    }

    #[test]
    fn complex_division() {
        let prec = 128;
        let a = HighPrecComplex::from_rational(&ComplexRational::new(rat(1, 1), rat(2, 1)), prec);
        let b = HighPrecComplex::from_rational(&ComplexRational::new(rat(3, 1), rat(-1, 1)), prec);
        let q = a.div(&b).mul(&b).sub(&a);
        assert!(q.abs().to_f64() < 1e-30);
    }
}
