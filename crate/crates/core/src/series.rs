//! Truncated formal power series over an exact coefficient field.
//!
//! A series of order `N` stores `c_0 ..= c_N` and is exact modulo `x^{N+1}`.
//! Binary operations return the smaller of the two operand orders and never
//! extend an order on their own.

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::{format_rational, PrimeFieldElem, Rational};
use crate::error::SeriesError;

/// Coefficient field of a series. The field value itself carries any
/// runtime parameters (the modulus for prime fields).
pub trait CoeffField: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, value: i64) -> Self::Elem;
    /// `None` when the rational has no image in the field.
    fn from_rational(&self, value: &Rational) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn characteristic(&self) -> u64;
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn descriptor(&self) -> Value;
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl CoeffField for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_i64(&self, value: i64) -> Rational {
        Rational::from_integer(value.into())
    }
    fn from_rational(&self, value: &Rational) -> Option<Rational> {
        Some(value.clone())
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn format_elem(&self, a: &Rational) -> String {
        a.to_string()
    }
    fn descriptor(&self) -> Value {
        json!({ "kind": "rational" })
    }
}

/// The field with `p` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        Self { p }
    }
}

impl CoeffField for PrimeField {
    type Elem = PrimeFieldElem;

    fn zero(&self) -> PrimeFieldElem {
        PrimeFieldElem::zero(self.p)
    }
    fn one(&self) -> PrimeFieldElem {
        PrimeFieldElem::one(self.p)
    }
    fn from_i64(&self, value: i64) -> PrimeFieldElem {
        PrimeFieldElem::new(value, self.p)
    }
    fn from_rational(&self, value: &Rational) -> Option<PrimeFieldElem> {
        PrimeFieldElem::from_rational(value, self.p)
    }
    fn add(&self, a: &PrimeFieldElem, b: &PrimeFieldElem) -> PrimeFieldElem {
        *a + *b
    }
    fn sub(&self, a: &PrimeFieldElem, b: &PrimeFieldElem) -> PrimeFieldElem {
        *a - *b
    }
    fn mul(&self, a: &PrimeFieldElem, b: &PrimeFieldElem) -> PrimeFieldElem {
        *a * *b
    }
    fn neg(&self, a: &PrimeFieldElem) -> PrimeFieldElem {
        -*a
    }
    fn inv(&self, a: &PrimeFieldElem) -> Option<PrimeFieldElem> {
        a.inv()
    }
    fn is_zero(&self, a: &PrimeFieldElem) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn format_elem(&self, a: &PrimeFieldElem) -> String {
        a.value().to_string()
    }
    fn descriptor(&self) -> Value {
        json!({ "kind": "prime", "p": self.p })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<F: CoeffField> {
    field: F,
    coeffs: Vec<F::Elem>,
}

pub type RationalSeries = TruncatedSeries<Rationals>;
pub type ModSeries = TruncatedSeries<PrimeField>;

impl<F: CoeffField> TruncatedSeries<F> {
    /// Builds a series of the given order, zero-padding or truncating `coeffs`.
    pub fn new(field: F, mut coeffs: Vec<F::Elem>, order: usize) -> Self {
        coeffs.resize(order + 1, field.zero());
        Self { field, coeffs }
    }

    pub fn from_ints(field: F, coeffs: &[i64], order: usize) -> Self {
        let elems = coeffs.iter().map(|&c| field.from_i64(c)).collect();
        Self::new(field, elems, order)
    }

    pub fn zero(field: F, order: usize) -> Self {
        Self::new(field, Vec::new(), order)
    }

    pub fn one(field: F, order: usize) -> Self {
        let one = field.one();
        Self::new(field, vec![one], order)
    }

    /// `c x^k`, which is zero when `k` exceeds the order.
    pub fn monomial(field: F, c: F::Elem, k: usize, order: usize) -> Self {
        let mut s = Self::zero(field, order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Option<&F::Elem> {
        self.coeffs.get(k)
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    /// Lowers the order; asking for a higher order is a no-op.
    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order());
        Self {
            field: self.field.clone(),
            coeffs: self.coeffs[..=keep].to_vec(),
        }
    }

    fn check_field(&self, other: &Self) -> Result<(), SeriesError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(SeriesError::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_field(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| self.field.add(&self.coeffs[k], &other.coeffs[k]))
            .collect();
        Ok(Self::new(self.field.clone(), coeffs, order))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_field(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| self.field.sub(&self.coeffs[k], &other.coeffs[k]))
            .collect();
        Ok(Self::new(self.field.clone(), coeffs, order))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.field.neg(c)).collect();
        Self::new(self.field.clone(), coeffs, self.order())
    }

    pub fn scale(&self, factor: &F::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.field.mul(c, factor)).collect();
        Self::new(self.field.clone(), coeffs, self.order())
    }

    /// Cauchy product, truncated to the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_field(other)?;
        let order = self.order().min(other.order());
        let f = &self.field;
        let mut out = vec![f.zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Ok(Self::new(f.clone(), out, order))
    }

    /// Multiplicative inverse modulo `x^{N+1}`.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let f = &self.field;
        let c0_inv = f.inv(&self.coeffs[0]).ok_or(SeriesError::ZeroConstantTerm)?;
        let order = self.order();
        let mut out: Vec<F::Elem> = Vec::with_capacity(order + 1);
        out.push(c0_inv.clone());
        for k in 1..=order {
            let mut acc = f.zero();
            for j in 1..=k {
                acc = f.add(&acc, &f.mul(&self.coeffs[j], &out[k - j]));
            }
            out.push(f.neg(&f.mul(&acc, &c0_inv)));
        }
        Ok(Self::new(f.clone(), out, order))
    }

    fn require_constant(&self, expected_one: bool) -> Result<(), SeriesError> {
        let f = &self.field;
        let c0 = &self.coeffs[0];
        let ok = if expected_one { *c0 == f.one() } else { f.is_zero(c0) };
        if ok {
            Ok(())
        } else {
            Err(SeriesError::ConstantTerm {
                expected: if expected_one { "1" } else { "0" },
            })
        }
    }

    fn inv_index(&self, k: usize) -> Result<F::Elem, SeriesError> {
        self.field
            .inv(&self.field.from_i64(k as i64))
            .ok_or(SeriesError::NotInvertible(k as u64))
    }

    /// Integer power by repeated squaring; negative exponents go through `inv`.
    pub fn pow_int(&self, exp: i64) -> Result<Self, SeriesError> {
        let mut base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one(self.field.clone(), self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `(1 + u)^r` as the binomial series, for a series with constant term 1.
    ///
    /// Fractional `r` uses the recurrence `k b_k = sum_j ((r+1) j - k) a_j b_{k-j}`
    /// and therefore needs characteristic zero.
    pub fn pow(&self, r: &Rational) -> Result<Self, SeriesError> {
        self.require_constant(true)?;
        if r.is_integer() {
            if let Some(e) = r.to_integer().to_i64() {
                return self.pow_int(e);
            }
        }
        if self.field.characteristic() != 0 {
            return Err(SeriesError::FractionalPowerOverPrimeField);
        }
        let f = &self.field;
        let r_elem = f.from_rational(r).ok_or(SeriesError::FractionalPowerOverPrimeField)?;
        let r_plus_one = f.add(&r_elem, &f.one());
        let order = self.order();
        let mut out = vec![f.one()];
        for k in 1..=order {
            let mut acc = f.zero();
            for j in 1..=k {
                let weight = f.sub(&f.mul(&r_plus_one, &f.from_i64(j as i64)), &f.from_i64(k as i64));
                acc = f.add(&acc, &f.mul(&weight, &f.mul(&self.coeffs[j], &out[k - j])));
            }
            out.push(f.mul(&acc, &self.inv_index(k)?));
        }
        Ok(Self::new(f.clone(), out, order))
    }

    /// Formal exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        self.require_constant(false)?;
        let f = &self.field;
        let order = self.order();
        let mut out = vec![f.one()];
        for k in 1..=order {
            let mut acc = f.zero();
            for j in 1..=k {
                let term = f.mul(&f.from_i64(j as i64), &f.mul(&self.coeffs[j], &out[k - j]));
                acc = f.add(&acc, &term);
            }
            out.push(f.mul(&acc, &self.inv_index(k)?));
        }
        Ok(Self::new(f.clone(), out, order))
    }

    /// Formal logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        self.require_constant(true)?;
        let f = &self.field;
        let order = self.order();
        let mut out = vec![f.zero()];
        for k in 1..=order {
            let mut acc = f.mul(&f.from_i64(k as i64), &self.coeffs[k]);
            for j in 1..k {
                let term = f.mul(&f.from_i64(j as i64), &f.mul(&out[j], &self.coeffs[k - j]));
                acc = f.sub(&acc, &term);
            }
            out.push(f.mul(&acc, &self.inv_index(k)?));
        }
        Ok(Self::new(f.clone(), out, order))
    }

    /// The operator `x d/dx`: `c_k -> k c_k`.
    pub fn xd(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| f.mul(&f.from_i64(k as i64), c))
            .collect();
        Self::new(f.clone(), coeffs, self.order())
    }

    /// Exact division by `x`; the order drops by one.
    pub fn div_x(&self) -> Result<Self, SeriesError> {
        if !self.field.is_zero(&self.coeffs[0]) {
            return Err(SeriesError::NotDivisibleByX);
        }
        if self.order() == 0 {
            // Nothing is known about the quotient beyond x^{-1}.
            return Err(SeriesError::NotDivisibleByX);
        }
        let coeffs = self.coeffs[1..].to_vec();
        let order = coeffs.len() - 1;
        Ok(Self::new(self.field.clone(), coeffs, order))
    }

    /// Multiplication by `x`; the order rises by one since the product is
    /// known exactly one degree further.
    pub fn mul_x(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(self.field.zero());
        coeffs.extend(self.coeffs.iter().cloned());
        let order = coeffs.len() - 1;
        Self::new(self.field.clone(), coeffs, order)
    }

    /// Horner evaluation of the stored coefficients.
    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.descriptor(),
            "order": self.order(),
            "coeffs": self.coeffs.iter().map(|c| self.field.format_elem(c)).collect::<Vec<_>>(),
        })
    }
}

impl RationalSeries {
    pub fn rational(coeffs: Vec<Rational>, order: usize) -> Self {
        Self::new(Rationals, coeffs, order)
    }

    /// Coefficients in the `"num/den"` wire form.
    pub fn to_wire(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

impl<F: CoeffField> fmt::Display for TruncatedSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            let text = self.field.format_elem(c);
            if k > 0 {
                write!(f, " + ")?;
            }
            let text = if text.starts_with('-') && k > 0 {
                format!("({text})")
            } else {
                text
            };
            match k {
                0 => write!(f, "{text}")?,
                1 => write!(f, "{text}*x")?,
                _ => write!(f, "{text}*x^{k}")?,
            }
        }
        write!(f, " (mod x^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{binom_exact, binom_generalized, rat, rat_int};
    use proptest::prelude::*;

    fn q(coeffs: &[i64], order: usize) -> RationalSeries {
        TruncatedSeries::from_ints(Rationals, coeffs, order)
    }

    fn fp(p: u64, coeffs: &[i64], order: usize) -> ModSeries {
        TruncatedSeries::from_ints(PrimeField::new(p), coeffs, order)
    }

    #[test]
    fn products() {
        assert_eq!(q(&[1, 1], 2).mul(&q(&[1, -1], 2)).unwrap(), q(&[1, 0, -1], 2));
        assert_eq!(q(&[1, 1, 1], 2).mul(&q(&[1], 2)).unwrap(), q(&[1, 1, 1], 2));
        assert_eq!(q(&[1, 2], 2).mul(&q(&[1, 3], 2)).unwrap(), q(&[1, 5, 6], 2));
    }

    #[test]
    fn binary_ops_take_min_order() {
        let s = q(&[1, 1, 1, 1], 3).add(&q(&[1], 1)).unwrap();
        assert_eq!(s.order(), 1);
        assert_eq!(s, q(&[2, 1], 1));
    }

    #[test]
    fn field_mismatch_is_rejected() {
        let a = fp(5, &[1, 1], 2);
        let b = fp(7, &[1, 1], 2);
        assert_eq!(a.mul(&b), Err(SeriesError::FieldMismatch));
        assert_eq!(a.add(&b), Err(SeriesError::FieldMismatch));
    }

    #[test]
    fn inverses() {
        assert_eq!(q(&[1, -1], 5).inv().unwrap(), q(&[1, 1, 1, 1, 1, 1], 5));
        assert_eq!(q(&[1], 0).inv().unwrap(), q(&[1], 0));
        assert_eq!(fp(7, &[1, -4], 3).inv().unwrap(), fp(7, &[1, 4, 2, 1], 3));
        assert_eq!(q(&[0, 1], 3).inv(), Err(SeriesError::ZeroConstantTerm));
    }

    #[test]
    fn binomial_series_powers() {
        let base = q(&[1, -4], 4);
        assert_eq!(base.pow(&rat(-1, 2)).unwrap(), q(&[1, 2, 6, 20, 70], 4));
        assert_eq!(base.truncate(3).pow(&rat(1, 2)).unwrap(), q(&[1, -2, -2, -4], 3));
        assert_eq!(base.pow(&rat_int(0)).unwrap(), q(&[1], 4));
        assert!(q(&[2, 1], 3).pow(&rat(1, 2)).is_err());
        assert_eq!(
            fp(7, &[1, -4], 3).pow(&rat(1, 2)),
            Err(SeriesError::FractionalPowerOverPrimeField)
        );
    }

    #[test]
    fn fractional_power_matches_binomial_sum() {
        // Independent route: sum_k C(r, k) u^k with u = 3x + x^2.
        let r = rat(-5, 3);
        let order = 6;
        let u = q(&[0, 3, 1], order);
        let mut expected = RationalSeries::zero(Rationals, order);
        let mut u_pow = RationalSeries::one(Rationals, order);
        for k in 0..=order as u64 {
            expected = expected.add(&u_pow.scale(&binom_generalized(&r, k))).unwrap();
            u_pow = u_pow.mul(&u).unwrap();
        }
        assert_eq!(q(&[1, 3, 1], order).pow(&r).unwrap(), expected);
    }

    #[test]
    fn central_binomials_from_inverse_square_root() {
        let s = q(&[1, -4], 39).pow(&rat(-1, 2)).unwrap();
        for (k, c) in s.coeffs().iter().enumerate() {
            let expected = Rational::from_integer(binom_exact(2 * k as u64, k as u64).into());
            assert_eq!(*c, expected, "k = {k}");
        }
    }

    #[test]
    fn exp_and_log() {
        assert_eq!(q(&[0], 3).exp().unwrap(), q(&[1], 3));
        let log = q(&[1, 1], 3).log().unwrap();
        assert_eq!(log.coeffs(), &[rat(0, 1), rat(1, 1), rat(-1, 2), rat(1, 3)]);
        let a = q(&[1, 1, 1], 2);
        assert_eq!(a.log().unwrap().exp().unwrap(), a);
        assert!(q(&[1, 1], 2).exp().is_err());
        assert!(q(&[2, 1], 2).log().is_err());
    }

    #[test]
    fn xd_examples() {
        assert_eq!(q(&[1, 1, 1], 2).xd(), q(&[0, 1, 2], 2));
        assert_eq!(q(&[7], 3).xd(), q(&[0], 3));
        let s = fp(5, &[1, 1, 1, 1, 1, 1], 5).xd();
        assert!(s.coeff(5).unwrap().is_zero());
        assert_eq!(s.coeff(4).unwrap().value(), 4);
    }

    #[test]
    fn div_x_examples() {
        assert_eq!(q(&[0, 1, 1], 2).div_x().unwrap(), q(&[1, 1], 1));
        assert_eq!(q(&[1, 1], 2).div_x(), Err(SeriesError::NotDivisibleByX));
        // (1 - sqrt(1 - 4x)) / 2x gives the Catalan numbers.
        let root = q(&[1, -4], 5).pow(&rat(1, 2)).unwrap();
        let catalan = q(&[1], 5).sub(&root).unwrap().div_x().unwrap().scale(&rat(1, 2));
        assert_eq!(catalan, q(&[1, 1, 2, 5, 14], 4));
    }

    #[test]
    fn frobenius_in_characteristic_p() {
        for p in [3u64, 5, 7] {
            for e in 1..=3u32 {
                let qq = p.pow(e);
                let order = qq as usize;
                let lhs = fp(p, &[1, -4], order).pow_int(qq as i64).unwrap();
                let rhs = ModSeries::one(PrimeField::new(p), order)
                    .sub(&ModSeries::monomial(
                        PrimeField::new(p),
                        PrimeFieldElem::new(4, p),
                        order,
                        order,
                    ))
                    .unwrap();
                assert_eq!(lhs, rhs, "q = {qq}");
            }
        }
    }

    #[test]
    fn display_form() {
        let s = q(&[1, -2, 3], 2);
        assert_eq!(s.to_string(), "1 + (-2)*x + 3*x^2 (mod x^3)");
        let json = fp(5, &[1, 2], 1).to_json();
        assert_eq!(json["coeffs"], json!(["1", "2"]));
        assert_eq!(json["field"]["p"], json!(5));
    }

    fn arb_series(order: usize) -> impl Strategy<Value = RationalSeries> {
        prop::collection::vec((-20i64..20, 1i64..6), order + 1).prop_map(move |v| {
            let coeffs = v.into_iter().map(|(n, d)| rat(n, d)).collect();
            RationalSeries::rational(coeffs, order)
        })
    }

    fn with_unit_constant(s: RationalSeries) -> RationalSeries {
        let mut coeffs = s.into_coeffs();
        coeffs[0] = Rational::one();
        let order = coeffs.len() - 1;
        RationalSeries::rational(coeffs, order)
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(s in arb_series(6)) {
            prop_assume!(!s.coeffs()[0].is_zero());
            let prod = s.mul(&s.inv().unwrap()).unwrap();
            prop_assert_eq!(prod, RationalSeries::one(Rationals, 6));
        }

        #[test]
        fn powers_add(s in arb_series(5), r in (-6i64..6, 1i64..4), t in (-6i64..6, 1i64..4)) {
            let a = with_unit_constant(s);
            let (r, t) = (rat(r.0, r.1), rat(t.0, t.1));
            let lhs = a.pow(&r).unwrap().mul(&a.pow(&t).unwrap()).unwrap();
            prop_assert_eq!(lhs, a.pow(&(r + t)).unwrap());
        }

        #[test]
        fn xd_is_a_derivation(a in arb_series(6), b in arb_series(6)) {
            let lhs = a.mul(&b).unwrap().xd();
            let rhs = a.xd().mul(&b).unwrap().add(&a.mul(&b.xd()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exp_log_round_trip(s in arb_series(6)) {
            let a = with_unit_constant(s);
            prop_assert_eq!(a.log().unwrap().exp().unwrap(), a);
        }
    }
}
