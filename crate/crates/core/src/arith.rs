//! Exact integer and rational arithmetic plus the number-theoretic
//! primitives used by the rest of the crate: binomial coefficients,
//! Bernoulli numbers, Lucas reduction and Jacobi symbols.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ArithError;

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Serializes a rational as `"num/den"`, always including the denominator.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `"a/b"`, `"a"` or a plain decimal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational, ArithError> {
    let text = text.trim();
    let bad = || ArithError::Parse(text.to_string());
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let mut num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(num, den));
    }
    BigInt::from_str(text).map(Rational::from_integer).map_err(|_| bad())
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binom_exact(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Generalized binomial coefficient `a (a-1) ... (a-k+1) / k!`.
pub fn binom_generalized(a: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut factor = a.clone();
    for i in 1..=k {
        acc = acc * &factor / rat_int(i as i64);
        factor -= Rational::one();
    }
    acc
}

/// Bernoulli numbers `B_0 ..= B_max` with `B_1 = -1/2`, from the recurrence
/// `sum_{j=0}^{m} C(m+1, j) B_j = 0`.
pub fn bernoulli_table(max: usize) -> Vec<Rational> {
    let mut table: Vec<Rational> = Vec::with_capacity(max + 1);
    table.push(Rational::one());
    for m in 1..=max {
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            let c = binom_exact(m as u64 + 1, j as u64);
            acc += b * Rational::from_integer(c.into());
        }
        table.push(-acc / rat_int(m as i64 + 1));
    }
    table
}

pub fn bernoulli(k: usize) -> Rational {
    bernoulli_table(k).pop().unwrap_or_else(Rational::one)
}

/// Jacobi symbol `(a | n)` for odd positive `n`.
pub fn jacobi(a: i64, n: i64) -> Result<i8, ArithError> {
    if n <= 0 || n % 2 == 0 {
        return Err(ArithError::JacobiModulus(n));
    }
    let mut a = a.rem_euclid(n) as u64;
    let mut n = n as u64;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// `(q | 3)`: 0 if 3 divides q, otherwise +1 or -1 according to q mod 3.
pub fn legendre_q_mod3(q: &PrimePower) -> i8 {
    match q.q() % 3 {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &w in &WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Element of the prime field with `p` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeFieldElem {
    value: u64,
    p: u64,
}

impl PrimeFieldElem {
    pub fn new(value: i64, p: u64) -> Self {
        Self {
            value: value.rem_euclid(p as i64) as u64,
            p,
        }
    }

    pub fn from_u64(value: u64, p: u64) -> Self {
        Self { value: value % p, p }
    }

    pub fn zero(p: u64) -> Self {
        Self { value: 0, p }
    }

    pub fn one(p: u64) -> Self {
        Self { value: 1 % p, p }
    }

    /// Reduces `num / den`; `None` when `p` divides the denominator.
    pub fn from_rational(value: &Rational, p: u64) -> Option<Self> {
        let reduce = |x: &BigInt| -> u64 { x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64") };
        let num = Self::from_u64(reduce(value.numer()), p);
        let den = Self::from_u64(reduce(value.denom()), p);
        den.inv().map(|inv| num * inv)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(&self, exp: u64) -> Self {
        Self {
            value: pow_mod(self.value, exp, self.p),
            p: self.p,
        }
    }

    /// Inverse via Fermat; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.p - 2))
        }
    }

    /// Lifts to the symmetric representative in `(-p/2, p/2]`.
    pub fn signed(&self) -> i64 {
        if self.value > self.p / 2 {
            self.value as i64 - self.p as i64
        } else {
            self.value as i64
        }
    }
}

impl fmt::Display for PrimeFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.p)
    }
}

impl FromStr for PrimeFieldElem {
    type Err = ArithError;

    /// Parses `"v mod p"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::Parse(s.to_string());
        let (v, p) = s.split_once("mod").ok_or_else(bad)?;
        let v: i64 = v.trim().parse().map_err(|_| bad())?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        Ok(Self::new(v, p))
    }
}

impl Add for PrimeFieldElem {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Self::from_u64(self.value + rhs.value, self.p)
    }
}

impl Sub for PrimeFieldElem {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Self::from_u64(self.value + self.p - rhs.value, self.p)
    }
}

impl Mul for PrimeFieldElem {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Self {
            value: mul_mod(self.value, rhs.value, self.p),
            p: self.p,
        }
    }
}

impl Neg for PrimeFieldElem {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_u64(self.p - self.value, self.p)
    }
}

/// A prime power `q = p^e` with `e >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u64,
    e: u32,
    q: u64,
}

impl PrimePower {
    pub fn new(p: u64, e: u32) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if e == 0 {
            return Err(ArithError::NotPrimePower(1));
        }
        let q = p.checked_pow(e).ok_or(ArithError::Overflow)?;
        Ok(Self { p, e, q })
    }

    /// Factors `q` as a prime power, rejecting anything else.
    pub fn from_q(q: u64) -> Result<Self, ArithError> {
        if q < 2 {
            return Err(ArithError::NotPrimePower(q));
        }
        let p = smallest_prime_factor(q);
        let mut rest = q;
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(ArithError::NotPrimePower(q));
        }
        Ok(Self { p, e, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.e)
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    if is_prime(n) {
        return n;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

/// All prime powers `q` with `2 <= q < bound`, in increasing order.
pub fn prime_powers_below(bound: u64) -> Vec<PrimePower> {
    (2..bound).filter_map(|q| PrimePower::from_q(q).ok()).collect()
}

fn digit_binom_mod_p(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = mul_mod(num, n - i, p);
        den = mul_mod(den, i + 1, p);
    }
    mul_mod(num, pow_mod(den, p - 2, p), p)
}

/// `C(n, k) mod p` by Lucas' theorem on base-p digits.
pub fn lucas_binom_mod_p(mut n: u64, mut k: u64, p: u64) -> PrimeFieldElem {
    let mut acc = 1 % p;
    while k > 0 || n > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return PrimeFieldElem::zero(p);
        }
        acc = mul_mod(acc, digit_binom_mod_p(nd, kd, p), p);
        n /= p;
        k /= p;
    }
    PrimeFieldElem::from_u64(acc, p)
}

/// Lucas reduction with factorial tables mod `p`, for repeated queries
/// against one modulus.
#[derive(Clone, Debug)]
pub struct LucasTable {
    p: u64,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

impl LucasTable {
    pub fn new(p: u64) -> Self {
        let size = p as usize;
        let mut fact = vec![1 % p; size];
        for i in 1..size {
            fact[i] = mul_mod(fact[i - 1], i as u64, p);
        }
        let mut inv_fact = vec![1 % p; size];
        inv_fact[size - 1] = pow_mod(fact[size - 1], p - 2, p);
        for i in (1..size).rev() {
            inv_fact[i - 1] = mul_mod(inv_fact[i], i as u64, p);
        }
        Self { p, fact, inv_fact }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn binom(&self, mut n: u64, mut k: u64) -> PrimeFieldElem {
        let p = self.p;
        let mut acc = 1 % p;
        while k > 0 {
            let (nd, kd) = ((n % p) as usize, (k % p) as usize);
            if kd > nd {
                return PrimeFieldElem::zero(p);
            }
            acc = mul_mod(acc, self.fact[nd], p);
            acc = mul_mod(acc, self.inv_fact[kd], p);
            acc = mul_mod(acc, self.inv_fact[nd - kd], p);
            n /= p;
            k /= p;
        }
        PrimeFieldElem::from_u64(acc, p)
    }
}

/// Exact complex number with rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexRational {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self {
            re,
            im: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(&self.re * factor, &self.im * factor)
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Parses `"a/b"` (real) or `"re,im"` with each part a rational.
    pub fn parse(text: &str) -> Result<Self, ArithError> {
        match text.split_once(',') {
            Some((re, im)) => Ok(Self::new(parse_rational(re)?, parse_rational(im)?)),
            None => Ok(Self::real(parse_rational(text)?)),
        }
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, -&self.im)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl<'a> Add<&'a ComplexRational> for &'a ComplexRational {
    type Output = ComplexRational;
    fn add(self, rhs: Self) -> ComplexRational {
        ComplexRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a ComplexRational> for &'a ComplexRational {
    type Output = ComplexRational;
    fn sub(self, rhs: Self) -> ComplexRational {
        ComplexRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a ComplexRational> for &'a ComplexRational {
    type Output = ComplexRational;
    fn mul(self, rhs: Self) -> ComplexRational {
        ComplexRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binom_examples() {
        assert_eq!(binom_exact(0, 0), BigUint::from(1u32));
        assert_eq!(binom_exact(4, 2), BigUint::from(6u32));
        assert_eq!(binom_exact(16, 8), BigUint::from(12870u32));
        assert_eq!(binom_exact(3, 5), BigUint::zero());
    }

    #[test]
    fn generalized_binom_examples() {
        assert_eq!(binom_generalized(&rat(-1, 2), 1), rat(-1, 2));
        assert_eq!(binom_generalized(&rat(-1, 2), 2), rat(3, 8));
        assert_eq!(binom_generalized(&rat(3, 2), 2), rat(3, 8));
        assert_eq!(binom_generalized(&rat(7, 3), 0), rat(1, 1));
    }

    #[test]
    fn half_integer_binom_matches_central() {
        for n in 0..=30u64 {
            let a = rat_int(n as i64) - rat(1, 2);
            let lhs = binom_generalized(&a, n) * rat_int(4).pow(n as i32);
            let rhs = Rational::from_integer(binom_exact(2 * n, n).into());
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn odd_bernoulli_vanish() {
        let table = bernoulli_table(29);
        for k in (3..=29).step_by(2) {
            assert!(table[k].is_zero(), "B_{k}");
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(2, 3).unwrap(), -1);
        assert_eq!(jacobi(1, 7).unwrap(), 1);
        assert_eq!(jacobi(-3, 5).unwrap(), -1);
        assert_eq!(jacobi(6, 9).unwrap(), 0);
        assert!(jacobi(3, 8).is_err());
        assert!(jacobi(3, -5).is_err());
        assert!(jacobi(3, 0).is_err());
    }

    #[test]
    fn jacobi_agrees_with_euler_criterion() {
        for p in (3..400u64).filter(|&p| is_prime(p)) {
            for a in -20i64..20 {
                let euler = PrimeFieldElem::new(a, p).pow((p - 1) / 2).signed();
                assert_eq!(jacobi(a, p as i64).unwrap() as i64, euler, "({a}|{p})");
            }
        }
    }

    #[test]
    fn minus_three_symbol_is_q_mod_3() {
        for p in (5..1000u64).filter(|&p| is_prime(p)) {
            let q = PrimePower::new(p, 1).unwrap();
            assert_eq!(jacobi(-3, p as i64).unwrap(), legendre_q_mod3(&q), "p = {p}");
        }
    }

    #[test]
    fn legendre_examples() {
        let sym = |q| legendre_q_mod3(&PrimePower::from_q(q).unwrap());
        assert_eq!(sym(7), 1);
        assert_eq!(sym(5), -1);
        assert_eq!(sym(9), 0);
        assert_eq!(sym(4), 1);
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binom_mod_p(7, 3, 5).value(), 0);
        assert_eq!(lucas_binom_mod_p(4, 2, 7).value(), 6);
        for n in 0..50 {
            assert_eq!(lucas_binom_mod_p(n, 0, 11).value(), 1);
        }
    }

    #[test]
    fn lucas_matches_exact_reduction() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let table = LucasTable::new(p);
            for n in 0..=64u64 {
                for k in 0..=n {
                    let exact = (binom_exact(n, k) % BigUint::from(p)).to_u64().unwrap();
                    assert_eq!(lucas_binom_mod_p(n, k, p).value(), exact);
                    assert_eq!(table.binom(n, k).value(), exact);
                }
            }
        }
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(!is_prime(561));
    }

    #[test]
    fn prime_power_parsing() {
        let q = PrimePower::from_q(1024).unwrap();
        assert_eq!((q.p(), q.e()), (2, 10));
        assert!(PrimePower::from_q(12).is_err());
        assert!(PrimePower::from_q(1).is_err());
        assert!(PrimePower::new(9, 1).is_err());
        assert_eq!(PrimePower::new(3, 4).unwrap().q(), 81);
    }

    #[test]
    fn field_element_text_form() {
        let x = PrimeFieldElem::new(-1, 7);
        assert_eq!(x.to_string(), "6 mod 7");
        assert_eq!("6 mod 7".parse::<PrimeFieldElem>().unwrap(), x);
        assert!("1 mod 8".parse::<PrimeFieldElem>().is_err());
    }

    #[test]
    fn rational_text_form() {
        assert_eq!(format_rational(&rat(-10, 4)), "-5/2");
        assert_eq!(format_rational(&rat(3, 1)), "3/1");
        assert_eq!(parse_rational("-5/2").unwrap(), rat(-5, 2));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn complex_parse() {
        let z = ComplexRational::parse("0,1/4").unwrap();
        assert_eq!(z.norm_sqr(), rat(1, 16));
        assert!(ComplexRational::parse("1/2").unwrap().is_real());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..200).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn rational_field_laws(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
        }

        #[test]
        fn rational_text_round_trip(a in small_rational()) {
            prop_assert_eq!(parse_rational(&format_rational(&a)).unwrap(), a);
        }

        #[test]
        fn field_inverse(v in 1u64..1000, p in prop::sample::select(vec![2u64, 3, 5, 7, 101, 997])) {
            let x = PrimeFieldElem::from_u64(v, p);
            if let Some(inv) = x.inv() {
                prop_assert_eq!((x * inv).value(), 1);
            } else {
                prop_assert_eq!(v % p, 0);
            }
        }
    }
}
