//! Exact partial sums and numeric verification of their expansions.
//!
//! All sums are accumulated over exact integers using
//! `C(2k+2, k+1) = C(2k, k) * 2(2k+1)/(k+1)`; the only irrational quantity
//! in a verification is `sqrt(pi n)`, which is evaluated in fixed point at
//! the requested precision.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{binom_exact, format_rational, rat, rat_int, ComplexRational, Rational};
use crate::darboux::{
    a002457_expansion, partial_sum_expansion, weighted_first_order, AsymExpansion, WeightedFirstOrder, WeightedRegime,
};
use crate::error::NumericError;
use crate::highprec::{HighPrecComplex, HighPrecReal};

pub use crate::darboux::SumKind;

pub const MIN_PRECISION: u32 = 64;
pub const DEFAULT_PRECISION: u32 = 256;

/// `C(2k, k)` for `k = 0, 1, 2, ...`.
pub fn central_binomials() -> impl Iterator<Item = BigUint> {
    let mut current = BigUint::one();
    let mut k = 0u64;
    std::iter::from_fn(move || {
        let out = current.clone();
        current = &current * (2 * (2 * k + 1)) / (k + 1);
        k += 1;
        Some(out)
    })
}

/// Catalan numbers `C_k`, by `C_{k+1} = C_k * 2(2k+1)/(k+2)`.
pub fn catalan_numbers() -> impl Iterator<Item = BigUint> {
    let mut current = BigUint::one();
    let mut k = 0u64;
    std::iter::from_fn(move || {
        let out = current.clone();
        current = &current * (2 * (2 * k + 1)) / (k + 2);
        k += 1;
        Some(out)
    })
}

fn sequence(kind: SumKind) -> Box<dyn Iterator<Item = BigUint>> {
    match kind {
        SumKind::Central => Box::new(central_binomials()),
        SumKind::Catalan => Box::new(catalan_numbers()),
    }
}

pub fn central_partial_sum(n: u64) -> BigUint {
    central_binomials().take(n as usize + 1).sum()
}

pub fn catalan_partial_sum(n: u64) -> BigUint {
    catalan_numbers().take(n as usize + 1).sum()
}

pub fn partial_sum(kind: SumKind, n: u64) -> BigUint {
    match kind {
        SumKind::Central => central_partial_sum(n),
        SumKind::Catalan => catalan_partial_sum(n),
    }
}

/// `sum_{k<=n} alpha^k a_k` exactly. With `alpha = a/b` the numerator
/// `sum_k a_k a^k b^{n-k}` is accumulated over the integers and reduced once.
pub fn weighted_partial_sum(alpha: &Rational, n: u64, kind: SumKind) -> Rational {
    let (a, b) = (alpha.numer().clone(), alpha.denom().clone());
    let mut total = BigInt::zero();
    let mut a_pow = BigInt::one();
    for term in sequence(kind).take(n as usize + 1) {
        total = total * &b + BigInt::from(term) * &a_pow;
        a_pow *= &a;
    }
    Rational::new(total, num_traits::pow(b, n as usize))
}

/// Complex-rational weight, accumulated the same way over Gaussian integers.
pub fn weighted_partial_sum_complex(alpha: &ComplexRational, n: u64, kind: SumKind) -> ComplexRational {
    let den = num_integer::lcm(alpha.re.denom().clone(), alpha.im.denom().clone());
    let a_re = alpha.re.numer() * (&den / alpha.re.denom());
    let a_im = alpha.im.numer() * (&den / alpha.im.denom());
    let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
    let (mut p_re, mut p_im) = (BigInt::one(), BigInt::zero());
    for term in sequence(kind).take(n as usize + 1) {
        let term = BigInt::from(term);
        re = re * &den + &term * &p_re;
        im = im * &den + &term * &p_im;
        let next_re = &p_re * &a_re - &p_im * &a_im;
        p_im = &p_re * &a_im + &p_im * &a_re;
        p_re = next_re;
    }
    let scale = num_traits::pow(den, n as usize);
    ComplexRational::new(Rational::new(re, scale.clone()), Rational::new(im, scale))
}

/// Floating weight at fixed-point precision.
pub fn weighted_partial_sum_numeric(alpha: &HighPrecComplex, n: u64, kind: SumKind) -> HighPrecComplex {
    let prec = alpha.precision();
    let mut total = HighPrecComplex::from_real(HighPrecReal::zero(prec));
    let mut power = HighPrecComplex::from_real(HighPrecReal::from_i64(1, prec));
    for term in sequence(kind).take(n as usize + 1) {
        let term = HighPrecReal::from_int(&BigInt::from(term), prec);
        total = total.add(&power.scale(&term));
        power = power.mul(alpha);
    }
    total
}

/// `sum_j C(k, j)^2 == C(2k, k)`.
pub fn frobenius_identity_check(k: u64) -> bool {
    let lhs: BigUint = (0..=k).map(|j| binom_exact(k, j).pow(2)).sum();
    lhs == binom_exact(2 * k, k)
}

/// `sum_{k<=n} 4^{-k} C(2k,k) == (2n+1) C(2n,n) / 4^n`, using the exact
/// weighted sum.
pub fn quarter_closed_form_check(n: u64) -> bool {
    let lhs = weighted_partial_sum(&rat(1, 4), n, SumKind::Central);
    let rhs = Rational::new(
        BigInt::from(binom_exact(2 * n, n)) * (2 * n + 1),
        num_traits::pow(BigInt::from(4), n as usize),
    );
    lhs == rhs
}

/// Runs the quarter identity for every `n <= max` in one pass over the
/// scaled sums `T_n = 4^n S_n = 4 T_{n-1} + C(2n, n)`. Returns the first
/// failing `n`, if any.
pub fn quarter_closed_form_sweep(max: u64) -> Option<u64> {
    let mut scaled = BigUint::zero();
    for (n, c) in central_binomials().take(max as usize + 1).enumerate() {
        scaled = scaled * 4u32 + &c;
        if scaled != c * (2 * n as u64 + 1) {
            return Some(n as u64);
        }
    }
    None
}

/// Sequences whose exact partial sums can be checked against an expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExpansionTarget {
    Central,
    Catalan,
    /// `sum_{k<=n} 4^{-k} C(2k, k)`.
    A002457,
}

impl ExpansionTarget {
    pub fn expansion(&self, order: usize) -> AsymExpansion {
        match self {
            ExpansionTarget::Central => partial_sum_expansion(SumKind::Central, order),
            ExpansionTarget::Catalan => partial_sum_expansion(SumKind::Catalan, order),
            ExpansionTarget::A002457 => a002457_expansion(order),
        }
    }

    pub fn exact_sum(&self, n: u64) -> Rational {
        match self {
            ExpansionTarget::Central => Rational::from_integer(central_partial_sum(n).into()),
            ExpansionTarget::Catalan => Rational::from_integer(catalan_partial_sum(n).into()),
            ExpansionTarget::A002457 => weighted_partial_sum(&rat(1, 4), n, SumKind::Central),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExpansionTarget::Central => "central",
            ExpansionTarget::Catalan => "catalan",
            ExpansionTarget::A002457 => "a002457",
        }
    }
}

fn check_precision(precision: u32) -> Result<(), NumericError> {
    if precision < MIN_PRECISION {
        Err(NumericError::PrecisionTooLow(precision))
    } else {
        Ok(())
    }
}

/// Splits the prefactor into an exact rational part and the irrational
/// factor `1/sqrt(pi^s n^t)`. Returns `(exact, pi_power, n_power_in_root)`.
fn split_prefactor(exp: &AsymExpansion, n: u64) -> (Rational, u32, i64) {
    let mut exact = exp.constant.clone();
    if let Some(offset) = exp.growth_offset {
        let power = n as i64 + offset;
        exact *= if power >= 0 {
            exp.growth_base.pow(power as i32)
        } else {
            exp.growth_base.recip().pow((-power) as i32)
        };
    }
    let doubled = (&exp.n_power * rat_int(2))
        .to_integer()
        .to_i64()
        .expect("small exponent");
    let whole = doubled.div_euclid(2);
    let odd_half = doubled.rem_euclid(2);
    exact *= rat_int(n as i64).pow(whole as i32);
    // n^{odd_half/2} / sqrt(pi n) when flagged = 1 / sqrt(pi^s n^{s - odd_half})
    let pi_power = u32::from(exp.sqrt_pi_n);
    let n_in_root = pi_power as i64 - odd_half;
    (exact, pi_power, n_in_root)
}

/// `sqrt(pi^s n^t)` at the given precision.
fn root_factor(n: u64, pi_power: u32, n_in_root: i64, precision: u32) -> HighPrecReal {
    let mut radicand = HighPrecReal::from_i64(1, precision);
    if pi_power == 1 {
        radicand = HighPrecReal::pi(precision);
    }
    let n_part = rat_int(n as i64).pow(n_in_root as i32);
    radicand.mul_rational(&n_part).sqrt()
}

fn series_at(coeffs: &[Rational], n: u64) -> Rational {
    let t = rat(1, n as i64);
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * &t + c)
}

/// Value of the expansion at `n`: prefactor times `sum_i coeffs[i] n^{-i}`.
pub fn eval_asym(exp: &AsymExpansion, n: u64, precision: u32) -> Result<HighPrecReal, NumericError> {
    check_precision(precision)?;
    if n == 0 {
        return Err(NumericError::ZeroN);
    }
    let (exact, pi_power, n_in_root) = split_prefactor(exp, n);
    let value = exact * series_at(&exp.coeffs, n);
    let root = root_factor(n, pi_power, n_in_root, precision);
    Ok(HighPrecReal::from_rational(&value, precision).div(&root))
}

/// One row of a residual report.
#[derive(Clone, Debug)]
pub struct ResidualRow {
    pub n: u64,
    pub exact: Rational,
    pub approx: HighPrecReal,
    pub ratio: HighPrecReal,
    /// `n^{m+1} (exact / prefactor - sum_{i<=m} coeffs[i] n^{-i})`.
    pub residual: HighPrecReal,
    pub precision: u32,
    /// Whether a recomputation at twice the precision agreed.
    pub precision_ok: bool,
}

impl ResidualRow {
    pub fn relative_error(&self) -> f64 {
        (self.ratio.to_f64() - 1.0).abs()
    }

    pub fn to_json(&self, digits: usize) -> Value {
        json!({
            "n": self.n,
            "exact": exact_string(&self.exact),
            "approx": self.approx.to_sci_string(digits),
            "ratio": self.ratio.to_sci_string(digits),
            "residual": self.residual.to_sci_string(digits),
            "precision": self.precision,
            "precision_ok": self.precision_ok,
        })
    }

    /// Fields in the order `n, exact, approx, ratio, residual, precision`.
    pub fn csv_fields(&self, digits: usize) -> [String; 6] {
        [
            self.n.to_string(),
            exact_string(&self.exact),
            self.approx.to_sci_string(digits),
            self.ratio.to_sci_string(digits),
            self.residual.to_sci_string(digits),
            self.precision.to_string(),
        ]
    }
}

/// Integers print in decimal; non-integers as `num/den`.
pub fn exact_string(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format_rational(value)
    }
}

fn residual_at(
    exp: &AsymExpansion,
    exact: &Rational,
    n: u64,
    precision: u32,
) -> (HighPrecReal, HighPrecReal, HighPrecReal) {
    let (prefactor_exact, pi_power, n_in_root) = split_prefactor(exp, n);
    let root = root_factor(n, pi_power, n_in_root, precision);
    let poly = series_at(&exp.coeffs, n);
    // exact / prefactor = (exact / prefactor_exact) * root
    let normalized = HighPrecReal::from_rational(&(exact / &prefactor_exact), precision).mul(&root);
    let poly_value = HighPrecReal::from_rational(&poly, precision);
    let defect = normalized.sub(&poly_value);
    let scale = rat_int(n as i64).pow(exp.relative_error_order() as i32);
    let residual = defect.mul_rational(&scale);
    let ratio = normalized.div(&poly_value);
    let approx = HighPrecReal::from_rational(&(prefactor_exact * poly), precision).div(&root);
    (approx, ratio, residual)
}

/// Scaled residual of an expansion against the exact sum at `n`. The
/// computation is repeated at twice the precision; disagreement beyond half
/// the working digits is reported as an error.
pub fn residual_scaling(
    exp: &AsymExpansion,
    target: ExpansionTarget,
    n: u64,
    precision: u32,
) -> Result<ResidualRow, NumericError> {
    check_precision(precision)?;
    if n == 0 {
        return Err(NumericError::ZeroN);
    }
    let exact = target.exact_sum(n);
    let (approx, ratio, residual) = residual_at(exp, &exact, n, precision);
    let (_, _, check) = residual_at(exp, &exact, n, 2 * precision);
    let diff = check.with_precision(precision).sub(&residual).abs();
    let tolerance = HighPrecReal::from_mantissa(BigInt::one() << (precision / 2), precision);
    let magnitude = residual.abs().add(&HighPrecReal::from_i64(1, precision));
    let precision_ok = diff <= tolerance.mul(&magnitude);
    if !precision_ok {
        return Err(NumericError::PrecisionDisagreement {
            low: precision,
            high: 2 * precision,
        });
    }
    Ok(ResidualRow {
        n,
        exact,
        approx,
        ratio,
        residual,
        precision,
        precision_ok,
    })
}

/// Residual rows for several `n`, computed in parallel, returned in input order.
pub fn residual_report(
    exp: &AsymExpansion,
    target: ExpansionTarget,
    ns: &[u64],
    precision: u32,
) -> Result<Vec<ResidualRow>, NumericError> {
    ns.par_iter()
        .map(|&n| residual_scaling(exp, target, n, precision))
        .collect()
}

/// Largest over smallest `|residual|` across rows; the boundedness check
/// for an `O(n^{-(m+1)})` remainder.
pub fn residual_spread(rows: &[ResidualRow]) -> f64 {
    let mags: Vec<f64> = rows.iter().map(|r| r.residual.to_f64().abs()).collect();
    let max = mags.iter().cloned().fold(f64::MIN, f64::max);
    let min = mags.iter().cloned().fold(f64::MAX, f64::min);
    max / min
}

/// One row of a weighted-sum report.
#[derive(Clone, Debug)]
pub struct WeightedRow {
    pub n: u64,
    pub sum: HighPrecComplex,
    /// Regime formula at `n`: leading term, limit, or exact closed form.
    pub reference: HighPrecComplex,
    /// `sum / reference`.
    pub ratio: HighPrecComplex,
    /// Quantity whose decay is compared against the claimed exponent.
    pub error: HighPrecReal,
    /// Regime (iv) only: exact equality with the closed form.
    pub exact_match: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct WeightedReport {
    pub first_order: WeightedFirstOrder,
    pub precision: u32,
    pub rows: Vec<WeightedRow>,
    /// Fitted `-log(err_{i+1}/err_i) / log(n_{i+1}/n_i)` for consecutive rows.
    pub observed_exponents: Vec<f64>,
}

impl WeightedReport {
    pub fn regime(&self) -> WeightedRegime {
        self.first_order.regime
    }

    /// Every observed exponent is at least the claimed one (minus `slack`);
    /// in regime (iv), every row matched exactly.
    pub fn rates_consistent(&self, slack: f64) -> bool {
        match &self.first_order.claimed_error_exponent {
            None => self.rows.iter().all(|r| r.exact_match == Some(true)),
            Some(claimed) => {
                let claimed = claimed.to_f64().unwrap_or(0.0);
                self.observed_exponents.iter().all(|&e| e >= claimed - slack)
            }
        }
    }

    pub fn to_json(&self, digits: usize) -> Value {
        json!({
            "alpha": self.first_order.alpha.to_string(),
            "kind": self.first_order.kind.to_string(),
            "regime": self.first_order.regime.to_string(),
            "claimed_error_exponent": self.first_order.claimed_error_exponent.as_ref().map(format_rational),
            "precision": self.precision,
            "observed_exponents": self.observed_exponents,
            "rows": self.rows.iter().map(|r| json!({
                "n": r.n,
                "sum": r.sum.to_string_digits(digits),
                "reference": r.reference.to_string_digits(digits),
                "ratio": r.ratio.to_string_digits(digits),
                "error": r.error.to_sci_string(digits),
                "exact_match": r.exact_match,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `1/sqrt(1 - 4 alpha)` or `(1 - sqrt(1 - 4 alpha)) / (2 alpha)`, principal
/// branch. `None` for the central sum at `alpha = 1/4`, where it diverges.
pub fn weighted_limit(first: &WeightedFirstOrder, precision: u32) -> Option<HighPrecComplex> {
    let one = HighPrecComplex::from_real(HighPrecReal::from_i64(1, precision));
    let radicand = first.radicand();
    let root = HighPrecComplex::from_rational(&radicand, precision).sqrt();
    match first.kind {
        SumKind::Central if radicand.is_zero() => None,
        SumKind::Central => Some(one.div(&root)),
        SumKind::Catalan => {
            let two_alpha = HighPrecComplex::from_rational(&first.alpha.scale(&rat_int(2)), precision);
            Some(one.sub(&root).div(&two_alpha))
        }
    }
}

/// Exact `[z^n]` of the singular part at `z = 1`, on the `(4 alpha)^{-n}`
/// scale: `4a/(4a-1) C(n-1/2, n)` for central binomials and
/// `-8a/(4a-1) C(n-3/2, n)` for Catalan numbers.
fn branch_transfer(alpha: &ComplexRational, kind: SumKind, n: u64) -> ComplexRational {
    let four_alpha = alpha.scale(&rat_int(4));
    let shifted = &four_alpha - &ComplexRational::one();
    let factor = &four_alpha * &shifted.inv().expect("4 alpha != 1 in regime (i)");
    let half_binom = Rational::new(
        BigInt::from(binom_exact(2 * n, n)),
        num_traits::pow(BigInt::from(4), n as usize),
    );
    match kind {
        SumKind::Central => factor.scale(&half_binom),
        SumKind::Catalan => {
            // C(n - 3/2, n) = -C(n - 1/2, n) / (2n - 1)
            let three_half = -half_binom / rat_int(2 * n as i64 - 1);
            factor.scale(&(rat_int(-2) * three_half))
        }
    }
}

fn weighted_row(first: &WeightedFirstOrder, n: u64, precision: u32) -> WeightedRow {
    let alpha = &first.alpha;
    let kind = first.kind;
    let exact = weighted_partial_sum_complex(alpha, n, kind);
    let sum = HighPrecComplex::from_rational(&exact, precision);
    match first.regime {
        WeightedRegime::BranchDominant => {
            let growth = alpha.scale(&rat_int(4)).pow(n);
            let normalized = &exact * &growth.inv().expect("nonzero alpha");
            let defect = &normalized - &branch_transfer(alpha, kind, n);
            let error = HighPrecComplex::from_rational(&defect, precision).abs();
            // leading = (4a)^{n+1} / ((4a - 1) sqrt(pi n)) [/ n for Catalan]
            let four_alpha = alpha.scale(&rat_int(4));
            let mut lead_exact =
                &four_alpha.pow(n + 1) * &(&four_alpha - &ComplexRational::one()).inv().expect("4 alpha != 1");
            if kind == SumKind::Catalan {
                lead_exact = lead_exact.scale(&rat(1, n as i64));
            }
            let root = HighPrecReal::pi(precision).mul_rational(&rat_int(n as i64)).sqrt();
            let reference = HighPrecComplex::from_rational(&lead_exact, precision);
            let reference = HighPrecComplex::new(reference.re.div(&root), reference.im.div(&root));
            let ratio = sum.div(&reference);
            WeightedRow {
                n,
                sum,
                reference,
                ratio,
                error,
                exact_match: None,
            }
        }
        WeightedRegime::PoleDominant | WeightedRegime::TwoSingularities => {
            let reference = weighted_limit(first, precision).expect("finite limit off alpha = 1/4");
            let error = sum.sub(&reference).abs();
            let ratio = sum.div(&reference);
            WeightedRow {
                n,
                sum,
                reference,
                ratio,
                error,
                exact_match: None,
            }
        }
        WeightedRegime::Quarter => {
            let closed = Rational::new(
                BigInt::from(binom_exact(2 * n, n)) * (2 * n + 1),
                num_traits::pow(BigInt::from(4), n as usize),
            );
            let closed_c = ComplexRational::real(closed);
            let reference = HighPrecComplex::from_rational(&closed_c, precision);
            let ratio = sum.div(&reference);
            WeightedRow {
                n,
                sum,
                reference,
                ratio,
                error: HighPrecReal::zero(precision),
                exact_match: Some(exact == closed_c),
            }
        }
    }
}

/// Errors at or below `floor` count as fully converged (infinite exponent).
fn log_ratio_exponent(a: &WeightedRow, b: &WeightedRow, floor: f64) -> f64 {
    let (ea, eb) = (a.error.to_f64(), b.error.to_f64());
    if ea <= floor || eb <= floor {
        return f64::INFINITY;
    }
    -(eb / ea).ln() / ((b.n as f64) / (a.n as f64)).ln()
}

/// Compares weighted partial sums with the first-order regime formula.
pub fn weighted_regime_verify(
    alpha: &ComplexRational,
    kind: SumKind,
    ns: &[u64],
    precision: u32,
) -> Result<WeightedReport, NumericError> {
    check_precision(precision)?;
    if ns.contains(&0) {
        return Err(NumericError::ZeroN);
    }
    let first = weighted_first_order(alpha, kind)?;
    let rows: Vec<WeightedRow> = ns.par_iter().map(|&n| weighted_row(&first, n, precision)).collect();
    let observed_exponents = match first.regime {
        WeightedRegime::Quarter => Vec::new(),
        _ => {
            let floor = 2f64.powi(-(precision as i32 - 16));
            rows.windows(2)
                .map(|w| log_ratio_exponent(&w[0], &w[1], floor))
                .collect()
        }
    };
    Ok(WeightedReport {
        first_order: first,
        precision,
        rows,
        observed_exponents,
    })
}

/// `S_n 3 sqrt(pi n) / 4^{n+1}` (times `n` for Catalan), which tends to 1.
pub fn first_order_ratio(kind: SumKind, n: u64, precision: u32) -> Result<HighPrecReal, NumericError> {
    let exp = partial_sum_expansion(kind, 0);
    let exact = Rational::from_integer(partial_sum(kind, n).into());
    let (_, ratio, _) = residual_at(&exp, &exact, n, precision);
    check_precision(precision)?;
    Ok(ratio)
}
