//! Singularity analysis at `z = 1`.
//!
//! The generating functions handled here have the shape
//! `analytic(z) * (1 - z)^e` near their dominant singularity `z = 1`, with
//! `e` a half-integer. Recentering the analytic factor at `w = 1 - z` gives a
//! Puiseux expansion `sum_j c_j (1 - z)^{j + e}`; transferring each term to
//! its `z^n` coefficient and expanding in `1/n` yields the asymptotic series.
//!
//! Every `z^n` coefficient of `(1 - z)^{s - 1/2}` is `4^{-n} C(2n, n)` times
//! `(-1)^s / prod_{i=1}^{s} (2n/(2i-1) - 1)`, so once `C(2n, n)` is expanded
//! (from Stirling's series) the whole computation stays in exact rationals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{bernoulli_table, binom_generalized, format_rational, rat, rat_int, ComplexRational, Rational};
use crate::error::DarbouxError;
use crate::series::{RationalSeries, Rationals, TruncatedSeries};

/// Which of the two base sequences a partial sum runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SumKind {
    Central,
    Catalan,
}

impl fmt::Display for SumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumKind::Central => "central",
            SumKind::Catalan => "catalan",
        })
    }
}

fn half() -> Rational {
    rat(1, 2)
}

/// Formats a half-integer as `"p/2"`.
pub fn format_half(value: &Rational) -> String {
    let doubled = value * rat_int(2);
    format!("{}/2", doubled.to_integer())
}

fn poly_eval(poly: &[Rational], z: &Rational) -> Rational {
    poly.iter().rev().fold(Rational::zero(), |acc, c| acc * z + c)
}

/// `P(1 - w)` as a series in `w` (exact; a polynomial of the same degree).
fn shift_to_one(poly: &[Rational], order: usize) -> RationalSeries {
    let one_minus_w = TruncatedSeries::from_ints(Rationals, &[1, -1], order);
    let mut power = RationalSeries::one(Rationals, order);
    let mut acc = RationalSeries::zero(Rationals, order);
    for c in poly {
        acc = acc.add(&power.scale(c)).expect("same field");
        power = power.mul(&one_minus_w).expect("same field");
    }
    acc
}

/// Taylor coefficients of `P(z)/Q(z)` in powers of `w = 1 - z`.
pub fn recenter_at_one(
    numerator: &[Rational],
    denominator: &[Rational],
    order: usize,
) -> Result<RationalSeries, DarbouxError> {
    if poly_eval(denominator, &Rational::one()).is_zero() {
        return Err(DarbouxError::SingularAtOne);
    }
    let num = shift_to_one(numerator, order);
    let den = shift_to_one(denominator, order);
    Ok(num.mul(&den.inv()?)?)
}

/// `sum_j c_j (1 - z)^{j + e}`.
///
/// When the generating function also has an analytic strand (integer
/// exponents), those terms are kept in `dropped_analytic`: their `z^n`
/// coefficients vanish once `n` exceeds the order, so they never reach the
/// asymptotic series.
#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxExpansion {
    base_exponent: Rational,
    terms: Vec<(usize, Rational)>,
    dropped_analytic: Option<Vec<Rational>>,
}

fn check_exponent(e: &Rational) -> Result<(), DarbouxError> {
    let allowed = [rat(-1, 2), rat(0, 1), rat(1, 2)];
    if allowed.contains(e) {
        Ok(())
    } else {
        Err(DarbouxError::UnsupportedExponent(e.to_string()))
    }
}

/// Attaches the exponent offset `e` to every coefficient of `analytic`.
pub fn puiseux_combine(analytic: &RationalSeries, e: &Rational) -> Result<PuiseuxExpansion, DarbouxError> {
    check_exponent(e)?;
    Ok(PuiseuxExpansion {
        base_exponent: e.clone(),
        terms: analytic.coeffs().iter().cloned().enumerate().collect(),
        dropped_analytic: None,
    })
}

/// Expansion of `analytic(w) * (1 - w^{1/2})`: the integer strand is
/// recorded as dropped and the half-integer strand carries `-c_j`.
pub fn puiseux_combine_with_analytic(analytic: &RationalSeries) -> PuiseuxExpansion {
    PuiseuxExpansion {
        base_exponent: half(),
        terms: analytic.coeffs().iter().map(|c| -c).enumerate().collect(),
        dropped_analytic: Some(analytic.coeffs().to_vec()),
    }
}

impl PuiseuxExpansion {
    pub fn base_exponent(&self) -> &Rational {
        &self.base_exponent
    }

    pub fn terms(&self) -> &[(usize, Rational)] {
        &self.terms
    }

    pub fn dropped_analytic(&self) -> Option<&[Rational]> {
        self.dropped_analytic.as_deref()
    }

    pub fn order(&self) -> usize {
        self.terms.last().map_or(0, |(j, _)| *j)
    }

    /// Darboux estimate of the `z^n` coefficient: the transferred terms only.
    pub fn darboux_estimate(&self, n: u64) -> Rational {
        self.terms
            .iter()
            .map(|(j, c)| c * transfer_coefficient(&(rat_int(*j as i64) + &self.base_exponent), n))
            .sum()
    }
}

/// `[z^n] (1 - z)^a = (-1)^n C(a, n) = C(n - a - 1, n)`.
pub fn transfer_coefficient(exponent: &Rational, n: u64) -> Rational {
    binom_generalized(&(rat_int(n as i64) - exponent - Rational::one()), n)
}

/// `C(n - j - 1/2, n)`, the transfer of `(1 - z)^{j - 1/2}`.
pub fn darboux_coefficient(j: u64, n: u64) -> Rational {
    binom_generalized(&(rat_int(n as i64) - rat_int(j as i64) - half()), n)
}

/// Asymptotic expansion
/// `constant * base^{n + offset} * n^{n_power} * (pi n)^{-1/2 if flagged} * sum_i coeffs[i] n^{-i}`.
///
/// `error_exponent` is the exponent `E` of the omitted term after dividing the
/// sum by `base^n`, i.e. the remainder is `O(base^n n^{-E})`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymExpansion {
    pub constant: Rational,
    pub growth_base: Rational,
    pub growth_offset: Option<i64>,
    pub n_power: Rational,
    pub sqrt_pi_n: bool,
    pub coeffs: Vec<Rational>,
    pub error_exponent: Rational,
}

impl AsymExpansion {
    fn new(
        constant: Rational,
        growth_offset: Option<i64>,
        n_power: Rational,
        sqrt_pi_n: bool,
        coeffs: Vec<Rational>,
    ) -> Self {
        let mut exp = Self {
            constant,
            growth_base: rat_int(4),
            growth_offset,
            n_power,
            sqrt_pi_n,
            coeffs,
            error_exponent: Rational::zero(),
        };
        exp.error_exponent = exp.derived_error_exponent();
        exp
    }

    fn derived_error_exponent(&self) -> Rational {
        let leading = if self.sqrt_pi_n {
            &self.n_power - half()
        } else {
            self.n_power.clone()
        };
        rat_int(self.order() as i64 + 1) - leading
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Relative error order of the parenthesized series: `O(n^{-(m+1)})`.
    pub fn relative_error_order(&self) -> usize {
        self.order() + 1
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(order + 1);
        out.error_exponent = out.derived_error_exponent();
        out
    }

    /// Human-readable prefactor such as `4^(n+1)/(3*sqrt(pi*n))`.
    pub fn prefactor_string(&self) -> String {
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        let (c_num, c_den) = (self.constant.numer().clone(), self.constant.denom().clone());
        if c_num != BigInt::one() {
            num.push(c_num.to_string());
        }
        if c_den != BigInt::one() {
            den.push(c_den.to_string());
        }
        if let Some(offset) = self.growth_offset {
            let base = if self.growth_base.is_integer() {
                self.growth_base.to_string()
            } else {
                format!("({})", self.growth_base)
            };
            let exponent = match offset {
                0 => "n".to_string(),
                o if o > 0 => format!("(n+{o})"),
                o => format!("(n{o})"),
            };
            num.push(format!("{base}^{exponent}"));
        }
        let mut n_power = self.n_power.clone();
        if self.sqrt_pi_n {
            // n^b / sqrt(pi n): print as sqrt(n/pi) when b = 1 to match the usual form.
            if n_power == Rational::one() {
                num.push("sqrt(n/pi)".to_string());
                n_power = Rational::zero();
            } else {
                den.push("sqrt(pi*n)".to_string());
            }
        }
        if !n_power.is_zero() {
            let text = if n_power.is_integer() {
                n_power.abs().to_string()
            } else {
                format!("({})", n_power.abs())
            };
            let factor = if n_power.abs() == Rational::one() {
                "n".to_string()
            } else {
                format!("n^{text}")
            };
            if n_power.is_negative() {
                den.insert(den.len().saturating_sub(usize::from(self.sqrt_pi_n)), factor);
            } else {
                num.push(factor);
            }
        }
        let num = if num.is_empty() { "1".to_string() } else { num.join("*") };
        match den.len() {
            0 => num,
            1 => format!("{num}/{}", den[0]),
            _ => format!("{num}/({})", den.join("*")),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "constant": format_rational(&self.constant),
            "growth_base": format_rational(&self.growth_base),
            "pow4_offset": self.growth_offset,
            "n_power": format_half(&self.n_power),
            "sqrt_pi_n": self.sqrt_pi_n,
            "coeffs": self.coeffs.iter().map(format_rational).collect::<Vec<_>>(),
            "error_exponent": format_half(&self.error_exponent),
        })
    }
}

impl fmt::Display for AsymExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * (", self.prefactor_string())?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i == 0 {
                write!(f, "{c}")?;
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            let power = if i == 1 { "n".to_string() } else { format!("n^{i}") };
            if mag.is_integer() {
                write!(f, " {sign} {}/{power}", mag.numer())?;
            } else {
                write!(f, " {sign} {}/({}{power})", mag.numer(), mag.denom())?;
            }
        }
        write!(f, " + O(n^-{}))", self.relative_error_order())
    }
}

/// `log(C(2n, n) sqrt(pi n) / 4^n)` as a series in `t = 1/n`, from the
/// Stirling series of `log n!`.
fn log_central_binom_correction(order: usize) -> RationalSeries {
    let bern = bernoulli_table(order + 1);
    let mut coeffs = vec![Rational::zero(); order + 1];
    for k in 1.. {
        let power = 2 * k - 1;
        if power > order {
            break;
        }
        // B_{2k} / (2k (2k-1)) * ((2n)^{-(2k-1)} - 2 n^{-(2k-1)})
        let weight = &bern[2 * k] / rat_int((2 * k * (2 * k - 1)) as i64);
        let scale = Rational::new(BigInt::one(), BigInt::from(2).pow(power as u32)) - rat_int(2);
        coeffs[power] = weight * scale;
    }
    RationalSeries::rational(coeffs, order)
}

/// Expansion of `C(2n, n)` as `4^n / sqrt(pi n) * (1 - 1/(8n) + ...)`.
pub fn stirling_central_binom_series(order: usize) -> AsymExpansion {
    let series = log_central_binom_correction(order).exp().expect("zero constant term");
    AsymExpansion::new(Rational::one(), Some(0), Rational::zero(), true, series.into_coeffs())
}

/// `1/(2n/d - 1) = sum_{t >= 1} (d/2)^t n^{-t}`, truncated at `n^{-order}`.
pub fn reciprocal_factor_series(denom_odd: u64, order: usize) -> RationalSeries {
    let ratio = rat(denom_odd as i64, 2);
    let mut coeffs = vec![Rational::zero(); order + 1];
    let mut power = Rational::one();
    for c in coeffs.iter_mut().skip(1) {
        power *= &ratio;
        *c = power.clone();
    }
    RationalSeries::rational(coeffs, order)
}

/// Builds the `1/n` expansion of `[z^n] G(z)` from the Puiseux expansion of
/// `G` at its dominant singularity `z = 1`, normalized to a `4^{n+1}` prefactor.
pub fn darboux_expansion(puiseux: &PuiseuxExpansion, order: usize) -> Result<AsymExpansion, DarbouxError> {
    // (1 - z)^{s - 1/2} transfers to C(2n,n) 4^{-n} (-1)^s prod_{i<=s} R_{2i-1}.
    let shift = puiseux.base_exponent() + half();
    let shift = shift
        .to_integer()
        .to_usize()
        .ok_or_else(|| DarbouxError::UnsupportedExponent(puiseux.base_exponent().to_string()))?;
    let work_order = order + shift;
    let mut product = RationalSeries::one(Rationals, work_order);
    let mut factors_used = 0usize;
    let mut total = RationalSeries::zero(Rationals, work_order);
    for (j, c) in puiseux.terms() {
        let s = j + shift;
        while factors_used < s {
            factors_used += 1;
            let factor = reciprocal_factor_series(2 * factors_used as u64 - 1, work_order);
            product = product.mul(&factor)?;
        }
        let sign = if s % 2 == 1 { -Rational::one() } else { Rational::one() };
        total = total.add(&product.scale(&(c * sign)))?;
    }
    let mut reduced = total;
    for _ in 0..shift {
        reduced = reduced.div_x()?;
    }
    let stirling = RationalSeries::rational(stirling_central_binom_series(order).coeffs, order);
    let full = reduced.mul(&stirling)?;
    let lead = full.coeffs()[0].clone();
    if lead.is_zero() {
        return Err(DarbouxError::UnsupportedExponent("vanishing leading term".into()));
    }
    let normalized = full.scale(&lead.recip());
    Ok(AsymExpansion::new(
        lead / rat_int(4),
        Some(1),
        -rat_int(shift as i64),
        true,
        normalized.into_coeffs(),
    ))
}

/// Puiseux expansion of `sum_n 4^{-n} (sum_{k<=n} C(2k,k)) z^n = (1-z)^{-1/2} * 4/(4-z)`.
pub fn central_puiseux(order: usize) -> PuiseuxExpansion {
    let analytic = recenter_at_one(&[rat_int(4)], &[rat_int(4), rat_int(-1)], order).expect("regular at z = 1");
    puiseux_combine(&analytic, &rat(-1, 2)).expect("supported exponent")
}

/// Puiseux expansion of `8 (1 - sqrt(1-z)) / (z (4 - z))`.
pub fn catalan_puiseux(order: usize) -> PuiseuxExpansion {
    let analytic =
        recenter_at_one(&[rat_int(8)], &[rat_int(0), rat_int(4), rat_int(-1)], order).expect("regular at z = 1");
    puiseux_combine_with_analytic(&analytic)
}

/// `sum_{k<=n} C(2k,k) = 4^{n+1}/(3 sqrt(pi n)) (1 + 1/(24n) + ...)`.
pub fn theorem1_expansion(order: usize) -> AsymExpansion {
    darboux_expansion(&central_puiseux(order), order).expect("central pipeline is well-formed")
}

/// `sum_{k<=n} C_k = 4^{n+1}/(3 n sqrt(pi n)) (1 - 5/(8n) + ...)`.
pub fn theorem2_expansion(order: usize) -> AsymExpansion {
    // One extra Puiseux term: the half-integer strand starts one power of
    // 1/n later, so j runs to order + 1 before truncation.
    darboux_expansion(&catalan_puiseux(order + 1), order).expect("Catalan pipeline is well-formed")
}

pub fn partial_sum_expansion(kind: SumKind, order: usize) -> AsymExpansion {
    match kind {
        SumKind::Central => theorem1_expansion(order),
        SumKind::Catalan => theorem2_expansion(order),
    }
}

/// `sum_{k=0}^{n} 4^{-k} C(2k,k) = (2n+1) C(2n,n) / 4^n = 2 sqrt(n/pi) (1 + 3/(8n) - ...)`.
pub fn a002457_expansion(order: usize) -> AsymExpansion {
    let stirling = RationalSeries::rational(stirling_central_binom_series(order).coeffs, order);
    let one_plus_half_t = RationalSeries::rational(vec![Rational::one(), half()], order);
    let coeffs = stirling.mul(&one_plus_half_t).expect("same field").into_coeffs();
    AsymExpansion::new(rat_int(2), None, Rational::one(), true, coeffs)
}

/// Dominance regime of `sum_k alpha^k C(2k,k)` by comparing `|alpha|` with 1/4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightedRegime {
    /// `|alpha| > 1/4`: the branch point at `z = 1` dominates.
    BranchDominant,
    /// `|alpha| < 1/4`: the pole at `z = 4 alpha` dominates; the sum converges.
    PoleDominant,
    /// `|alpha| = 1/4`, `alpha != 1/4`: both singularities on the unit circle.
    TwoSingularities,
    /// `alpha = 1/4`: exact closed form.
    Quarter,
}

impl fmt::Display for WeightedRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightedRegime::BranchDominant => "(i) |alpha| > 1/4",
            WeightedRegime::PoleDominant => "(ii) |alpha| < 1/4",
            WeightedRegime::TwoSingularities => "(iii) |alpha| = 1/4, alpha != 1/4",
            WeightedRegime::Quarter => "(iv) alpha = 1/4",
        })
    }
}

pub fn classify_alpha(alpha: &ComplexRational) -> Result<WeightedRegime, DarbouxError> {
    if alpha.is_zero() {
        return Err(DarbouxError::ZeroAlpha);
    }
    let quarter = rat(1, 4);
    if alpha.is_real() && alpha.re == quarter {
        return Ok(WeightedRegime::Quarter);
    }
    Ok(match alpha.norm_sqr().cmp(&rat(1, 16)) {
        std::cmp::Ordering::Greater => WeightedRegime::BranchDominant,
        std::cmp::Ordering::Less => WeightedRegime::PoleDominant,
        std::cmp::Ordering::Equal => WeightedRegime::TwoSingularities,
    })
}

/// First-order description of `sum_{k<=n} alpha^k a_k` for `a_k` either
/// sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedFirstOrder {
    pub alpha: ComplexRational,
    pub kind: SumKind,
    pub regime: WeightedRegime,
    /// Decay exponent of the error: of the normalized defect
    /// `(4 alpha)^{-n} S_n - leading` in regime (i), of `S_n - limit` in
    /// regimes (ii) and (iii). `None` when the closed form is exact.
    pub claimed_error_exponent: Option<Rational>,
}

pub fn weighted_first_order(alpha: &ComplexRational, kind: SumKind) -> Result<WeightedFirstOrder, DarbouxError> {
    let mut regime = classify_alpha(alpha)?;
    // The Catalan sum at alpha = 1/4 has no polynomial closed form; it sits on
    // the boundary like the other points of modulus 1/4.
    if kind == SumKind::Catalan && regime == WeightedRegime::Quarter {
        regime = WeightedRegime::TwoSingularities;
    }
    let claimed_error_exponent = match (regime, kind) {
        (WeightedRegime::BranchDominant, SumKind::Central) => Some(rat(3, 2)),
        (WeightedRegime::BranchDominant, SumKind::Catalan) => Some(rat(5, 2)),
        (WeightedRegime::PoleDominant, _) => Some(rat(1, 1)),
        (WeightedRegime::TwoSingularities, _) => Some(rat(1, 2)),
        (WeightedRegime::Quarter, _) => None,
    };
    Ok(WeightedFirstOrder {
        alpha: alpha.clone(),
        kind,
        regime,
        claimed_error_exponent,
    })
}

impl WeightedFirstOrder {
    /// Leading term as an [`AsymExpansion`] when `alpha` is a real rational in
    /// regime (i): `(4 alpha)^{n+1} / ((4 alpha - 1) sqrt(pi n))`, with an
    /// extra `1/n` for Catalan numbers.
    pub fn leading_expansion(&self) -> Option<AsymExpansion> {
        if self.regime != WeightedRegime::BranchDominant || !self.alpha.is_real() {
            return None;
        }
        let base = &self.alpha.re * rat_int(4);
        let n_power = match self.kind {
            SumKind::Central => Rational::zero(),
            SumKind::Catalan => -Rational::one(),
        };
        let mut exp = AsymExpansion::new(
            (&base - Rational::one()).recip(),
            Some(1),
            n_power,
            true,
            vec![Rational::one()],
        );
        exp.growth_base = base;
        Some(exp)
    }

    /// Exact limit of the sums in regime (ii)/(iii): `1/sqrt(1 - 4 alpha)` for
    /// central binomials and `(1 - sqrt(1 - 4 alpha)) / (2 alpha)` for Catalan
    /// numbers, principal branch. Returned as the radicand `1 - 4 alpha`; the
    /// numeric evaluation lives in `sums`.
    pub fn radicand(&self) -> ComplexRational {
        &ComplexRational::one() - &self.alpha.scale(&rat_int(4))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rats(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn recenter_geometric_factor() {
        let s = recenter_at_one(&[rat_int(4)], &[rat_int(4), rat_int(-1)], 3).unwrap();
        let expected: Vec<Rational> = rats(&[(1, 1), (-1, 3), (1, 9), (-1, 27)])
            .into_iter()
            .map(|c| c * rat(4, 3))
            .collect();
        assert_eq!(s.coeffs(), expected.as_slice());
    }

    #[test]
    fn recenter_catalan_partial_fractions() {
        let s = recenter_at_one(&[rat_int(8)], &[rat_int(0), rat_int(4), rat_int(-1)], 4).unwrap();
        for (j, c) in s.coeffs().iter().enumerate() {
            let expected = rat_int(2) + rat(2, 3) * rat(-1, 3).pow(j as i32);
            assert_eq!(*c, expected, "j = {j}");
        }
        assert_eq!(s.coeffs()[0], rat(8, 3));
        assert_eq!(s.coeffs()[1], rat(16, 9));
    }

    #[test]
    fn recenter_trivial_and_singular() {
        let s = recenter_at_one(&[rat_int(1)], &[rat_int(1)], 2).unwrap();
        assert_eq!(s.coeffs(), rats(&[(1, 1), (0, 1), (0, 1)]).as_slice());
        assert_eq!(
            recenter_at_one(&[rat_int(1)], &[rat_int(1), rat_int(-1)], 2),
            Err(DarbouxError::SingularAtOne)
        );
    }

    #[test]
    fn recenter_round_trip() {
        // (1 + 2z) / (3 - z): re-expanding the w-series about z = 0 must give
        // back the Maclaurin coefficients. The w-series is a polynomial
        // approximation, so compare a truncated Maclaurin expansion of the
        // degree-`order` polynomial in w = 1 - z against the exact one only
        // through low degree where both are exact up to the w-truncation.
        let p = rats(&[(1, 1), (2, 1)]);
        let q = rats(&[(3, 1), (-1, 1)]);
        let order = 40;
        let w_series = recenter_at_one(&p, &q, order).unwrap();
        // Evaluate at z = 1/2 (w = 1/2): the w-series converges there (|w| < 2).
        let approx: Rational = w_series.eval(&rat(1, 2));
        let exact = poly_eval(&p, &rat(1, 2)) / poly_eval(&q, &rat(1, 2));
        let err = (approx - exact).abs();
        assert!(err < rat(1, 1_000_000_000), "{err}");
    }

    #[test]
    fn puiseux_examples() {
        let central = central_puiseux(3);
        assert_eq!(central.base_exponent(), &rat(-1, 2));
        for (j, c) in central.terms() {
            assert_eq!(*c, rat(4, 3) * rat(-1, 3).pow(*j as i32));
        }
        let trivial = puiseux_combine(&RationalSeries::one(Rationals, 0), &rat(0, 1)).unwrap();
        assert_eq!(trivial.terms(), &[(0, rat(1, 1))]);
        assert!(puiseux_combine(&RationalSeries::one(Rationals, 0), &rat(3, 2)).is_err());

        let catalan = catalan_puiseux(3);
        assert_eq!(catalan.base_exponent(), &rat(1, 2));
        for (j, c) in catalan.terms() {
            let magnitude = rat(2, 3) * (rat_int(3) + rat(-1, 3).pow(*j as i32));
            assert_eq!(*c, -magnitude);
        }
        assert_eq!(catalan.dropped_analytic().unwrap().len(), 4);
    }

    #[test]
    fn darboux_coefficient_examples() {
        assert_eq!(darboux_coefficient(0, 2), rat(3, 8));
        assert_eq!(darboux_coefficient(0, 0), rat(1, 1));
        assert_eq!(darboux_coefficient(1, 2), rat(-1, 8));
        for n in 0..=50u64 {
            let lhs = darboux_coefficient(0, n) * rat_int(4).pow(n as i32);
            let rhs = Rational::from_integer(crate::arith::binom_exact(2 * n, n).into());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn stirling_series() {
        assert_eq!(stirling_central_binom_series(0).coeffs, rats(&[(1, 1)]));
        assert_eq!(stirling_central_binom_series(1).coeffs, rats(&[(1, 1), (-1, 8)]));
        assert_eq!(
            stirling_central_binom_series(3).coeffs,
            rats(&[(1, 1), (-1, 8), (1, 128), (5, 1024)])
        );
    }

    #[test]
    fn reciprocal_factors() {
        assert_eq!(
            reciprocal_factor_series(1, 2).coeffs(),
            rats(&[(0, 1), (1, 2), (1, 4)]).as_slice()
        );
        assert_eq!(
            reciprocal_factor_series(3, 2).coeffs(),
            rats(&[(0, 1), (3, 2), (9, 4)]).as_slice()
        );
        assert_eq!(reciprocal_factor_series(5, 0).coeffs(), rats(&[(0, 1)]).as_slice());
    }

    #[test]
    fn central_sum_coefficients() {
        let e = theorem1_expansion(3);
        assert_eq!(e.coeffs, rats(&[(1, 1), (1, 24), (59, 384), (2425, 9216)]));
        assert_eq!(e.constant, rat(1, 3));
        assert_eq!(e.growth_offset, Some(1));
        assert_eq!(e.n_power, rat(0, 1));
        assert!(e.sqrt_pi_n);
        assert_eq!(e.error_exponent, rat(9, 2));
        assert_eq!(theorem1_expansion(1).coeffs, rats(&[(1, 1), (1, 24)]));
        let first = theorem1_expansion(0);
        assert_eq!(first.coeffs, rats(&[(1, 1)]));
        assert_eq!(first.prefactor_string(), "4^(n+1)/(3*sqrt(pi*n))");
    }

    #[test]
    fn catalan_sum_coefficients() {
        let e = theorem2_expansion(3);
        assert_eq!(e.coeffs, rats(&[(1, 1), (-5, 8), (475, 384), (1225, 9216)]));
        assert_eq!(e.constant, rat(1, 3));
        assert_eq!(e.n_power, rat(-1, 1));
        assert_eq!(e.error_exponent, rat(11, 2));
        assert_eq!(theorem2_expansion(1).coeffs, rats(&[(1, 1), (-5, 8)]));
        assert_eq!(theorem2_expansion(0).prefactor_string(), "4^(n+1)/(3*n*sqrt(pi*n))");
    }

    #[test]
    fn order_stability() {
        for kind in [SumKind::Central, SumKind::Catalan] {
            let full = partial_sum_expansion(kind, 6);
            for m in 0..6 {
                let part = partial_sum_expansion(kind, m);
                assert_eq!(part.coeffs, full.coeffs[..=m].to_vec(), "{kind} m = {m}");
            }
        }
    }

    #[test]
    fn a002457_coefficients() {
        let e = a002457_expansion(3);
        assert_eq!(e.coeffs, rats(&[(1, 1), (3, 8), (-7, 128), (9, 1024)]));
        assert_eq!(e.prefactor_string(), "2*sqrt(n/pi)");
        assert_eq!(a002457_expansion(0).coeffs, rats(&[(1, 1)]));
    }

    #[test]
    fn a002457_agrees_with_index_shift() {
        // Route 2: sum_{k<n} 4^{-k}C(2k,k) = 2n C(2n,n)/4^n = 2 sqrt(n/pi) * B(1/n).
        // Shifting n -> n-1 in route 1 must reproduce it:
        // F(n-1) = 2 sqrt(n/pi) (1-t)^{1/2} sum_i g_i t^i (1-t)^{-i}, t = 1/n.
        let m = 6;
        let g = a002457_expansion(m).coeffs;
        let one_minus_t = RationalSeries::rational(vec![rat_int(1), rat_int(-1)], m);
        let inv = one_minus_t.inv().unwrap();
        let mut acc = RationalSeries::zero(Rationals, m);
        let mut t_over = RationalSeries::one(Rationals, m);
        let t_div = RationalSeries::rational(vec![rat_int(0), rat_int(1)], m)
            .mul(&inv)
            .unwrap();
        for gi in &g {
            acc = acc.add(&t_over.scale(gi)).unwrap();
            t_over = t_over.mul(&t_div).unwrap();
        }
        let shifted = acc.mul(&one_minus_t.pow(&rat(1, 2)).unwrap()).unwrap();
        assert_eq!(shifted.coeffs(), stirling_central_binom_series(m).coeffs.as_slice());
    }

    #[test]
    fn regimes() {
        let c = |re: (i64, i64), im: (i64, i64)| ComplexRational::new(rat(re.0, re.1), rat(im.0, im.1));
        assert_eq!(
            classify_alpha(&c((1, 2), (0, 1))).unwrap(),
            WeightedRegime::BranchDominant
        );
        assert_eq!(
            classify_alpha(&c((1, 8), (0, 1))).unwrap(),
            WeightedRegime::PoleDominant
        );
        assert_eq!(
            classify_alpha(&c((-1, 4), (0, 1))).unwrap(),
            WeightedRegime::TwoSingularities
        );
        assert_eq!(
            classify_alpha(&c((0, 1), (1, 4))).unwrap(),
            WeightedRegime::TwoSingularities
        );
        assert_eq!(
            classify_alpha(&c((3, 20), (1, 5))).unwrap(),
            WeightedRegime::TwoSingularities
        );
        assert_eq!(classify_alpha(&c((1, 4), (0, 1))).unwrap(), WeightedRegime::Quarter);
        assert_eq!(classify_alpha(&c((0, 1), (0, 1))), Err(DarbouxError::ZeroAlpha));
    }

    #[test]
    fn regime_one_leading_term() {
        let half = ComplexRational::real(rat(1, 2));
        let first = weighted_first_order(&half, SumKind::Central).unwrap();
        let lead = first.leading_expansion().unwrap();
        assert_eq!(lead.prefactor_string(), "2^(n+1)/sqrt(pi*n)");
        assert_eq!(lead.error_exponent, rat(3, 2));
        assert_eq!(first.claimed_error_exponent, Some(rat(3, 2)));
    }

    #[test]
    fn json_shape() {
        let j = theorem1_expansion(1).to_json();
        assert_eq!(j["constant"], "1/3");
        assert_eq!(j["pow4_offset"], 1);
        assert_eq!(j["n_power"], "0/2");
        assert_eq!(j["coeffs"], json!(["1/1", "1/24"]));
        assert_eq!(j["error_exponent"], "5/2");
    }

    #[test]
    fn display_form() {
        assert_eq!(
            theorem2_expansion(2).to_string(),
            "4^(n+1)/(3*n*sqrt(pi*n)) * (1 - 5/(8n) + 475/(384n^2) + O(n^-3))"
        );
    }
}
