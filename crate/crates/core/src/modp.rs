//! Truncated generating polynomials over `F_p`.
//!
//! For `q = p^e` with `p` odd:
//!
//! ```text
//! sum_{k<q} C(2k,k) x^k = (1 - 4x)^{(q-1)/2}
//! sum_{k<q} C_k x^k     = (1 - (1 - 4x)^{(q+1)/2}) / (2x) - x^{q-1}
//! ```
//!
//! The "direct" polynomials are built from Lucas reduction of the binomial
//! coefficients and never consult the closed forms, so each equality below
//! is checked between two independent computations.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{jacobi, legendre_q_mod3, LucasTable, PrimeFieldElem, PrimePower};
use crate::error::ModpError;
use crate::series::{ModSeries, PrimeField};

/// Dense polynomial over `F_p` with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    pub fn from_elems(p: u64, elems: &[PrimeFieldElem]) -> Self {
        Self::new(p, elems.iter().map(|e| e.value()).collect())
    }

    pub fn from_signed(p: u64, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: PrimeFieldElem) -> PrimeFieldElem {
        self.coeffs.iter().rev().fold(PrimeFieldElem::zero(self.p), |acc, &c| {
            acc * x + PrimeFieldElem::from_u64(c, self.p)
        })
    }

    /// Series view of order `order` (coefficients above the order are cut).
    pub fn to_series(&self, order: usize) -> ModSeries {
        let elems = self
            .coeffs
            .iter()
            .map(|&c| PrimeFieldElem::from_u64(c, self.p))
            .collect();
        ModSeries::new(PrimeField::new(self.p), elems, order)
    }

    pub fn from_series(series: &ModSeries) -> Self {
        Self::from_elems(series.field().p, series.coeffs())
    }

    pub fn to_json(&self) -> Value {
        json!(self.coeffs)
    }
}

impl std::fmt::Display for ModPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (k, 1) => format!("x^{k}"),
                (k, c) => format!("{c}x^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0 (mod {})", self.p)
        } else {
            write!(f, "{} (mod {})", terms.join(" + "), self.p)
        }
    }
}

fn require_odd(q: &PrimePower) -> Result<(), ModpError> {
    if q.p() == 2 {
        Err(ModpError::EvenCharacteristic)
    } else {
        Ok(())
    }
}

fn direct_central(q: &PrimePower, lucas: &LucasTable) -> ModPoly {
    let coeffs = (0..q.q()).map(|k| lucas.binom(2 * k, k).value()).collect();
    ModPoly::new(q.p(), coeffs)
}

fn direct_catalan(q: &PrimePower, lucas: &LucasTable) -> ModPoly {
    let coeffs = (0..q.q())
        .map(|k| (lucas.binom(2 * k, k) - lucas.binom(2 * k, k + 1)).value())
        .collect();
    ModPoly::new(q.p(), coeffs)
}

/// `(1 - 4x)^exponent` with binomial coefficients by Lucas reduction.
fn one_minus_four_x_pow(p: u64, exponent: u64, lucas: &LucasTable) -> Vec<PrimeFieldElem> {
    let minus_four = PrimeFieldElem::new(-4, p);
    let mut power = PrimeFieldElem::one(p);
    (0..=exponent)
        .map(|k| {
            let c = lucas.binom(exponent, k) * power;
            power = power * minus_four;
            c
        })
        .collect()
}

fn closed_central(q: &PrimePower, lucas: &LucasTable) -> ModPoly {
    ModPoly::from_elems(q.p(), &one_minus_four_x_pow(q.p(), (q.q() - 1) / 2, lucas))
}

fn closed_catalan(q: &PrimePower, lucas: &LucasTable) -> Result<ModPoly, ModpError> {
    let p = q.p();
    let mut numer: Vec<PrimeFieldElem> = one_minus_four_x_pow(p, (q.q() + 1) / 2, lucas)
        .into_iter()
        .map(|c| -c)
        .collect();
    numer[0] = numer[0] + PrimeFieldElem::one(p);
    if !numer[0].is_zero() {
        return Err(ModpError::NotDivisible);
    }
    let half = PrimeFieldElem::new(2, p).inv().ok_or(ModpError::EvenCharacteristic)?;
    let mut coeffs: Vec<u64> = numer[1..].iter().map(|&c| (c * half).value()).collect();
    let top = (q.q() - 1) as usize;
    if coeffs.len() <= top {
        coeffs.resize(top + 1, 0);
    }
    coeffs[top] = (PrimeFieldElem::from_u64(coeffs[top], p) - PrimeFieldElem::one(p)).value();
    Ok(ModPoly::new(p, coeffs))
}

/// `sum_{k<q} C(2k,k) x^k` over `F_p`, coefficient by coefficient.
pub fn central_poly_direct(q: &PrimePower) -> ModPoly {
    direct_central(q, &LucasTable::new(q.p()))
}

/// `(1 - 4x)^{(q-1)/2}` over `F_p`.
pub fn central_poly_closed(q: &PrimePower) -> Result<ModPoly, ModpError> {
    require_odd(q)?;
    Ok(closed_central(q, &LucasTable::new(q.p())))
}

/// `sum_{k<q} C_k x^k` over `F_p`, using `C_k = C(2k,k) - C(2k,k+1)`.
pub fn catalan_poly_direct(q: &PrimePower) -> ModPoly {
    direct_catalan(q, &LucasTable::new(q.p()))
}

/// `(1 - (1-4x)^{(q+1)/2}) / (2x) - x^{q-1}` over `F_p`.
pub fn catalan_poly_closed(q: &PrimePower) -> Result<ModPoly, ModpError> {
    require_odd(q)?;
    closed_catalan(q, &LucasTable::new(q.p()))
}

/// `x d/dx` applied to the direct central polynomial, compared with
/// `2x (1 - 4x)^{(q-3)/2}`.
fn xd_identity(q: &PrimePower, direct: &ModPoly, lucas: &LucasTable) -> (bool, PrimeFieldElem) {
    let p = q.p();
    let order = (q.q() - 1) as usize;
    let lhs = ModPoly::from_series(&direct.to_series(order).xd());
    let base = one_minus_four_x_pow(p, (q.q() - 3) / 2, lucas);
    let mut rhs = vec![0u64];
    rhs.extend(base.iter().map(|&c| (c * PrimeFieldElem::new(2, p)).value()));
    let rhs = ModPoly::new(p, rhs);
    let at_one = rhs.eval(PrimeFieldElem::one(p));
    (lhs == rhs, at_one)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XdReport {
    pub polynomial_identity: bool,
    /// `sum_{k<q} k C(2k,k)` in `F_p`, from the direct polynomial.
    pub direct_value: u64,
    /// `2x(1-4x)^{(q-3)/2}` at `x = 1`.
    pub closed_value: u64,
    /// `-(2/3)(q|3)` in `F_p`; only defined for `p > 3`.
    pub legendre_value: Option<u64>,
}

impl XdReport {
    pub fn passed(&self) -> bool {
        self.polynomial_identity
            && self.direct_value == self.closed_value
            && self.legendre_value.map_or(true, |v| v == self.direct_value)
    }
}

/// The `xD`-weighted sum `sum_{k<q} k C(2k,k) x^k` for odd `p`.
pub fn xd_weighted_check(q: &PrimePower) -> Result<XdReport, ModpError> {
    require_odd(q)?;
    let lucas = LucasTable::new(q.p());
    Ok(xd_report(q, &direct_central(q, &lucas), &lucas))
}

fn xd_report(q: &PrimePower, direct: &ModPoly, lucas: &LucasTable) -> XdReport {
    let p = q.p();
    let (polynomial_identity, closed_value) = xd_identity(q, direct, lucas);
    let order = (q.q() - 1) as usize;
    let direct_value = ModPoly::from_series(&direct.to_series(order).xd())
        .eval(PrimeFieldElem::one(p))
        .value();
    let legendre_value = (p > 3).then(|| {
        let three_inv = PrimeFieldElem::new(3, p).inv().expect("p > 3");
        (PrimeFieldElem::new(-2 * legendre_q_mod3(q) as i64, p) * three_inv).value()
    });
    XdReport {
        polynomial_identity,
        direct_value,
        closed_value: closed_value.value(),
        legendre_value,
    }
}

/// Result of every check for a single prime power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModpReport {
    pub q: PrimePower,
    /// Direct and closed central polynomials agree (odd `p`), or the direct
    /// polynomial is `1` (`p = 2`).
    pub central_closed_form: bool,
    /// Direct and closed Catalan polynomials agree (odd `p`), or the direct
    /// polynomial is `sum x^{2^i - 1}` (`p = 2`).
    pub catalan_closed_form: bool,
    /// Coefficients strictly between `(q-1)/2` and `q` vanish (odd `p`).
    pub degree_bound: bool,
    pub legendre: i8,
    /// `sum_{k<q} C(2k,k)` in `F_p`.
    pub central_at_one: u64,
    /// `sum_{k<q} C_k` in `F_p`.
    pub catalan_at_one: u64,
    pub central_at_one_ok: bool,
    pub catalan_at_one_ok: bool,
    /// `(-3)^{(q-1)/2} = (q|3)` in `F_p`, and the Jacobi symbol `(-3|p)`
    /// agrees for `e = 1`. `None` for `p = 2`.
    pub minus_three_fact: Option<bool>,
    pub xd: Option<XdReport>,
}

impl ModpReport {
    pub fn passed(&self) -> bool {
        self.central_closed_form
            && self.catalan_closed_form
            && self.degree_bound
            && self.central_at_one_ok
            && self.catalan_at_one_ok
            && self.minus_three_fact.unwrap_or(true)
            && self.xd.as_ref().map_or(true, XdReport::passed)
    }

    /// One JSON line of the sweep report.
    pub fn to_json(&self) -> Value {
        let verdict = |ok: bool| if ok { "pass" } else { "fail" };
        json!({
            "q": self.q.q(),
            "p": self.q.p(),
            "e": self.q.e(),
            "theorem3": verdict(self.central_closed_form),
            "theorem4": verdict(self.catalan_closed_form),
            "degree_bound": verdict(self.degree_bound),
            "eq9_central": self.central_at_one,
            "eq9_catalan": self.catalan_at_one,
            "legendre": self.legendre,
            "xd": self.xd.as_ref().map_or("n/a", |x| verdict(x.passed())),
        })
    }
}

/// `(q|3)` and `(3(q|3) - 1)/2` as elements of `F_p`.
fn values_at_one_targets(q: &PrimePower) -> (PrimeFieldElem, PrimeFieldElem) {
    let p = q.p();
    let sym = legendre_q_mod3(q) as i64;
    let central = PrimeFieldElem::new(sym, p);
    // s = 0 gives -1/2, which needs 2 to be invertible; that case has p = 3.
    // For p = 2 the target is (e + 1) mod 2.
    let catalan = if sym == 0 {
        -PrimeFieldElem::new(2, p).inv().expect("odd p when 3 | q")
    } else {
        PrimeFieldElem::new((3 * sym - 1) / 2, p)
    };
    (central, catalan)
}

/// Runs every check for one prime power.
pub fn sums_mod_p_check(q: &PrimePower) -> ModpReport {
    let p = q.p();
    let lucas = LucasTable::new(p);
    let central = direct_central(q, &lucas);
    let catalan = direct_catalan(q, &lucas);
    let one = PrimeFieldElem::one(p);
    let central_at_one = central.eval(one);
    let catalan_at_one = catalan.eval(one);
    let legendre = legendre_q_mod3(q);

    let (target_central, target_catalan) = values_at_one_targets(q);

    if p == 2 {
        let central_closed_form = central == p2_central_expected(q);
        let catalan_closed_form = catalan == p2_catalan_expected(q);
        return ModpReport {
            q: *q,
            central_closed_form,
            catalan_closed_form,
            degree_bound: true,
            legendre,
            central_at_one: central_at_one.value(),
            catalan_at_one: catalan_at_one.value(),
            central_at_one_ok: central_at_one == target_central,
            catalan_at_one_ok: catalan_at_one == target_catalan,
            minus_three_fact: None,
            xd: None,
        };
    }

    let central_closed_form = central == closed_central(q, &lucas);
    let catalan_closed_form = closed_catalan(q, &lucas).map_or(false, |closed| closed == catalan);
    let half = ((q.q() - 1) / 2) as usize;
    let degree_bound = (half + 1..q.q() as usize).all(|k| central.coeff(k) == 0);
    let symbol = PrimeFieldElem::new(legendre as i64, p);
    let mut minus_three = PrimeFieldElem::new(-3, p).pow((q.q() - 1) / 2) == symbol;
    if q.e() == 1 && p > 3 {
        minus_three &= jacobi(-3, p as i64).ok() == Some(legendre);
    }
    ModpReport {
        q: *q,
        central_closed_form,
        catalan_closed_form,
        degree_bound,
        legendre,
        central_at_one: central_at_one.value(),
        catalan_at_one: catalan_at_one.value(),
        central_at_one_ok: central_at_one == target_central,
        catalan_at_one_ok: catalan_at_one == target_catalan,
        minus_three_fact: Some(minus_three),
        xd: Some(xd_report(q, &central, &lucas)),
    }
}

fn require_two_power(q: &PrimePower) -> Result<(), ModpError> {
    if q.p() == 2 {
        Ok(())
    } else {
        Err(ModpError::NotPowerOfTwo(q.q()))
    }
}

fn p2_central_expected(q: &PrimePower) -> ModPoly {
    ModPoly::new(q.p(), vec![1])
}

fn p2_catalan_expected(q: &PrimePower) -> ModPoly {
    let mut coeffs = vec![0u64; q.q() as usize];
    let mut i = 1u64;
    while i - 1 < q.q() {
        coeffs[(i - 1) as usize] = 1;
        i *= 2;
    }
    ModPoly::new(q.p(), coeffs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P2Report {
    pub q: u64,
    pub polynomial: Vec<u64>,
    pub expected: Vec<u64>,
    /// Value of the sum at `x = 1` in `F_2`.
    pub value_at_one: u64,
    /// The value predicted by the Legendre-symbol congruence.
    pub expected_at_one: u64,
}

impl P2Report {
    pub fn passed(&self) -> bool {
        self.polynomial == self.expected && self.value_at_one == self.expected_at_one
    }
}

/// Over `F_2`, `sum_{k<q} C(2k,k) x^k = 1`.
pub fn p2_central_check(q: &PrimePower) -> Result<P2Report, ModpError> {
    require_two_power(q)?;
    let direct = central_poly_direct(q);
    Ok(P2Report {
        q: q.q(),
        value_at_one: direct.eval(PrimeFieldElem::one(2)).value(),
        expected_at_one: values_at_one_targets(q).0.value(),
        polynomial: direct.coeffs().to_vec(),
        expected: p2_central_expected(q).coeffs().to_vec(),
    })
}

/// Over `F_2`, `sum_{k<q} C_k x^k = sum_{2^i - 1 < q} x^{2^i - 1}`.
pub fn p2_catalan_check(q: &PrimePower) -> Result<P2Report, ModpError> {
    require_two_power(q)?;
    let direct = catalan_poly_direct(q);
    Ok(P2Report {
        q: q.q(),
        value_at_one: direct.eval(PrimeFieldElem::one(2)).value(),
        expected_at_one: values_at_one_targets(q).1.value(),
        polynomial: direct.coeffs().to_vec(),
        expected: p2_catalan_expected(q).coeffs().to_vec(),
    })
}

/// Closed-form values `((1-4a)^{(q-1)/2}, (1-(1-4a)^{(q+1)/2})/(2a) - a^{q-1})`
/// of the two truncated sums at `x = alpha`; `(1, 1)` when `alpha = 0`.
pub fn weighted_eval_mod_p(
    q: &PrimePower,
    alpha: PrimeFieldElem,
) -> Result<(PrimeFieldElem, PrimeFieldElem), ModpError> {
    require_odd(q)?;
    let p = q.p();
    let one = PrimeFieldElem::one(p);
    if alpha.is_zero() {
        return Ok((one, one));
    }
    let base = one - PrimeFieldElem::new(4, p) * alpha;
    let central = base.pow((q.q() - 1) / 2);
    let two_alpha_inv = (PrimeFieldElem::new(2, p) * alpha).inv().expect("alpha != 0, p odd");
    let catalan = (one - base.pow((q.q() + 1) / 2)) * two_alpha_inv - alpha.pow(q.q() - 1);
    Ok((central, catalan))
}

/// The same two sums evaluated from the direct polynomials.
pub fn weighted_eval_direct(q: &PrimePower, alpha: PrimeFieldElem) -> (PrimeFieldElem, PrimeFieldElem) {
    let lucas = LucasTable::new(q.p());
    (
        direct_central(q, &lucas).eval(alpha),
        direct_catalan(q, &lucas).eval(alpha),
    )
}

/// Checks every prime power `q < bound`, in parallel, in increasing order of `q`.
pub fn sweep(bound: u64) -> Vec<ModpReport> {
    crate::arith::prime_powers_below(bound)
        .par_iter()
        .map(sums_mod_p_check)
        .collect()
}
