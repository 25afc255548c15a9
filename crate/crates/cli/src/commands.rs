use catalan_asym::arith::{format_rational, ComplexRational, PrimeFieldElem, PrimePower};
use catalan_asym::darboux::{SumKind, WeightedRegime};
use catalan_asym::modp::{self, ModpReport};
use catalan_asym::sums::{
    self, exact_string, residual_report, residual_spread, weighted_partial_sum_complex, weighted_regime_verify,
    ExpansionTarget,
};
use catalan_asym::{AsymExpansion, HighPrecComplex};
use clap::ValueEnum;
use serde_json::{json, Value};

use crate::report::{approx, exact, Report};
use crate::CliError;

/// Largest order computed without a warning.
pub const MAX_ORDER: usize = 8;
/// Residuals across the n-list may differ by at most this factor.
pub const SPREAD_LIMIT: f64 = 4.0;
/// Allowed shortfall of an observed decay exponent against the claimed one.
pub const RATE_SLACK: f64 = 0.2;
/// Polynomials are printed in full only up to this `q`.
const PRINT_POLY_MAX_Q: u64 = 128;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Central,
    Catalan,
    A002457,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Central => "central",
            Kind::Catalan => "catalan",
            Kind::A002457 => "a002457",
        }
    }

    fn target(self) -> ExpansionTarget {
        match self {
            Kind::Central => ExpansionTarget::Central,
            Kind::Catalan => ExpansionTarget::Catalan,
            Kind::A002457 => ExpansionTarget::A002457,
        }
    }

    fn sum_kind(self) -> Option<SumKind> {
        match self {
            Kind::Central => Some(SumKind::Central),
            Kind::Catalan => Some(SumKind::Catalan),
            Kind::A002457 => None,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum WeightKind {
    Central,
    Catalan,
}

impl From<WeightKind> for SumKind {
    fn from(kind: WeightKind) -> Self {
        match kind {
            WeightKind::Central => SumKind::Central,
            WeightKind::Catalan => SumKind::Catalan,
        }
    }
}

/// Half the decimal digits carried at `precision` bits: the part confirmed
/// by the two-precision check.
pub fn display_digits(precision: u32) -> usize {
    ((precision as f64 * std::f64::consts::LOG10_2) / 2.0).floor().max(8.0) as usize
}

fn expansion(kind: Kind, order: usize) -> AsymExpansion {
    if order > MAX_ORDER {
        eprintln!("warning: order {order} exceeds the default maximum {MAX_ORDER}; extending the Bernoulli table");
    }
    kind.target().expansion(order)
}

fn expansion_summary(report: &mut Report, exp: &AsymExpansion) {
    report.summary.push(("prefactor".into(), exp.prefactor_string()));
    report.summary.push(("expansion".into(), exp.to_string()));
    report
        .summary
        .push(("relative error".into(), format!("O(n^-{})", exp.relative_error_order())));
}

pub fn cmd_asym(kind: Kind, order: usize, config: Vec<(&'static str, Value)>) -> Report {
    let exp = expansion(kind, order);
    let mut report = Report::new("asym", config);
    expansion_summary(&mut report, &exp);
    report.columns = vec![exact("k"), exact("coefficient")];
    report.rows = exp
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| vec![k.to_string(), c.to_string()])
        .collect();
    let mut json = exp.to_json();
    json["prefactor"] = json!(exp.prefactor_string());
    json["kind"] = json!(kind.name());
    report.json = json;
    report
}

pub fn cmd_verify_asym(
    kind: Kind,
    order: usize,
    ns: &[u64],
    precision: u32,
    config: Vec<(&'static str, Value)>,
) -> Result<Report, CliError> {
    let exp = expansion(kind, order);
    let rows = residual_report(&exp, kind.target(), ns, precision).map_err(|e| CliError::Math(e.to_string()))?;
    let digits = display_digits(precision);
    let spread = (rows.len() >= 2).then(|| residual_spread(&rows));
    let precision_ok = rows.iter().all(|r| r.precision_ok);
    let passed = precision_ok && spread.map_or(true, |s| s < SPREAD_LIMIT);

    let mut report = Report::new("verify-asym", config);
    expansion_summary(&mut report, &exp);
    report.summary.push((
        "residual".into(),
        format!("n^{} * (exact/prefactor - series)", exp.relative_error_order()),
    ));
    if let Some(s) = spread {
        report
            .summary
            .push(("residual spread".into(), format!("≈{s:.4} (limit {SPREAD_LIMIT})")));
    }
    report.columns = vec![
        exact("n"),
        exact("exact"),
        approx("approx"),
        approx("ratio"),
        approx("residual"),
        exact("precision"),
    ];
    report.rows = rows.iter().map(|r| r.csv_fields(digits).to_vec()).collect();
    report.json = json!({
        "kind": kind.name(),
        "expansion": exp.to_json(),
        "rows": rows.iter().map(|r| {
            let mut v = r.to_json(digits);
            v["relative_error"] = json!(format!("{:.3e}", r.relative_error()));
            v
        }).collect::<Vec<_>>(),
        "residual_spread": spread,
        "spread_limit": SPREAD_LIMIT,
    });
    report.passed = Some(passed);
    Ok(report)
}

pub fn cmd_sum(
    kind: Kind,
    ns: &[u64],
    alpha: Option<&ComplexRational>,
    precision: u32,
    config: Vec<(&'static str, Value)>,
) -> Result<Report, CliError> {
    let digits = display_digits(precision);
    let mut report = Report::new("sum", config);
    let mut json_rows = Vec::new();
    match alpha {
        None => {
            report.columns = vec![exact("n"), exact("sum")];
            for &n in ns {
                let value = exact_string(&kind.target().exact_sum(n));
                report.rows.push(vec![n.to_string(), value.clone()]);
                json_rows.push(json!({ "n": n, "sum": value }));
            }
        }
        Some(alpha) => {
            let sum_kind = kind
                .sum_kind()
                .ok_or_else(|| CliError::Usage("--alpha applies to central and catalan sums only".into()))?;
            report.summary.push(("alpha".into(), alpha.to_string()));
            report.columns = vec![exact("n"), exact("re"), exact("im"), approx("value")];
            for &n in ns {
                let value = weighted_partial_sum_complex(alpha, n, sum_kind);
                let numeric = HighPrecComplex::from_rational(&value, precision).to_string_digits(digits);
                let (re, im) = (exact_string(&value.re), exact_string(&value.im));
                report
                    .rows
                    .push(vec![n.to_string(), re.clone(), im.clone(), numeric.clone()]);
                json_rows.push(json!({ "n": n, "re": re, "im": im, "approx": numeric }));
            }
        }
    }
    report.json = json!({ "kind": kind.name(), "rows": json_rows });
    Ok(report)
}

pub fn cmd_weighted(
    kind: WeightKind,
    alpha: &ComplexRational,
    ns: &[u64],
    precision: u32,
    config: Vec<(&'static str, Value)>,
) -> Result<Report, CliError> {
    if alpha.is_zero() {
        return Err(CliError::Usage("alpha must be nonzero".into()));
    }
    let verified =
        weighted_regime_verify(alpha, kind.into(), ns, precision).map_err(|e| CliError::Math(e.to_string()))?;
    let digits = display_digits(precision);
    let first = &verified.first_order;
    let mut report = Report::new("weighted", config);
    report.summary.push(("alpha".into(), alpha.to_string()));
    report.summary.push(("regime".into(), first.regime.to_string()));
    if let Some(lead) = first.leading_expansion() {
        report.summary.push(("leading term".into(), lead.prefactor_string()));
    } else if first.regime == WeightedRegime::BranchDominant {
        let tail = if first.kind == SumKind::Catalan { "n*" } else { "" };
        report.summary.push((
            "leading term".into(),
            format!("(4a)^(n+1)/((4a-1)*{tail}sqrt(pi*n)) with a = {alpha}"),
        ));
    } else if first.regime == WeightedRegime::Quarter {
        report
            .summary
            .push(("closed form".into(), "(2n+1) C(2n,n) / 4^n".into()));
    } else {
        report.summary.push((
            "limit".into(),
            sums::weighted_limit(first, precision)
                .map_or("diverges".to_string(), |l| format!("≈{}", l.to_string_digits(digits))),
        ));
    }
    if let Some(claimed) = &first.claimed_error_exponent {
        report
            .summary
            .push(("claimed error exponent".into(), format_rational(claimed)));
    }
    if !verified.observed_exponents.is_empty() {
        let observed: Vec<String> = verified
            .observed_exponents
            .iter()
            .map(|e| {
                if e.is_finite() {
                    format!("{e:.4}")
                } else {
                    "converged".into()
                }
            })
            .collect();
        report.summary.push(("observed exponents".into(), observed.join(", ")));
    }
    report.columns = vec![
        exact("n"),
        approx("sum"),
        approx("reference"),
        approx("ratio"),
        approx("error"),
        exact("exact_match"),
    ];
    report.rows = verified
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.sum.to_string_digits(digits),
                r.reference.to_string_digits(digits),
                r.ratio.to_string_digits(digits),
                r.error.to_sci_string(digits),
                r.exact_match.map_or("n/a".to_string(), |b| b.to_string()),
            ]
        })
        .collect();
    report.json = verified.to_json(digits);
    report.passed = Some(verified.rates_consistent(RATE_SLACK));
    Ok(report)
}

fn modp_row(r: &ModpReport) -> Vec<String> {
    let verdict = |ok: bool| if ok { "pass" } else { "fail" }.to_string();
    vec![
        r.q.q().to_string(),
        r.q.p().to_string(),
        r.q.e().to_string(),
        verdict(r.central_closed_form),
        verdict(r.catalan_closed_form),
        verdict(r.degree_bound),
        r.central_at_one.to_string(),
        r.catalan_at_one.to_string(),
        verdict(r.central_at_one_ok && r.catalan_at_one_ok),
        r.legendre.to_string(),
        r.xd.as_ref().map_or("n/a".to_string(), |x| verdict(x.passed())),
    ]
}

fn modp_columns() -> Vec<crate::report::Column> {
    vec![
        exact("q"),
        exact("p"),
        exact("e"),
        exact("central_poly"),
        exact("catalan_poly"),
        exact("degree"),
        exact("central_at_1"),
        exact("catalan_at_1"),
        exact("at_1"),
        exact("legendre"),
        exact("xd"),
    ]
}

/// `alpha` is interpreted in `F_p` (a rational `a/b` maps to `a * b^{-1}`).
pub fn cmd_modp_single(
    q: u64,
    alpha: Option<&ComplexRational>,
    config: Vec<(&'static str, Value)>,
) -> Result<Report, CliError> {
    let q = PrimePower::from_q(q).map_err(|e| CliError::Usage(e.to_string()))?;
    let checked = modp::sums_mod_p_check(&q);
    let mut passed = checked.passed();
    let mut report = Report::new("modp", config);
    report.summary.push(("q".into(), format!("{} = {}", q.q(), q)));
    let mut json = checked.to_json();

    if q.q() <= PRINT_POLY_MAX_Q {
        let central = modp::central_poly_direct(&q);
        let catalan = modp::catalan_poly_direct(&q);
        report.summary.push(("central sum".into(), central.to_string()));
        report.summary.push(("catalan sum".into(), catalan.to_string()));
        json["central_poly"] = central.to_json();
        json["catalan_poly"] = catalan.to_json();
    }
    if let Some(xd) = &checked.xd {
        let legendre = xd.legendre_value.map_or("n/a".to_string(), |v| v.to_string());
        report.summary.push((
            "xD sum at x=1".into(),
            format!(
                "{} (closed form {}, -(2/3)(q|3) = {legendre})",
                xd.direct_value, xd.closed_value
            ),
        ));
        json["xd_detail"] = json!(xd);
    }
    if q.p() == 2 {
        let central = modp::p2_central_check(&q).map_err(|e| CliError::Math(e.to_string()))?;
        let catalan = modp::p2_catalan_check(&q).map_err(|e| CliError::Math(e.to_string()))?;
        passed &= central.passed() && catalan.passed();
        json["p2_central"] = json!(central);
        json["p2_catalan"] = json!(catalan);
    }
    if let Some(alpha) = alpha {
        if !alpha.is_real() {
            return Err(CliError::Usage("alpha must be real for modp".into()));
        }
        let a = PrimeFieldElem::from_rational(&alpha.re, q.p())
            .ok_or_else(|| CliError::Usage(format!("alpha {} is not defined mod {}", alpha, q.p())))?;
        let direct = modp::weighted_eval_direct(&q, a);
        let closed = if q.p() == 2 {
            None
        } else {
            modp::weighted_eval_mod_p(&q, a).ok()
        };
        let agree = closed.map_or(true, |c| c == direct);
        passed &= agree;
        report.summary.push((
            format!("sums at x = {}", a.value()),
            format!("central {}, catalan {}", direct.0.value(), direct.1.value()),
        ));
        json["weighted"] = json!({
            "alpha": a.value(),
            "central": direct.0.value(),
            "catalan": direct.1.value(),
            "closed_form_agrees": closed.map(|_| agree),
        });
    }
    report.columns = modp_columns();
    report.rows = vec![modp_row(&checked)];
    report.json = json;
    report.passed = Some(passed);
    Ok(report)
}

pub fn cmd_modp_sweep(bound: u64, config: Vec<(&'static str, Value)>) -> Report {
    let results = modp::sweep(bound);
    let failures: Vec<u64> = results.iter().filter(|r| !r.passed()).map(|r| r.q.q()).collect();
    let mut report = Report::new("modp", config);
    report
        .summary
        .push(("prime powers checked".into(), results.len().to_string()));
    report.summary.push(("failures".into(), failures.len().to_string()));
    report.columns = modp_columns();
    report.rows = results.iter().map(modp_row).collect();
    report.json_lines = Some(results.iter().map(ModpReport::to_json).collect());
    report.json = json!({ "checked": results.len(), "failed_q": failures });
    report.passed = Some(failures.is_empty());
    report
}
