//! Batch verification: published-value regression, closed-form regression
//! and identity residual grids, collected into a [`VerificationReport`].

use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::identities::{gen_fixed_alternating, Family, Identity};
use crate::numerics::{NumericalResult, PrecisionContext};
use crate::parse::{parse_identity, parse_signature};
use crate::real::Real;
use crate::solver::reduce;
use crate::sums::euler_sum_value;
use crate::table::KnownReductionTable;

/// Residual tolerance for closed forms and grid identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-25;
/// Leading digits that must agree with a published 30-digit value.
pub const TABLE_DIGITS: u32 = 25;

/// Published values: signature, value of the closed form, direct numerical
/// approximation. The two columns differ in the last few digits.
pub const TABLE1: [(&str, &str, &str); 17] = [
    ("S(2,2;3)", "1.35125578526281388688070479101", "1.35125578526281388688070478635"),
    ("S(2,3;2)", "2.04014406352629668230178759593", "2.04014406352629668230178759172"),
    ("S(1,2;5)", "1.07388087034296588059339568891", "1.07388087034296588059339568663"),
    ("S(1,3;4)", "1.15201859049597540982393939989", "1.15201859049597540982393939372"),
    ("S(1,4;3)", "1.37755320390542981268777869872", "1.37755320390542981268777869712"),
    ("S(1,5;2)", "2.45339834780017683307966649793", "2.45339834780017683307966649461"),
    ("S(2,2;4)", "1.13642391274089928376327915373", "1.13642391274089928376327915559"),
    ("S(2,4;2)", "1.95980117454124719492773304920", "1.95980117454124719492773304287"),
    ("S(2,2;5)", "1.05972458873705638208576920975", "1.05972458873705638208576920818"),
    ("S(2,5;2)", "1.92499254625584068819896689186", "1.92499254625584068819896688762"),
    ("S(3,4;2)", "1.80313006078587093607835773253", "1.80313006078587093607835772809"),
    ("S(1,2;7)", "1.01603499621822946463309621255", "1.01603499621822946463309621221"),
    ("S(1,3;6)", "1.03017876630576928913732006061", "1.03017876630576928913732005893"),
    ("S(1,4;5)", "1.06164990978502285301181351196", "1.06164990978502285301181351270"),
    ("S(1,5;4)", "1.13783419529420067466663388885", "1.13783419529420067466663388537"),
    ("S(1,6;3)", "1.35867450783449320806721637607", "1.35867450783449320806721637012"),
    ("S(1,7;2)", "2.41561649536052525591387317796", "2.41561649536052525591387317514"),
];

/// Closed forms of `H_n zeta_n(m)/n^p` type sums, weights 6 to 10.
pub const HARMONIC_CLOSED_FORMS: [&str; 12] = [
    "S(1,2;3) == -101/48*z6 + 5/2*z3^2",
    "S(1,3;2) == 227/48*z6 - 3/2*z3^2",
    "S(1,2;5) == -343/48*z8 + 12*z3*z5 - 5/2*z2*z3^2 - 3/4*S(2;6)",
    "S(1,3;4) == -511/144*z8 + 7*z3*z5 + z2*z3^2 - 25/4*S(2;6)",
    "S(1,4;3) == 443/48*z8 - 21/2*z3*z5 - 1/2*z2*z3^2 + 25/4*S(2;6)",
    "S(1,5;2) == 1063/144*z8 - 13/2*z3*z5 + z2*z3^2 + 3/4*S(2;6)",
    "S(1,2;7) == -1331/80*z10 + 43/4*z5^2 + 41/2*z3*z7 - 7*z2*z3*z5 - 2*z3^2*z4 - 5/4*S(2;8)",
    "S(1,3;6) == -247/40*z10 - 5/4*z5^2 - 15/2*z3*z7 + 12*z2*z3*z5 - 21/4*S(2;8) - z2*S(2;6)",
    "S(1,4;5) == 6033/160*z10 - 14*z5^2 - 4*z3*z7 - 15*z2*z3*z5 - 1/2*z3^2*z4 + 21/2*S(2;8) + 5/2*z2*S(2;6)",
    "S(1,5;4) == -6569/240*z10 + 16*z5^2 + 10*z3*z7 + 4*z2*z3*z5 + z3^2*z4 - 21/2*S(2;8)",
    "S(1,6;3) == 1043/160*z10 - 17/4*z5^2 - 15/2*z3*z7 + 4*z2*z3*z5 - 1/2*z3^2*z4 - 5/2*z2*S(2;6) + 21/4*S(2;8)",
    "S(1,7;2) == 242/15*z10 - 25/4*z5^2 - 19/2*z3*z7 + z3^2*z4 + z2*S(2;6) + 5/4*S(2;8)",
];

/// Combinations of `zeta_n(a) zeta_n(b)/n^q` sums, weights 7 to 9.
pub const COMBINATIONS: [&str; 8] = [
    "2*S(2,3;2) + S(2,2;3) == 13/2*z3*z4 - 3*z7",
    "S(2,3;2) + S(2,2;3) == -179/16*z7 + 8*z3*z4 + 5/2*z2*z5",
    "S(2,2;4) + 2*S(2,4;2) == 3*z8 + 2*S(2;6)",
    "S(2,2;4) - S(2,4;2) == 1317/36*z8 - 60*z3*z5 + 9*z2*z3^2 + 31/2*S(2;6)",
    "2*S(2,5;2) + S(2,2;5) == 55/2*z9 - 21*z2*z7 + 4*z3*z6 + 13/2*z4*z5",
    "S(2,5;2) + S(2,2;5) == -79/72*z9 - 7*z2*z7 + 4/3*z3*z6 + 23/2*z4*z5 + 2/3*z3^3",
    "S(2,4;3) + S(2,3;4) == -35*z9 + 14*z2*z7 + 107/12*z3*z6 + 7/2*z4*z5 - 1/3*z3^3",
    "S(2,4;3) + S(2,3;4) + S(3,4;2) == -77/2*z9 + 21*z2*z7 + 15/4*z3*z6 + 3*z4*z5",
];

/// Closed forms of `zeta_n(a) zeta_n(b)/n^q` sums, weights 7 to 9.
pub const PRODUCT_CLOSED_FORMS: [&str; 7] = [
    "S(2,2;3) == -155/8*z7 + 19/2*z3*z4 + 5*z2*z5",
    "S(2,3;2) == 131/16*z7 - 3/2*z3*z4 - 5/2*z2*z5",
    "S(2,2;4) == 11*S(2;6) + 457/18*z8 + 6*z2*z3^2 - 40*z3*z5",
    "S(2,4;2) == -9/2*S(2;6) - 403/36*z8 - 3*z2*z3^2 + 20*z3*z5",
    "S(2,2;5) == -1069/36*z9 + 4/3*z3^3 + 7*z2*z7 - 4/3*z3*z6 + 33/2*z4*z5",
    "S(2,5;2) == 2059/72*z9 - 2/3*z3^3 - 14*z2*z7 + 8/3*z3*z6 - 5*z4*z5",
    "S(3,4;2) == -7/2*z9 + 7*z2*z7 - 31/6*z3*z6 - 1/2*z4*z5 + 1/3*z3^3",
];

/// The even-gap cubic family at `(p, m) = (2, 1)`, and the two weight-9
/// sums obtained by combining it with the rest.
pub const WEIGHT9_FORMS: [&str; 3] = [
    "S(3,4;2) - S(2,3;4) == -1063/36*z9 + 14*z2*z7 - 37/6*z3*z6 + 13*z4*z5",
    "S(2,3;4) == 937/36*z9 + 1/3*z3^3 - 7*z2*z7 + z3*z6 - 27/2*z4*z5",
    "S(2,4;3) == -2197/36*z9 - 2/3*z3^3 + 21*z2*z7 + 95/12*z3*z6 + 17*z4*z5",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One check. `residual` and `bound` are in the units of `tolerance`; the
/// check passes iff `residual + bound <= tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub value: Option<String>,
    pub residual: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub elapsed_ms: f64,
    pub detail: String,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn summary(&self) -> Summary {
        let passed = self.records.iter().filter(|r| r.passed()).count();
        Summary { total: self.records.len(), passed, failed: self.records.len() - passed }
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed())
    }

    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.records.extend(other.records);
        self.records.sort_by(|a, b| a.id.cmp(&b.id));
        self
    }

    /// Copy with timings zeroed, for run-to-run comparison.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.records.iter_mut().for_each(|c| c.elapsed_ms = 0.0);
        r
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let verdict = if r.passed() { "PASS" } else { "FAIL" };
            let _ = write!(out, "{verdict} {} residual={:.3e} bound={:.3e} tol={:.0e}", r.id, r.residual, r.bound, r.tolerance);
            if let Some(v) = &r.value {
                let _ = write!(out, " value={v}");
            }
            if !r.detail.is_empty() {
                let _ = write!(out, " [{}]", r.detail);
            }
            out.push('\n');
        }
        let s = self.summary();
        let _ = writeln!(out, "{} checks: {} passed, {} failed", s.total, s.passed, s.failed);
        out
    }
}

/// How a batch of checks is scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon pool; falls back to sequential without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

struct Outcome {
    value: Option<String>,
    residual: f64,
    bound: f64,
    detail: String,
}

type CheckFn = Box<dyn Fn(&PrecisionContext) -> Result<Outcome> + Send + Sync>;

struct Check {
    id: String,
    anchor: String,
    tolerance: f64,
    run: CheckFn,
}

impl Check {
    fn execute(&self, ctx: &PrecisionContext) -> CheckRecord {
        let start = Instant::now();
        let out = (self.run)(ctx);
        let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        let (value, residual, bound, detail, ok) = match out {
            Ok(o) => {
                let ok = o.residual.is_finite() && o.bound.is_finite() && o.residual + o.bound <= self.tolerance;
                (o.value, o.residual, o.bound, o.detail, ok)
            }
            Err(e) => (None, f64::INFINITY, f64::INFINITY, e.to_string(), false),
        };
        CheckRecord {
            id: self.id.clone(),
            anchor: self.anchor.clone(),
            value,
            residual,
            bound,
            tolerance: self.tolerance,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            elapsed_ms,
            detail,
        }
    }
}

fn run_checks(checks: Vec<Check>, ctx: &PrecisionContext, exec: Execution) -> VerificationReport {
    let mut records: Vec<CheckRecord> = match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            checks.par_iter().map(|c| c.execute(ctx)).collect()
        }
        _ => checks.iter().map(|c| c.execute(ctx)).collect(),
    };
    records.sort_by(|a, b| a.id.cmp(&b.id));
    VerificationReport { records }
}

fn require_digits(ctx: &PrecisionContext, digits: u32) -> Result<()> {
    if ctx.target_digits < digits {
        return Err(Error::Domain(format!("need at least {digits} target digits, got {}", ctx.target_digits)));
    }
    Ok(())
}

/// Exact value of a decimal string such as `1.35`.
pub fn decimal_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Parse { pos: 0, msg: format!("not a decimal number: {text}") };
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() || !int_part.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac}").parse().map_err(|_| bad())?;
    let r = Rational::new(digits, num_traits::pow(BigInt::from(10), frac.len()));
    Ok(if neg { -r } else { r })
}

/// Relative disagreement of `x` with `reference`, and the relative bound.
fn relative_gap(x: &NumericalResult, reference: &Rational) -> (f64, f64) {
    let r = Real::from_rational(reference, x.bits());
    let scale = r.to_f64().abs();
    ((&x.value - &r).to_f64().abs() / scale, x.abs_error_bound / scale)
}

/// Leading significant digits that agree, given a relative gap.
pub fn agreeing_digits(relative: f64) -> u32 {
    if relative <= 0.0 {
        return u32::MAX;
    }
    (-relative.log10()).floor().max(0.0) as u32
}

fn closed_form_of(sig: &str) -> Option<&'static str> {
    HARMONIC_CLOSED_FORMS
        .iter()
        .chain(PRODUCT_CLOSED_FORMS.iter())
        .find(|t| t.split("==").next().map(str::trim) == Some(sig))
        .copied()
}

fn compare_columns(x: &NumericalResult, columns: &[Rational; 2]) -> Outcome {
    let gaps: Vec<(f64, f64)> = columns.iter().map(|c| relative_gap(x, c)).collect();
    let residual = gaps.iter().map(|g| g.0).fold(0.0, f64::max);
    let bound = gaps.iter().map(|g| g.1).fold(0.0, f64::max);
    let digits: Vec<u32> = gaps.iter().map(|(r, b)| agreeing_digits(r + b)).collect();
    Outcome {
        value: Some(x.display(32)),
        residual,
        bound,
        detail: format!("digits vs closed column {}, vs approximation column {}; certified places {}", digits[0], digits[1], x.certified_digits()),
    }
}

/// Direct evaluation and closed-form evaluation of the 17 tabulated sums,
/// each compared with both published columns to `TABLE_DIGITS` digits.
pub fn verify_table1(ctx: &PrecisionContext) -> Result<VerificationReport> {
    verify_table1_with(ctx, Execution::default())
}

pub fn verify_table1_with(ctx: &PrecisionContext, exec: Execution) -> Result<VerificationReport> {
    require_digits(ctx, TABLE_DIGITS)?;
    let tolerance = 10f64.powi(-(TABLE_DIGITS as i32));
    let mut checks = Vec::new();
    for (i, (sig, closed, approx)) in TABLE1.iter().enumerate() {
        let columns = [decimal_rational(closed)?, decimal_rational(approx)?];
        let s = parse_signature(sig)?;
        let cols = columns.clone();
        checks.push(Check {
            id: format!("table/{:02}/{sig}/sum", i + 1),
            anchor: "numerical table".into(),
            tolerance,
            run: Box::new(move |ctx| Ok(compare_columns(&euler_sum_value(&s, ctx)?, &cols))),
        });
        let form = closed_form_of(sig).ok_or_else(|| Error::Domain(format!("no closed form listed for {sig}")))?;
        let (_, rhs) = parse_identity(form)?;
        checks.push(Check {
            id: format!("table/{:02}/{sig}/closed-form", i + 1),
            anchor: "numerical table".into(),
            tolerance,
            run: Box::new(move |ctx| Ok(compare_columns(&rhs.eval(ctx)?, &columns))),
        });
    }
    Ok(run_checks(checks, ctx, exec))
}

/// Structural comparison through the solver, plus a numerical residual of
/// `lhs - rhs` against the direct sums. Structure is only decided when the
/// relation system reaches every sum; otherwise the numerical check alone
/// decides and the detail names the sums left over.
fn closed_form_check(id: String, anchor: &str, text: &'static str, structural: bool) -> Result<Check> {
    let (lhs, rhs) = parse_identity(text)?;
    Ok(Check {
        id,
        anchor: anchor.into(),
        tolerance: IDENTITY_TOLERANCE,
        run: Box::new(move |ctx| {
            let diff = (&lhs - &rhs).canonical();
            let mut detail = String::new();
            if structural {
                let table = KnownReductionTable::bundled()?;
                let red = reduce(&diff, table)?;
                if red.remaining.is_empty() {
                    if !red.expr.is_zero() {
                        return Ok(Outcome {
                            value: None,
                            residual: f64::INFINITY,
                            bound: 0.0,
                            detail: format!("structural mismatch: lhs - rhs reduces to {}", red.expr),
                        });
                    }
                    detail.push_str("structural match");
                } else {
                    let names: Vec<String> = red.remaining.iter().map(|s| s.to_string()).collect();
                    detail = format!("rank-deficient, numerical only; unresolved {}", names.join(", "));
                }
            }
            let r = diff.eval(ctx)?;
            Ok(Outcome { value: None, residual: r.abs_value(), bound: r.abs_error_bound, detail })
        }),
    })
}

fn identity_check(id: String, anchor: String, ident: Identity) -> Check {
    Check {
        id,
        anchor,
        tolerance: IDENTITY_TOLERANCE,
        run: Box::new(move |ctx| {
            let r = ident.residual(ctx)?;
            Ok(Outcome { value: None, residual: r.abs_value(), bound: r.abs_error_bound, detail: String::new() })
        }),
    }
}

/// Every printed closed form and combination: re-derived through the solver
/// where the relations suffice, and always checked against the direct sums.
pub fn verify_examples(ctx: &PrecisionContext) -> Result<VerificationReport> {
    verify_examples_with(ctx, Execution::default())
}

pub fn verify_examples_with(ctx: &PrecisionContext, exec: Execution) -> Result<VerificationReport> {
    let groups: [(&str, &str, &[&'static str]); 4] = [
        ("harmonic", "harmonic closed forms", &HARMONIC_CLOSED_FORMS),
        ("combination", "product sum combinations", &COMBINATIONS),
        ("product", "product closed forms", &PRODUCT_CLOSED_FORMS),
        ("weight9", "weight-9 combined forms", &WEIGHT9_FORMS),
    ];
    let mut checks = Vec::new();
    for (tag, anchor, texts) in groups {
        for (i, text) in texts.iter().enumerate() {
            checks.push(closed_form_check(format!("examples/{tag}/{:02}", i + 1), anchor, text, true)?);
        }
    }
    for ident in gen_fixed_alternating() {
        checks.push(identity_check(format!("examples/alternating/{}", ident.id()), "weight-6 alternating forms".into(), ident));
    }
    Ok(run_checks(checks, ctx, exec))
}

/// Residual records for `lhs == rhs` lines. All lines are parsed before
/// anything is evaluated; a parse error names its line.
pub fn verify_identity_texts(lines: &[String], ctx: &PrecisionContext, tolerance: f64, exec: Execution) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    for (i, text) in lines.iter().enumerate() {
        let (lhs, rhs) = parse_identity(text).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos, msg: format!("{msg} (line {})", i + 1) },
            other => other,
        })?;
        let diff = (&lhs - &rhs).canonical();
        let shown = text.trim().to_string();
        checks.push(Check {
            id: format!("verify/{:03}", i + 1),
            anchor: "input".into(),
            tolerance,
            run: Box::new(move |ctx| {
                if diff.is_zero() {
                    return Ok(Outcome { value: None, residual: 0.0, bound: 0.0, detail: format!("{shown} (exact)") });
                }
                let r = diff.eval(ctx)?;
                Ok(Outcome { value: None, residual: r.abs_value(), bound: r.abs_error_bound, detail: shown.clone() })
            }),
        });
    }
    Ok(run_checks(checks, ctx, exec))
}

/// Residuals of every family instance over `p_range x m_range`. Parameter
/// free families run once when the grid is nonempty. Instantiation errors
/// are failures naming the cell.
pub fn verify_identity_grid(
    families: &[Family],
    p_range: std::ops::RangeInclusive<u32>,
    m_range: std::ops::RangeInclusive<u32>,
    ctx: &PrecisionContext,
) -> VerificationReport {
    verify_identity_grid_with(families, p_range, m_range, ctx, Execution::default())
}

pub fn verify_identity_grid_with(
    families: &[Family],
    p_range: std::ops::RangeInclusive<u32>,
    m_range: std::ops::RangeInclusive<u32>,
    ctx: &PrecisionContext,
    exec: Execution,
) -> VerificationReport {
    let mut checks = Vec::new();
    let nonempty = !p_range.is_empty() && !m_range.is_empty();
    for &f in families {
        if nonempty {
            for ident in f.fixed() {
                checks.push(identity_check(format!("grid/{}/{}", f.name(), ident.id()), f.grid_mapping().into(), ident));
            }
        }
        for p in p_range.clone() {
            for m in m_range.clone() {
                let cell = format!("grid/{}/p={p},m={m}", f.name());
                match f.instantiate(p, m) {
                    Ok(ids) => {
                        for ident in ids {
                            checks.push(identity_check(format!("{cell}/{}", ident.id()), f.grid_mapping().into(), ident));
                        }
                    }
                    Err(e) => {
                        let msg = e.to_string();
                        checks.push(Check {
                            id: cell,
                            anchor: f.grid_mapping().into(),
                            tolerance: IDENTITY_TOLERANCE,
                            run: Box::new(move |_| Err(Error::Domain(msg.clone()))),
                        });
                    }
                }
            }
        }
    }
    run_checks(checks, ctx, exec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals() {
        assert_eq!(decimal_rational("1.25").unwrap(), Rational::new(5.into(), 4.into()));
        assert_eq!(decimal_rational("-3").unwrap(), Rational::from_integer((-3).into()));
        assert!(decimal_rational("1.2e3").is_err());
        assert!(decimal_rational(".5").is_err());
        assert_eq!(agreeing_digits(3e-27), 26);
        assert_eq!(agreeing_digits(0.5), 0);
    }

    #[test]
    fn every_table_row_has_a_closed_form() {
        for (sig, ..) in TABLE1 {
            assert!(closed_form_of(sig).is_some(), "{sig}");
        }
    }

    #[test]
    fn empty_and_single_cell_grids() {
        let ctx = PrecisionContext::default();
        assert!(verify_identity_grid(&Family::ALL, std::ops::RangeInclusive::new(2, 1), 0..=2, &ctx).records.is_empty());
        assert!(verify_identity_grid(&[], 2..=5, 0..=2, &ctx).records.is_empty());
        // (m, p) = (2, 2) is antisymmetric in its own arguments
        let r = verify_identity_grid(&[Family::ZetaAntisymmetric], 2..=2, 0..=0, &ctx);
        assert_eq!(r.records.len(), 1);
        assert!(r.all_passed());
        assert_eq!(r.records[0].residual, 0.0);
    }

    #[test]
    fn domain_errors_name_the_cell() {
        let r = verify_identity_grid(&[Family::MixedTriple], 1..=1, 0..=0, &PrecisionContext::default());
        assert_eq!(r.summary(), Summary { total: 1, passed: 0, failed: 1 });
        assert_eq!(r.records[0].id, "grid/mixed_triple/p=1,m=0");
    }

    #[test]
    fn low_precision_is_rejected() {
        assert!(verify_table1(&PrecisionContext::with_digits(20)).is_err());
    }

    #[test]
    fn reports_are_ordered_and_deterministic() {
        let ctx = PrecisionContext::default();
        let fams = [Family::HarmonicPairOdd, Family::EulerLinear];
        let a = verify_identity_grid_with(&fams, 2..=3, 0..=1, &ctx, Execution::Parallel);
        let b = verify_identity_grid_with(&fams, 2..=3, 0..=1, &ctx, Execution::Sequential);
        assert_eq!(a.without_timing(), b.without_timing());
        assert!(a.records.windows(2).all(|w| w[0].id < w[1].id));
        let lines = a.to_json_lines();
        assert_eq!(lines.lines().count(), a.records.len());
        let first: serde_json::Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
        assert_eq!(first["verdict"], "pass");
        assert!(a.to_text().ends_with("8 checks: 8 passed, 0 failed\n"));
    }

    #[test]
    fn user_identities() {
        let lines = vec!["S(1;2) == 2*z3".to_string(), "z2^2 == 5/2*z4".to_string(), "S(1;2) == z3".to_string()];
        let r = verify_identity_texts(&lines, &PrecisionContext::default(), 1e-25, Execution::default()).unwrap();
        let v: Vec<bool> = r.records.iter().map(CheckRecord::passed).collect();
        assert_eq!(v, [true, true, false]);
        assert!(r.records[1].detail.ends_with("(exact)"));
        let bad = vec!["z2 == z2".to_string(), "S(1;2) == 2*".to_string()];
        match verify_identity_texts(&bad, &PrecisionContext::default(), 1e-25, Execution::default()) {
            Err(Error::Parse { pos, msg }) => assert!(pos == 12 && msg.contains("line 2"), "{pos} {msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn a_wrong_closed_form_fails_structurally() {
        let c = closed_form_check("x".into(), "x", "S(1,3;2) == 227/48*z6 - 1/2*z3^2", true).unwrap();
        let r = c.execute(&PrecisionContext::default());
        assert!(!r.passed());
        assert!(r.detail.contains("structural mismatch"), "{}", r.detail);
    }
}
