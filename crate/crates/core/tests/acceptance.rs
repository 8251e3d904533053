//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs as a plain binary so the lines are never captured.

mod common;

use std::time::Instant;

use common::*;
use eulersum_core::exact::rat;
use eulersum_core::harness::{self, VerificationReport, IDENTITY_TOLERANCE};
use eulersum_core::identities::Family;
use eulersum_core::parse::parse_expr;
use eulersum_core::quadrature::{kernel_integral_check, log_kernel_first_check, log_kernel_recurrence_check, log_moment_check};
use eulersum_core::solver::{back_substitute, is_basis_sum, reduce, solve_closed_forms};
use eulersum_core::table::{KnownReductionTable, CERTIFY_TOLERANCE, DEFAULT_TABLE};
use eulersum_core::{identities, Error, NumericalResult, PrecisionContext, Result, SumSignature};
use proptest::strategy::Strategy;
use proptest::test_runner::{Config, TestCaseResult, TestRunner};

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn report_outcome(r: &VerificationReport, what: &str) -> Outcome {
    let s = r.summary();
    let worst = r.records.iter().map(|c| c.residual + c.bound).fold(0.0, f64::max);
    let msg = format!("{}/{} {what} checks pass, worst residual+bound {worst:.2e}", s.passed, s.total);
    if r.all_passed() && s.total > 0 {
        Ok(msg)
    } else {
        let first: Vec<String> = r.failures().take(3).map(|c| format!("{} [{}]", c.id, c.detail)).collect();
        Err(format!("{msg}; failing: {}", first.join("; ")))
    }
}

fn table_regression(ctx: &PrecisionContext) -> Outcome {
    let r = harness::verify_table1(ctx).map_err(|e| e.to_string())?;
    let sums = r.records.iter().filter(|c| c.id.ends_with("/sum")).count();
    if sums != 17 {
        return Err(format!("expected 17 direct rows, got {sums}"));
    }
    report_outcome(&r, "published-value")
}

const EXACT: [(&str, &str); 4] = [
    ("S(1,2;3)", "-101/48*z6 + 5/2*z3^2"),
    ("S(1,3;2)", "227/48*z6 - 3/2*z3^2"),
    ("S(2,2;3)", "-155/8*z7 + 19/2*z3*z4 + 5*z2*z5"),
    ("S(2,3;2)", "131/16*z7 - 3/2*z3*z4 - 5/2*z2*z5"),
];

fn closed_forms(ctx: &PrecisionContext) -> Outcome {
    let table = KnownReductionTable::bundled().map_err(|e| e.to_string())?;
    for (sum, printed) in EXACT {
        let got = reduce(&parse_expr(sum).unwrap(), table).map_err(|e| e.to_string())?;
        let want = parse_expr(printed).unwrap().canonical();
        if !got.remaining.is_empty() || got.expr != want {
            return Err(format!("{sum} reduced to {}, expected {want}", got.expr));
        }
    }
    let r = harness::verify_examples(ctx).map_err(|e| e.to_string())?;
    let structural = r.records.iter().filter(|c| c.detail == "structural match").count();
    let numeric = r.records.iter().filter(|c| c.detail.starts_with("rank-deficient")).count();
    report_outcome(&r, "closed-form").map(|m| format!("4 exact reductions; {m} ({structural} structural, {numeric} numerical only)"))
}

fn identity_grid(ctx: &PrecisionContext) -> Outcome {
    let r = harness::verify_identity_grid(&Family::ALL, 2..=5, 0..=2, ctx);
    for f in Family::ALL {
        if !r.records.iter().any(|c| c.id.starts_with(&format!("grid/{}/", f.name()))) {
            return Err(format!("no checks ran for {}", f.name()));
        }
    }
    if r.records.iter().any(|c| c.tolerance > IDENTITY_TOLERANCE) {
        return Err("a check used a looser tolerance".into());
    }
    report_outcome(&r, "identity")
}

fn kernels(ctx: &PrecisionContext) -> Outcome {
    let tol = 1e-15;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut take = |label: String, r: Result<NumericalResult>| -> std::result::Result<(), String> {
        let r = r.map_err(|e| format!("{label}: {e}"))?;
        let total = r.abs_value() + r.abs_error_bound;
        worst = worst.max(total);
        count += 1;
        if total <= tol {
            Ok(())
        } else {
            Err(format!("{label}: residual {total:.2e}"))
        }
    };
    for n in [1, 2, 5] {
        for p in [2, 3] {
            for x in [rat(1, 4), rat(1, 2), rat(-1, 2)] {
                take(format!("kernel n={n} p={p} x={x}"), kernel_integral_check(n, p, &x, ctx))?;
            }
            take(format!("log kernel n={n} m=1 p={p}"), log_kernel_first_check(n, p, ctx))?;
            take(format!("log kernel n={n} m=2 p={p}"), log_kernel_recurrence_check(n, 2, p, ctx))?;
        }
        for m in [1, 2] {
            take(format!("log moment n={n} m={m}"), log_moment_check(n, m, ctx))?;
        }
    }
    Ok(format!("{count} quadrature checks within {tol:e}, worst {worst:.2e}"))
}

fn property<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> TestCaseResult) -> std::result::Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn properties() -> Outcome {
    property("normalize idempotence", expression(), normalize_is_idempotent)?;
    property("parse/render round trip", expression(), render_then_parse)?;
    property("signature round trip", signature(), signature_round_trip)?;
    property("ring laws", (expression(), expression(), expression()), ring_laws)?;
    property("rational laws", (rational(), rational(), rational()), rational_laws)?;
    property("weight conservation", cell(), weight_conserved)?;
    property("Bernoulli recurrence", 1usize..=40, bernoulli_recurrence)?;
    property("solver back-substitution", planted_system(), solver_back_substitutes)?;
    let table = KnownReductionTable::bundled().map_err(|e| e.to_string())?;
    let mut checked = 0;
    for w in 6..=10 {
        let rels = identities::relations_of_weight(w);
        let mut targets = std::collections::BTreeSet::new();
        for id in &rels {
            if let Some(d) = id.difference() {
                targets.extend(table.apply(&d).canonical().sum_atoms().into_iter().filter(|s| !is_basis_sum(s)));
            }
        }
        let targets: Vec<SumSignature> = targets.into_iter().collect();
        let sol = solve_closed_forms(&targets, &rels, table).map_err(|e| e.to_string())?;
        checked += back_substitute(&rels, &sol.solved, table).map_err(|e| e.to_string())?;
    }
    Ok(format!("8 properties x {CASES} cases; {checked} relations back-substituted exactly at weights 6-10"))
}

fn table_certification() -> Outcome {
    let table = KnownReductionTable::bundled().map_err(|e| e.to_string())?;
    let worst = table.entries().map(|e| e.residual.unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
    if worst > CERTIFY_TOLERANCE {
        return Err(format!("worst entry residual {worst:.2e}"));
    }
    let bad = DEFAULT_TABLE.replace("S(2;3) := -9/2*z5 + 3*z2*z3", "S(2;3) := -9/2*z5 + 3*z2*z3 + 1/10000000000000000*z5");
    if bad == DEFAULT_TABLE {
        return Err("corruption target not found".into());
    }
    match KnownReductionTable::load(&bad, &PrecisionContext::default()) {
        Err(Error::TableEntry { entry, .. }) if entry == "S(2;3)" => {
            Ok(format!("{} entries certified, worst {worst:.2e}; corrupted S(2;3) rejected by name", table.len()))
        }
        other => Err(format!("corrupted entry not rejected by name: {other:?}")),
    }
}

fn main() {
    let ctx = PrecisionContext::default();
    let criteria: [Criterion; 6] = [
        ("published-value regression", Box::new(move || table_regression(&ctx))),
        ("exact closed-form regression", Box::new(move || closed_forms(&ctx))),
        ("identity residual grid", Box::new(move || identity_grid(&ctx))),
        ("kernel quadrature checks", Box::new(move || kernels(&ctx))),
        ("structural property suites", Box::new(properties)),
        ("known-table certification", Box::new(table_certification)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {} {name}: PASS ({msg}; {secs:.1}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({msg}; {secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
