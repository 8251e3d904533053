//! Strategies and property bodies shared by the property suite and the
//! acceptance runner.
#![allow(dead_code)]

use eulersum_core::exact::{binomial, Rational};
use eulersum_core::identities::Family;
use eulersum_core::parse::{parse_expr, parse_signature};
use eulersum_core::solver::RelationSystem;
use eulersum_core::*;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::TestCaseResult;

pub const CASES: u32 = 1000;

pub fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

pub fn signature() -> impl Strategy<Value = SumSignature> {
    (prop::collection::vec((1u32..=4, any::<bool>()), 0..=2), 1u32..=6, any::<bool>())
        .prop_filter_map("convergent", |(inner, q, alt)| SumSignature::new(inner, q, alt).ok())
}

pub fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        (2u32..=12).prop_map(Atom::Zeta),
        (1u32..=8).prop_map(Atom::ZetaBar),
        Just(Atom::Ln2),
        Just(Atom::Pi),
        (1u32..=5).prop_map(Atom::LiHalf),
        signature().prop_map(Atom::Sum),
    ]
}

fn monomial() -> impl Strategy<Value = Expression> {
    prop::collection::vec((atom(), 1u32..=3), 0..=3).prop_map(|fs| {
        fs.into_iter().fold(Expression::constant(Rational::from_integer(1.into())), |acc, (a, e)| &acc * &Expression::atom_pow(a, e))
    })
}

pub fn expression() -> impl Strategy<Value = Expression> {
    prop::collection::vec((rational(), monomial()), 0..=5)
        .prop_map(|ts| ts.into_iter().fold(Expression::zero(), |acc, (c, m)| &acc + &m.scale(&c)))
}

pub fn normalize_is_idempotent(e: Expression) -> TestCaseResult {
    let n = e.normalize();
    prop_assert_eq!(n.normalize(), n.clone());
    let c = e.canonical();
    prop_assert_eq!(c.canonical(), c);
    Ok(())
}

pub fn render_then_parse(e: Expression) -> TestCaseResult {
    let n = e.normalize();
    let text = n.to_string();
    prop_assert_eq!(parse_expr(&text).unwrap(), n, "{}", text);
    Ok(())
}

pub fn signature_round_trip(s: SumSignature) -> TestCaseResult {
    prop_assert_eq!(parse_signature(&s.to_string()).unwrap(), s);
    Ok(())
}

pub fn ring_laws((a, b, c): (Expression, Expression, Expression)) -> TestCaseResult {
    prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    prop_assert_eq!(&a + &b, &b + &a);
    prop_assert_eq!(&a * &b, &b * &a);
    prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    prop_assert!((&a + &(-&a)).is_zero());
    Ok(())
}

pub fn rational_laws((a, b, c): (Rational, Rational, Rational)) -> TestCaseResult {
    prop_assert_eq!((&a + &b) * &c, &a * &c + &b * &c);
    prop_assert_eq!(&a * (&b * &c), (&a * &b) * &c);
    if !b.is_zero() {
        prop_assert_eq!(&a / &b * &b, a.clone());
    }
    Ok(())
}

pub fn cell() -> impl Strategy<Value = (usize, u32, u32)> {
    (0usize..Family::ALL.len(), 1u32..=7, 0u32..=3)
}

pub fn weight_conserved((f, p, m): (usize, u32, u32)) -> TestCaseResult {
    let fam = Family::ALL[f];
    if let Ok(ids) = fam.instantiate(p, m) {
        for id in ids.iter().chain(fam.fixed().iter()) {
            prop_assert!(id.check_weight().is_ok(), "{}", id.id());
        }
    }
    Ok(())
}

pub fn bernoulli_recurrence(n: usize) -> TestCaseResult {
    let s: Rational = (0..=n).map(|k| Rational::from_integer(binomial(n as u32 + 1, k as u32)) * bernoulli(k)).sum();
    prop_assert!(s.is_zero());
    if n > 1 && n % 2 == 1 {
        prop_assert!(bernoulli(n).is_zero());
    }
    Ok(())
}

pub fn planted_system() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<Expression>)> {
    (prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..=5), prop::collection::vec(expression(), 4))
}

/// Plant a solution behind random integer relations; whatever the solver
/// returns must be the planted value and satisfy every relation exactly.
pub fn solver_back_substitutes((coeffs, values): (Vec<Vec<i64>>, Vec<Expression>)) -> TestCaseResult {
    let unknowns = ["S(1,2;3)", "S(1,3;2)", "S(2,2;2)", "S(b1,2;3)"];
    let values: Vec<Expression> = values
        .iter()
        .map(|v| {
            let mut out = Expression::zero();
            for (m, c) in v.canonical().terms().filter(|(m, _)| m.factors().all(|(a, _)| a.as_sum().is_none())) {
                out.add_term(m.clone(), c.clone());
            }
            out
        })
        .collect();
    let u: Vec<Expression> = unknowns.iter().map(|s| parse_expr(s).unwrap()).collect();
    let rels: Vec<(Expression, String)> = coeffs
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut e = Expression::zero();
            for (j, &c) in row.iter().enumerate() {
                e = &e + &(&u[j] - &values[j]).scale_int(c);
            }
            (e.canonical(), format!("r{i}"))
        })
        .collect();
    let solved = RelationSystem::new(&rels, &[]).solve().unwrap();
    for (m, e) in &solved {
        let j = u.iter().position(|x| x.terms().next().unwrap().0 == m).unwrap();
        prop_assert_eq!(e, &values[j].canonical());
    }
    for (rel, _) in &rels {
        let r = rel.substitute(&|a| solved.iter().find(|(m, _)| m.factors().next().map(|f| f.0) == Some(a)).map(|(_, e)| e.clone()));
        if r.sum_atoms().is_empty() {
            prop_assert!(r.canonical().is_zero());
        }
    }
    Ok(())
}
