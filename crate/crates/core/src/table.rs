//! Certified table of known reductions, loaded from a plain-text file with
//! one `LHS := RHS  # source: ...` entry per line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exact::{binomial, Rational};
use crate::identities::gen_euler_linear;
use crate::numerics::PrecisionContext;
use crate::parse::parse_table_line;
use crate::solver::RelationSystem;
use crate::sums::SumSignature;
use crate::symbolic::{Atom, Expression, Monomial};

/// Certification threshold on `|lhs - rhs| + bound`.
pub const CERTIFY_TOLERANCE: f64 = 1e-20;

pub const DEFAULT_TABLE: &str = include_str!("../data/reductions.txt");

#[derive(Clone, Debug)]
pub struct TableEntry {
    pub atom: Atom,
    pub rhs: Expression,
    /// Text of the provenance comment, e.g. `source: classical`.
    pub source: String,
    /// `|lhs - rhs| + bound` at certification, if certified.
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, Default)]
pub struct KnownReductionTable {
    entries: BTreeMap<Atom, TableEntry>,
}

impl KnownReductionTable {
    /// Parse without numerical certification.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let parsed = parse_table_line(line).map_err(|e| Error::TableEntry { entry: format!("line {}", lineno + 1), reason: e.to_string() })?;
            let Some((atom, rhs, source)) = parsed else { continue };
            let name = atom.to_string();
            let reject = |reason: String| Err(Error::TableEntry { entry: name.clone(), reason });
            if !matches!(atom, Atom::Sum(_) | Atom::LiHalf(_)) {
                return reject("only sums and Li_k(1/2) may be reduced".into());
            }
            if rhs.contains_atom(&atom) {
                return reject("right side mentions the entry itself".into());
            }
            let ws = rhs.weights();
            if ws.len() > 1 || ws.iter().any(|&w| w != atom.weight()) {
                return reject(format!("weights {:?} differ from {}", ws, atom.weight()));
            }
            if !source.starts_with("source:") {
                return reject("missing `# source:` comment".into());
            }
            if entries.contains_key(&atom) {
                return reject("duplicate entry".into());
            }
            entries.insert(atom.clone(), TableEntry { atom, rhs, source, residual: None });
        }
        Ok(KnownReductionTable { entries })
    }

    /// Parse and certify every entry; the first failing entry aborts the load.
    pub fn load(text: &str, ctx: &PrecisionContext) -> Result<Self> {
        let mut t = Self::parse(text)?;
        for e in t.entries.values_mut() {
            let name = e.atom.to_string();
            let diff = &Expression::atom(e.atom.clone()) - &e.rhs;
            let r = diff.eval(ctx).map_err(|err| Error::TableEntry { entry: name.clone(), reason: err.to_string() })?;
            let total = r.abs_value() + r.abs_error_bound;
            if total.is_nan() || total > CERTIFY_TOLERANCE {
                return Err(Error::TableEntry { entry: name, reason: format!("residual {total:.3e} exceeds {CERTIFY_TOLERANCE:e}") });
            }
            e.residual = Some(total);
        }
        Ok(t)
    }

    /// The bundled table, certified once per process at 30 digits.
    pub fn bundled() -> Result<&'static KnownReductionTable> {
        static TABLE: OnceLock<std::result::Result<KnownReductionTable, String>> = OnceLock::new();
        TABLE
            .get_or_init(|| Self::load(DEFAULT_TABLE, &PrecisionContext::default()).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::TableEntry { entry: "bundled table".into(), reason: e.clone() })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &TableEntry> {
        self.entries.values()
    }

    pub fn get(&self, a: &Atom) -> Option<&Expression> {
        self.entries.get(a).map(|e| &e.rhs)
    }

    /// Replace every tabulated atom; entries never refer to each other, so
    /// one pass suffices.
    pub fn apply(&self, e: &Expression) -> Expression {
        e.substitute(&|a| self.get(a).cloned())
    }

    /// Render in the file format; parses back to the same table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in self.entries.values() {
            let _ = writeln!(out, "{} := {}  # {}", e.atom, e.rhs, e.source);
        }
        out
    }
}

/// `zeta(a, b) = sum_{n>k} n^-a k^-b` written with linear sums.
fn double_zeta(a: u32, b: u32) -> Result<Expression> {
    Ok(&Expression::sum(SumSignature::linear(b, a)?) - &Expression::zeta(a + b))
}

/// Closed forms of all linear sums `S(p;q)` of weight `w` from the stuffle
/// and shuffle products of two zeta values, the sum formula and the
/// harmonic evaluation. Sums left free by these relations are omitted.
pub fn derive_linear(w: u32) -> Result<BTreeMap<SumSignature, Expression>> {
    if w < 3 {
        return Err(Error::Domain("linear sums start at weight 3".into()));
    }
    let mut rels: Vec<(Expression, String)> = Vec::new();
    for a in 2..w - 1 {
        let b = w - a;
        if b < 2 || b < a {
            continue;
        }
        let prod = &Expression::zeta(a) * &Expression::zeta(b);
        let stuffle = &(&(&double_zeta(a, b)? + &double_zeta(b, a)?) + &Expression::zeta(w)) - &prod;
        rels.push((stuffle, format!("stuffle({a},{b})")));
        let mut shuffle = -&prod;
        for j in 2..w {
            let c = binomial(j - 1, a - 1) + binomial(j - 1, b - 1);
            if c != 0.into() {
                shuffle = &shuffle + &double_zeta(j, w - j)?.scale(&Rational::from_integer(c));
            }
        }
        rels.push((shuffle, format!("shuffle({a},{b})")));
    }
    let mut sum_formula = -&Expression::zeta(w);
    for j in 2..w {
        sum_formula = &sum_formula + &double_zeta(j, w - j)?;
    }
    rels.push((sum_formula, format!("sum_formula({w})")));
    let euler = gen_euler_linear(w - 1)?;
    rels.push((euler.difference().expect("symbolic"), euler.id()));
    let rels: Vec<(Expression, String)> = rels.into_iter().map(|(e, n)| (e.canonical(), n)).collect();
    let targets: Vec<Monomial> = (1..w - 1)
        .map(|p| Monomial::atom(Atom::Sum(SumSignature::linear(p, w - p).expect("q >= 2")), 1))
        .collect();
    let solved = RelationSystem::new(&rels, &targets).solve()?;
    let mut out = BTreeMap::new();
    for m in &targets {
        if let (Some(e), Some((Atom::Sum(s), _))) = (solved.get(m), m.factors().next()) {
            out.insert(s.clone(), e.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    #[test]
    fn low_weight_linear_sums() {
        let w3 = derive_linear(3).unwrap();
        assert_eq!(w3[&SumSignature::linear(1, 2).unwrap()], parse_expr("2*z3").unwrap());
        let w5 = derive_linear(5).unwrap();
        assert_eq!(w5[&SumSignature::linear(2, 3).unwrap()], parse_expr("3*z2*z3 - 9/2*z5").unwrap());
        assert_eq!(w5.len(), 3);
        // one sum stays free at weight 8
        let w8 = derive_linear(8).unwrap();
        assert_eq!(w8.len(), 5);
        assert!(w8.values().all(|e| e.contains_atom(&Atom::Sum(SumSignature::linear(2, 6).unwrap())) || e.sum_atoms().is_empty()));
    }

    #[test]
    fn bundled_linear_entries_match_derivation() {
        let t = KnownReductionTable::parse(DEFAULT_TABLE).unwrap();
        let mut derived = 0;
        for w in 3..=11 {
            for (sig, e) in derive_linear(w).unwrap() {
                let a = Atom::Sum(sig);
                assert_eq!(t.get(&a), Some(&e), "{a}");
                derived += 1;
            }
        }
        let linear = t.entries().filter(|e| matches!(&e.atom, Atom::Sum(s) if s.depth() == 1)).count();
        assert_eq!(linear, derived);
    }

    #[test]
    fn bundled_table_certifies_and_round_trips() {
        let t = KnownReductionTable::bundled().unwrap();
        assert!(t.entries().all(|e| e.residual.unwrap() <= CERTIFY_TOLERANCE));
        let again = KnownReductionTable::parse(&t.to_text()).unwrap();
        assert_eq!(again.to_text(), t.to_text());
    }

    #[test]
    fn corrupted_entry_is_rejected_by_name() {
        let bad = DEFAULT_TABLE.replace("S(1;2) := 2*z3", "S(1;2) := 2*z3 + 1/1000000000000*z3");
        assert_ne!(bad, DEFAULT_TABLE);
        match KnownReductionTable::load(&bad, &PrecisionContext::default()) {
            Err(Error::TableEntry { entry, .. }) => assert_eq!(entry, "S(1;2)"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(KnownReductionTable::parse("S(1;2) := 2*z3"), Err(Error::TableEntry { .. })));
        assert!(KnownReductionTable::parse("S(1;2) := 2*z3 + S(1;2)  # source: derived").is_err());
        assert!(KnownReductionTable::parse("S(1;2) := 2*z4  # source: derived").is_err());
        assert!(KnownReductionTable::parse("z3 := 2*z3  # source: derived").is_err());
        assert_eq!(KnownReductionTable::parse("# nothing\n\n").unwrap().len(), 0);
    }
}
