//! Exact Gaussian elimination of relations among Euler-sum atoms.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::identities::{relations_of_weight, Identity};
use crate::sums::SumSignature;
use crate::symbolic::{Atom, Expression, Monomial};
use crate::table::KnownReductionTable;

/// Sum atoms kept in the basis; the solver never eliminates them.
pub fn is_basis_sum(sig: &SumSignature) -> bool {
    sig.depth() == 1
        && !sig.is_alternating()
        && sig.inner()[0].0 == 2
        && matches!(sig.outer(), 6 | 8)
}

fn is_unknown_monomial(m: &Monomial) -> bool {
    m.factors().any(|(a, _)| matches!(a, Atom::Sum(s) if !is_basis_sum(s)))
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: BTreeMap<usize, Rational>,
    rhs: Expression,
    origin: BTreeSet<String>,
}

impl Row {
    fn axpy(&mut self, c: &Rational, other: &Row) {
        for (k, v) in &other.coeffs {
            let e = self.coeffs.entry(*k).or_insert_with(Rational::zero);
            *e += c * v;
            if e.is_zero() {
                self.coeffs.remove(k);
            }
        }
        self.rhs = &self.rhs + &other.rhs.scale(c);
        self.origin.extend(other.origin.iter().cloned());
    }
}

/// Linear equations `sum c_i u_i = rhs` over unknown monomials `u_i`, where
/// every `rhs` lies in the basis.
#[derive(Clone, Debug)]
pub struct RelationSystem {
    unknowns: Vec<Monomial>,
    rows: Vec<Row>,
}

impl RelationSystem {
    /// Each relation is an expression equal to zero, with a name used in
    /// error reports. `preferred` unknowns are ordered last so they are
    /// solved in terms of basis values whenever the system allows.
    pub fn new(relations: &[(Expression, String)], preferred: &[Monomial]) -> Self {
        let mut found = BTreeSet::new();
        for (e, _) in relations {
            for (m, _) in e.terms() {
                if is_unknown_monomial(m) {
                    found.insert(m.clone());
                }
            }
        }
        let late: BTreeSet<&Monomial> = preferred.iter().collect();
        let mut unknowns: Vec<Monomial> = found.iter().filter(|m| !late.contains(m)).cloned().collect();
        unknowns.extend(preferred.iter().filter(|m| is_unknown_monomial(m)).cloned());
        let index: BTreeMap<&Monomial, usize> = unknowns.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let rows = relations
            .iter()
            .map(|(e, name)| {
                let mut coeffs = BTreeMap::new();
                let mut rhs = Expression::zero();
                for (m, c) in e.terms() {
                    match index.get(m) {
                        Some(&i) => {
                            coeffs.insert(i, c.clone());
                        }
                        None => rhs.add_term(m.clone(), -c.clone()),
                    }
                }
                Row { coeffs, rhs, origin: BTreeSet::from([name.clone()]) }
            })
            .collect();
        RelationSystem { unknowns, rows }
    }

    pub fn unknowns(&self) -> &[Monomial] {
        &self.unknowns
    }

    /// Reduced row echelon form; returns solved unknowns. Pivots are taken
    /// column by column in unknown order.
    pub fn solve(&self) -> Result<BTreeMap<Monomial, Expression>> {
        let mut rows = self.rows.clone();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut used = vec![false; rows.len()];
        for col in 0..self.unknowns.len() {
            let Some(r) = (0..rows.len()).find(|&r| !used[r] && rows[r].coeffs.contains_key(&col)) else {
                continue;
            };
            used[r] = true;
            let inv = Rational::one() / &rows[r].coeffs[&col];
            let mut pivot = rows[r].clone();
            pivot.coeffs.values_mut().for_each(|v| *v *= &inv);
            pivot.rhs = pivot.rhs.scale(&inv);
            for (k, row) in rows.iter_mut().enumerate() {
                if k != r {
                    if let Some(c) = row.coeffs.get(&col).cloned() {
                        row.axpy(&-c, &pivot);
                    }
                }
            }
            rows[r] = pivot;
            pivots.push((col, r));
        }
        for row in &rows {
            if row.coeffs.is_empty() && !row.rhs.canonical().is_zero() {
                return Err(Error::Inconsistent { relations: row.origin.iter().cloned().collect() });
            }
        }
        let mut out = BTreeMap::new();
        for (col, r) in pivots {
            if rows[r].coeffs.len() == 1 {
                out.insert(self.unknowns[col].clone(), rows[r].rhs.canonical());
            }
        }
        Ok(out)
    }
}

/// `lhs - rhs` of an identity with table entries substituted.
pub fn reduced_relation(id: &Identity, table: &KnownReductionTable) -> Option<Expression> {
    id.difference().map(|d| table.apply(&d).canonical())
}

/// Closed forms found for the requested targets; the rest stay unsolved.
#[derive(Clone, Debug, Default)]
pub struct Solution {
    pub solved: BTreeMap<SumSignature, Expression>,
    pub unsolved: Vec<SumSignature>,
}

pub fn solve_closed_forms(targets: &[SumSignature], relations: &[Identity], table: &KnownReductionTable) -> Result<Solution> {
    if targets.is_empty() {
        return Ok(Solution::default());
    }
    let rels: Vec<(Expression, String)> =
        relations.iter().filter_map(|id| reduced_relation(id, table).map(|e| (e, id.id()))).collect();
    let monos: Vec<Monomial> = targets.iter().map(|t| Monomial::atom(Atom::Sum(t.clone()), 1)).collect();
    let solved = RelationSystem::new(&rels, &monos).solve()?;
    let mut out = Solution::default();
    for (t, m) in targets.iter().zip(&monos) {
        if let Some(e) = table.get(&Atom::Sum(t.clone())) {
            out.solved.insert(t.clone(), e.canonical());
        } else if let Some(e) = solved.get(m) {
            out.solved.insert(t.clone(), e.clone());
        } else {
            out.unsolved.push(t.clone());
        }
    }
    Ok(out)
}

/// Result of [`reduce`]: the rewritten expression and the sum atoms that
/// could not be eliminated.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub expr: Expression,
    pub remaining: Vec<SumSignature>,
}

/// Rewrite `expr` over the basis using the table and every generated
/// relation of matching weight.
pub fn reduce(expr: &Expression, table: &KnownReductionTable) -> Result<Reduction> {
    let e = table.apply(expr).canonical();
    let pending: BTreeSet<SumSignature> = e.sum_atoms().into_iter().filter(|s| !is_basis_sum(s)).collect();
    let weights: BTreeSet<u32> = pending.iter().map(|s| s.weight()).collect();
    let mut solved = BTreeMap::new();
    for w in weights {
        let targets: Vec<SumSignature> = pending.iter().filter(|s| s.weight() == w).cloned().collect();
        let sol = solve_closed_forms(&targets, &relations_of_weight(w), table)?;
        solved.extend(sol.solved);
    }
    let out = e
        .substitute(&|a| match a {
            Atom::Sum(s) => solved.get(s).cloned(),
            _ => None,
        })
        .canonical();
    let remaining = out.sum_atoms().into_iter().filter(|s| !is_basis_sum(s)).collect();
    Ok(Reduction { expr: out, remaining })
}

/// Substitute `solved` into each relation; any relation left with no
/// unsolved sum atoms must vanish exactly. Returns the number of relations
/// checked that way.
pub fn back_substitute(relations: &[Identity], solved: &BTreeMap<SumSignature, Expression>, table: &KnownReductionTable) -> Result<usize> {
    let mut checked = 0;
    for id in relations {
        let Some(d) = reduced_relation(id, table) else { continue };
        let r = d
            .substitute(&|a| match a {
                Atom::Sum(s) => solved.get(s).cloned(),
                _ => None,
            })
            .canonical();
        if r.terms().any(|(m, _)| is_unknown_monomial(m)) {
            continue;
        }
        checked += 1;
        if !r.is_zero() {
            return Err(Error::Inconsistent { relations: vec![format!("{} leaves {}", id.id(), r)] });
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn rel(text: &str) -> (Expression, String) {
        (parse_expr(text).unwrap(), text.to_string())
    }

    #[test]
    fn small_system() {
        let rels = vec![rel("S(1,2;3) + S(1,3;2) - z6"), rel("S(1,2;3) - S(1,3;2) - z3^2")];
        let sys = RelationSystem::new(&rels, &[]);
        let sol = sys.solve().unwrap();
        let m = |s: &str| Monomial::atom(Atom::Sum(crate::parse::parse_signature(s).unwrap()), 1);
        assert_eq!(sol[&m("S(1,2;3)")], parse_expr("1/2*z6 + 1/2*z3^2").unwrap());
        assert_eq!(sol[&m("S(1,3;2)")], parse_expr("1/2*z6 - 1/2*z3^2").unwrap());
    }

    #[test]
    fn rank_deficiency_is_not_an_error() {
        let rels = vec![rel("S(1,2;3) + S(1,3;2) - z6")];
        let sol = RelationSystem::new(&rels, &[]).solve().unwrap();
        assert!(sol.is_empty());
    }

    #[test]
    fn inconsistency_names_relations() {
        let rels = vec![rel("S(1,2;3) - z6"), rel("S(1,2;3) - z3^2")];
        match RelationSystem::new(&rels, &[]).solve() {
            Err(Error::Inconsistent { relations }) => assert_eq!(relations.len(), 2),
            other => panic!("{other:?}"),
        }
        // consistent duplicates are fine
        let rels = vec![rel("S(1,2;3) - z6"), rel("2*S(1,2;3) - 2*z6")];
        assert_eq!(RelationSystem::new(&rels, &[]).solve().unwrap().len(), 1);
    }

    #[test]
    fn basis_sums_stay() {
        let rels = vec![rel("S(1,2;5) - 3*S(2;6) - z8")];
        let sys = RelationSystem::new(&rels, &[]);
        assert_eq!(sys.unknowns().len(), 1);
        let sol = sys.solve().unwrap();
        assert_eq!(sol.values().next().unwrap(), &parse_expr("3*S(2;6) + z8").unwrap());
    }
}
