//! Exact rational combinations of zeta monomials.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{even_zeta_product_ratio, Rational};
use crate::numerics::{ln2_value, pi_value, polylog_half, zeta_value, zetabar_value, NumericalResult, PrecisionContext};
use crate::real::Real;
use crate::sums::{euler_sum_value, SumSignature};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Zeta(u32),
    ZetaBar(u32),
    Ln2,
    Pi,
    LiHalf(u32),
    Sum(SumSignature),
}

impl Atom {
    pub fn weight(&self) -> u32 {
        match self {
            Atom::Zeta(k) | Atom::ZetaBar(k) | Atom::LiHalf(k) => *k,
            Atom::Ln2 | Atom::Pi => 1,
            Atom::Sum(sig) => sig.weight(),
        }
    }

    pub fn sum(sig: SumSignature) -> Atom {
        Atom::Sum(sig)
    }

    pub fn as_sum(&self) -> Option<&SumSignature> {
        match self {
            Atom::Sum(s) => Some(s),
            _ => None,
        }
    }

    pub fn evaluate(&self, ctx: &PrecisionContext) -> Result<NumericalResult> {
        match self {
            Atom::Zeta(k) => zeta_value(*k as i64, ctx),
            Atom::ZetaBar(k) => zetabar_value(*k as i64, ctx),
            Atom::Ln2 => Ok(ln2_value(ctx)),
            Atom::Pi => Ok(pi_value(ctx)),
            Atom::LiHalf(k) => polylog_half(*k as i64, ctx),
            Atom::Sum(sig) => euler_sum_value(sig, ctx),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Zeta(k) => write!(f, "z{k}"),
            Atom::ZetaBar(k) => write!(f, "zb{k}"),
            Atom::Ln2 => write!(f, "ln2"),
            Atom::Pi => write!(f, "pi"),
            Atom::LiHalf(k) => write!(f, "Li{k}(1/2)"),
            Atom::Sum(sig) => write!(f, "{sig}"),
        }
    }
}

/// Product of atoms with positive exponents; ordered by degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(BTreeMap<Atom, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn atom(a: Atom, e: u32) -> Self {
        let mut m = BTreeMap::new();
        if e > 0 {
            m.insert(a, e);
        }
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(a, e)| a.weight() * e).sum()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Atom, u32)> {
        self.0.iter().map(|(a, e)| (a, *e))
    }

    pub fn exponent(&self, a: &Atom) -> u32 {
        self.0.get(a).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (a, e) in &other.0 {
            *m.entry(a.clone()).or_insert(0) += e;
        }
        Monomial(m)
    }

    pub fn without(&self, a: &Atom) -> Monomial {
        let mut m = self.0.clone();
        m.remove(a);
        Monomial(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (i, (a, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{a}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Finite sum of rational multiples of monomials; never stores zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Expression(BTreeMap<Monomial, Rational>);

impl Expression {
    pub fn zero() -> Self {
        Expression(BTreeMap::new())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn atom(a: Atom) -> Self {
        Self::term(Rational::one(), Monomial::atom(a, 1))
    }

    pub fn atom_pow(a: Atom, e: u32) -> Self {
        Self::term(Rational::one(), Monomial::atom(a, e))
    }

    pub fn zeta(k: u32) -> Self {
        Self::atom(Atom::Zeta(k))
    }

    pub fn zetabar(k: u32) -> Self {
        Self::atom(Atom::ZetaBar(k))
    }

    pub fn ln2() -> Self {
        Self::atom(Atom::Ln2)
    }

    pub fn sum(sig: SumSignature) -> Self {
        Self::atom(Atom::Sum(sig))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.0.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.0.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn scale(&self, c: &Rational) -> Expression {
        if c.is_zero() {
            return Self::zero();
        }
        Expression(self.0.iter().map(|(m, v)| (m.clone(), v * c)).collect())
    }

    pub fn scale_int(&self, c: i64) -> Expression {
        self.scale(&Rational::from_integer(BigInt::from(c)))
    }

    pub fn pow(&self, e: u32) -> Expression {
        let mut acc = Self::constant(Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.0.keys().flat_map(|m| m.0.keys().cloned()).collect()
    }

    pub fn sum_atoms(&self) -> BTreeSet<SumSignature> {
        self.atoms().into_iter().filter_map(|a| a.as_sum().cloned()).collect()
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        self.0.keys().any(|m| m.0.contains_key(a))
    }

    /// Distinct monomial weights (empty for the zero expression).
    pub fn weights(&self) -> BTreeSet<u32> {
        self.0.keys().map(Monomial::weight).collect()
    }

    /// Coefficient of the single atom `a` in a linear occurrence; errors if
    /// `a` appears non-linearly.
    pub fn linear_coefficient(&self, a: &Atom) -> Result<(Rational, Expression)> {
        let mut coeff = Rational::zero();
        let mut rest = Expression::zero();
        for (m, c) in &self.0 {
            match m.exponent(a) {
                0 => rest.add_term(m.clone(), c.clone()),
                1 if m.degree() == 1 => coeff += c,
                _ => return Err(Error::Domain(format!("{a} occurs non-linearly"))),
            }
        }
        Ok((coeff, rest))
    }

    /// Replace every occurrence of atoms by expressions (atoms absent from `map` are kept).
    pub fn substitute(&self, map: &dyn Fn(&Atom) -> Option<Expression>) -> Expression {
        let mut out = Expression::zero();
        let mut cache: HashMap<Atom, Option<Expression>> = HashMap::new();
        for (m, c) in &self.0 {
            let mut acc = Expression::constant(c.clone());
            for (a, e) in &m.0 {
                let rep = cache.entry(a.clone()).or_insert_with(|| map(a)).clone();
                let factor = match rep {
                    Some(r) => r.pow(*e),
                    None => Expression::atom_pow(a.clone(), *e),
                };
                acc = &acc * &factor;
            }
            out = &out + &acc;
        }
        out
    }

    /// Canonical form: bars on zeta values removed, `zb1` and `Li1(1/2)` to
    /// `ln2`, depth-0 sums to (alternating) zeta values.
    pub fn normalize(&self) -> Expression {
        self.substitute(&normalize_atom)
    }

    /// Merge products of even zeta values into a single rational multiple of
    /// one even zeta value.
    pub fn collapse_even_zetas(&self) -> Expression {
        let mut out = Expression::zero();
        for (m, c) in &self.0 {
            let mut evens = Vec::new();
            let mut rest = BTreeMap::new();
            for (a, e) in &m.0 {
                match a {
                    Atom::Zeta(k) if k % 2 == 0 => evens.extend(std::iter::repeat_n(*k, *e as usize)),
                    _ => {
                        rest.insert(a.clone(), *e);
                    }
                }
            }
            if evens.len() <= 1 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let ratio = even_zeta_product_ratio(&evens).expect("even arguments");
            let total: u32 = evens.iter().sum();
            *rest.entry(Atom::Zeta(total)).or_insert(0) += 1;
            out.add_term(Monomial(rest), c * ratio);
        }
        out
    }

    /// Normalized and collapsed; the form used for structural comparison.
    pub fn canonical(&self) -> Expression {
        self.normalize().collapse_even_zetas()
    }

    pub fn eval(&self, ctx: &PrecisionContext) -> Result<NumericalResult> {
        expr_eval(self, ctx)
    }
}

fn normalize_atom(a: &Atom) -> Option<Expression> {
    match a {
        Atom::ZetaBar(1) | Atom::LiHalf(1) => Some(Expression::ln2()),
        Atom::ZetaBar(k) => {
            let c = Rational::one() - Rational::new(BigInt::one(), BigInt::one() << (k - 1));
            Some(Expression::zeta(*k).scale(&c))
        }
        Atom::Sum(sig) if sig.depth() == 0 => {
            let q = sig.outer();
            if sig.outer_alt() {
                normalize_atom(&Atom::ZetaBar(q)).or_else(|| Some(Expression::zetabar(q)))
            } else {
                Some(Expression::zeta(q))
            }
        }
        _ => None,
    }
}

pub fn normalize(e: &Expression) -> Expression {
    e.normalize()
}

pub fn expr_add(a: &Expression, b: &Expression) -> Expression {
    (a + b).normalize()
}

pub fn expr_mul(a: &Expression, b: &Expression) -> Expression {
    (a * b).normalize()
}

pub fn expr_scale(a: &Expression, c: &Rational) -> Expression {
    a.scale(c).normalize()
}

/// Numerical value; atom values are memoized per call.
pub fn expr_eval(e: &Expression, ctx: &PrecisionContext) -> Result<NumericalResult> {
    let bits = ctx.bits();
    let mut memo: HashMap<&Atom, NumericalResult> = HashMap::new();
    let mut acc = NumericalResult::zero(bits);
    for (m, c) in &e.0 {
        let cv = Real::from_rational(c, bits);
        let ce = if cv.to_rational() == *c { 0.0 } else { Real::ulp(bits) };
        let mut v = NumericalResult::new(cv, ce);
        for (a, k) in &m.0 {
            if !memo.contains_key(a) {
                memo.insert(a, a.evaluate(ctx)?);
            }
            let av = &memo[a];
            for _ in 0..*k {
                v = v.mul(av);
            }
        }
        acc = acc.add(&v);
    }
    Ok(acc)
}

impl Add for &Expression {
    type Output = Expression;
    fn add(self, rhs: &Expression) -> Expression {
        let mut out = self.clone();
        for (m, c) in &rhs.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Expression {
    type Output = Expression;
    fn sub(self, rhs: &Expression) -> Expression {
        let mut out = self.clone();
        for (m, c) in &rhs.0 {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Expression {
    type Output = Expression;
    fn mul(self, rhs: &Expression) -> Expression {
        let mut out = Expression::zero();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &rhs.0 {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        self.scale(&-Rational::one())
    }
}

impl Add for Expression {
    type Output = Expression;
    fn add(self, rhs: Expression) -> Expression {
        &self + &rhs
    }
}

impl Sub for Expression {
    type Output = Expression;
    fn sub(self, rhs: Expression) -> Expression {
        &self - &rhs
    }
}

impl Mul for Expression {
    type Output = Expression;
    fn mul(self, rhs: Expression) -> Expression {
        &self * &rhs
    }
}

impl Neg for Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        -&self
    }
}

impl std::iter::Sum for Expression {
    fn sum<I: Iterator<Item = Expression>>(iter: I) -> Expression {
        iter.fold(Expression::zero(), |a, b| &a + &b)
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn z(k: u32) -> Expression {
        Expression::zeta(k)
    }

    #[test]
    fn normalize_rules() {
        let x = Expression::atom(Atom::LiHalf(4));
        let e = &Expression::zetabar(3) * &x;
        assert_eq!(e.normalize(), (&z(3) * &x).scale(&rat(3, 4)));
        let e = &x + &(-&x);
        assert!(e.normalize().is_zero());
        assert_eq!(Expression::zetabar(1).pow(2).normalize(), Expression::ln2().pow(2));
        let s0 = SumSignature::new(vec![], 3, true).unwrap();
        assert_eq!(Expression::sum(s0).normalize(), z(3).scale(&rat(3, 4)));
    }

    #[test]
    fn ring_operations() {
        let a = z(3).scale_int(2);
        let b = z(4).scale_int(3);
        assert_eq!(&a * &b, (&z(3) * &z(4)).scale_int(6));
        assert!(a.scale(&int(0)).is_zero());
        let s = &z(3) + &z(4);
        let sq = &s * &s;
        let want = &(&z(3).pow(2) + &(&z(3) * &z(4)).scale_int(2)) + &z(4).pow(2);
        assert_eq!(sq, want);
    }

    #[test]
    fn rendering() {
        let e = &z(6).scale(&rat(-101, 48)) + &z(3).pow(2).scale(&rat(5, 2));
        assert_eq!(e.to_string(), "-101/48*z6 + 5/2*z3^2");
        assert_eq!(Expression::zero().to_string(), "0");
        let sig = SumSignature::new(vec![(1, true), (3, false)], 2, false).unwrap();
        let e = &Expression::sum(sig) - &Expression::constant(int(1));
        assert_eq!(e.to_string(), "-1 + S(b1,3;2)");
        let e = &(&z(2) * &Expression::ln2().pow(4)).scale(&rat(-1, 12)) + &Expression::atom(Atom::LiHalf(4));
        assert_eq!(e.to_string(), "Li4(1/2) - 1/12*z2*ln2^4");
    }

    #[test]
    fn even_collapse() {
        let e = &z(2) * &z(4);
        assert_eq!(e.collapse_even_zetas(), z(6).scale(&rat(7, 4)));
        let e = &z(2).pow(2) * &z(3);
        assert_eq!(e.collapse_even_zetas(), (&z(4) * &z(3)).scale(&rat(5, 2)));
    }

    #[test]
    fn evaluation() {
        let ctx = PrecisionContext::default();
        assert_eq!(expr_eval(&Expression::zero(), &ctx).unwrap().abs_error_bound, 0.0);
        let e = (&z(2) * &z(3)).scale(&rat(5, 2));
        let v = expr_eval(&e, &ctx).unwrap();
        let a = zeta_value(2, &ctx).unwrap().mul(&zeta_value(3, &ctx).unwrap()).scale(&rat(5, 2));
        assert!((&v.value - &a.value).to_f64().abs() <= v.abs_error_bound + a.abs_error_bound);
        // collapsed and uncollapsed forms agree numerically
        let p = &z(2) * &z(4);
        let d = expr_eval(&(&p - &p.collapse_even_zetas()), &ctx).unwrap();
        assert!(d.value.to_f64().abs() <= d.abs_error_bound);
        for k in 2..=10 {
            let e = Expression::zetabar(k);
            let a = expr_eval(&e, &ctx).unwrap();
            let b = expr_eval(&e.normalize(), &ctx).unwrap();
            assert!((&a.value - &b.value).to_f64().abs() <= a.abs_error_bound + b.abs_error_bound);
        }
    }
}
