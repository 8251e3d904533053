//! Partial sums and high-precision evaluation of Euler-type series.
//!
//! A [`Series`] is `sum_{n>=1} f(n)` where `f` is a rational combination of
//! products of partial sums, weighted by `w(n) / (n+a)^q`. The first `N`
//! terms are summed directly; the rest is replaced by the large-`n`
//! expansion of `f` and summed by [`Expansion::tail_sum`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::asymptotic::Expansion;
use crate::error::{Error, Result};
use crate::exact::{int, Rational};
use crate::numerics::{
    harmonic_constant, hurwitz_zeta_value, polylog_value, rational_to_f64, zeta_at, zetabar_value,
    NumericalResult, PrecisionContext,
};
use crate::real::Real;

/// Names `S(p1, ...; q)` with optional bars; `inner` is kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SumSignature {
    inner: Vec<(u32, bool)>,
    outer: u32,
    outer_alt: bool,
}

impl SumSignature {
    pub fn new(mut inner: Vec<(u32, bool)>, outer: u32, outer_alt: bool) -> Result<Self> {
        if inner.len() > 2 {
            return Err(Error::Domain(format!("depth {} sums are not supported", inner.len())));
        }
        if outer == 0 || inner.iter().any(|&(p, _)| p == 0) {
            return Err(Error::Domain("exponents must be positive".into()));
        }
        inner.sort();
        let sig = SumSignature { inner, outer, outer_alt };
        if !outer_alt && outer < 2 {
            return Err(Error::Divergent(sig.to_string()));
        }
        Ok(sig)
    }

    /// `S(p; q)` without bars.
    pub fn linear(p: u32, q: u32) -> Result<Self> {
        Self::new(vec![(p, false)], q, false)
    }

    /// `S(p1, p2; q)` without bars.
    pub fn quadratic(p1: u32, p2: u32, q: u32) -> Result<Self> {
        Self::new(vec![(p1, false), (p2, false)], q, false)
    }

    pub fn inner(&self) -> &[(u32, bool)] {
        &self.inner
    }

    pub fn outer(&self) -> u32 {
        self.outer
    }

    pub fn outer_alt(&self) -> bool {
        self.outer_alt
    }

    pub fn depth(&self) -> usize {
        self.inner.len()
    }

    pub fn weight(&self) -> u32 {
        self.inner.iter().map(|&(p, _)| p).sum::<u32>() + self.outer
    }

    pub fn is_alternating(&self) -> bool {
        self.outer_alt || self.inner.iter().any(|&(_, a)| a)
    }

    pub fn to_series(&self) -> Series {
        let factors = self
            .inner
            .iter()
            .map(|&(p, alt)| if alt { Factor::Alt(p) } else { Factor::Zeta(p) })
            .collect();
        let outer = if self.outer_alt { Outer::Alt } else { Outer::Plain };
        Series::single(SeriesTerm::new(Rational::one(), vec![], factors, outer, self.outer))
    }
}

fn fmt_arg(f: &mut fmt::Formatter<'_>, p: u32, alt: bool) -> fmt::Result {
    if alt {
        write!(f, "b{p}")
    } else {
        write!(f, "{p}")
    }
}

impl fmt::Display for SumSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S(")?;
        for (i, &(p, alt)) in self.inner.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            fmt_arg(f, p, alt)?;
        }
        write!(f, ";")?;
        fmt_arg(f, self.outer, self.outer_alt)?;
        write!(f, ")")
    }
}

fn check_np(n: u64, p: u32) -> Result<()> {
    if n == 0 || p == 0 {
        return Err(Error::Domain(format!("partial sums need n >= 1 and p >= 1 (got {n}, {p})")));
    }
    Ok(())
}

fn inv_pow_rat(k: u64, p: u32) -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(k), p as usize))
}

/// `zeta_n(p) = sum_{j<=n} j^-p` exactly.
pub fn partial_zeta(n: u64, p: u32) -> Result<Rational> {
    check_np(n, p)?;
    Ok((1..=n).map(|k| inv_pow_rat(k, p)).sum())
}

/// `L_n(p) = sum_{j<=n} (-1)^(j-1) j^-p` exactly.
pub fn partial_alt(n: u64, p: u32) -> Result<Rational> {
    check_np(n, p)?;
    Ok((1..=n)
        .map(|k| if k % 2 == 1 { inv_pow_rat(k, p) } else { -inv_pow_rat(k, p) })
        .sum())
}

/// `zeta_n(l; x) = sum_{k<=n} x^k / k^l` exactly.
pub fn partial_power_exact(n: u64, l: u32, x: &Rational) -> Result<Rational> {
    check_np(n, l)?;
    if x.abs() > Rational::one() {
        return Err(Error::Domain("partial_power needs x in [-1, 1]".into()));
    }
    let mut acc = Rational::zero();
    let mut power = Rational::one();
    for k in 1..=n {
        power *= x;
        acc += &power * inv_pow_rat(k, l);
    }
    Ok(acc)
}

/// `zeta_n(l; x)` in fixed point.
pub fn partial_power(n: u64, l: u32, x: &Rational, ctx: &PrecisionContext) -> Result<NumericalResult> {
    check_np(n, l)?;
    if x.abs() > Rational::one() {
        return Err(Error::Domain("partial_power needs x in [-1, 1]".into()));
    }
    let bits = ctx.bits();
    if n <= 1000 {
        let exact = partial_power_exact(n, l, x)?;
        let v = Real::from_rational(&exact, bits);
        return Ok(NumericalResult::new(v, Real::ulp(bits)));
    }
    let w = bits + 16;
    let xr = Real::from_rational(x, w);
    let mut power = Real::one(w);
    let mut acc = Real::zero(w);
    for k in 1..=n {
        power = &power * &xr;
        acc += &power.div_int(num_traits::pow(BigInt::from(k), l as usize));
    }
    Ok(NumericalResult::new(acc.with_bits(bits), Real::ulp(w) * (3 * n + 4) as f64 + Real::ulp(bits)))
}

/// Exact prefix table of `zeta_n(p)`, `L_n(p)` for `n <= N`.
#[derive(Clone, Debug)]
pub struct PartialSumTable {
    cutoff: u64,
    zeta: BTreeMap<u32, Vec<Rational>>,
    alt: BTreeMap<u32, Vec<Rational>>,
}

impl PartialSumTable {
    pub fn new(cutoff: u64) -> Self {
        PartialSumTable { cutoff, zeta: BTreeMap::new(), alt: BTreeMap::new() }
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    fn fill(cutoff: u64, p: u32, alt: bool) -> Vec<Rational> {
        let mut out = Vec::with_capacity(cutoff as usize + 1);
        let mut acc = Rational::zero();
        out.push(acc.clone());
        for k in 1..=cutoff {
            let t = inv_pow_rat(k, p);
            if alt && k % 2 == 0 {
                acc -= t;
            } else {
                acc += t;
            }
            out.push(acc.clone());
        }
        out
    }

    /// `zeta_n(p)`; `n = 0` gives the empty sum.
    pub fn zeta(&mut self, n: u64, p: u32) -> Result<&Rational> {
        self.check(n, p)?;
        let cutoff = self.cutoff;
        Ok(&self.zeta.entry(p).or_insert_with(|| Self::fill(cutoff, p, false))[n as usize])
    }

    pub fn alt(&mut self, n: u64, p: u32) -> Result<&Rational> {
        self.check(n, p)?;
        let cutoff = self.cutoff;
        Ok(&self.alt.entry(p).or_insert_with(|| Self::fill(cutoff, p, true))[n as usize])
    }

    fn check(&self, n: u64, p: u32) -> Result<()> {
        if n > self.cutoff || p == 0 {
            return Err(Error::Domain(format!("partial sum table covers n <= {} and p >= 1", self.cutoff)));
        }
        Ok(())
    }
}

/// A constant multiplying a series term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Const {
    Zeta(u32),
    ZetaBar(u32),
    /// `zeta(p, a+1)` with the series shift `a`.
    Hurwitz(u32),
    /// `Li_l(x)` for rational `x` in `[-1, 1]`.
    Polylog(u32, Rational),
}

/// A partial-sum factor depending on `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    /// `zeta_n(p)`
    Zeta(u32),
    /// `L_n(p)`
    Alt(u32),
    /// `zeta_n(l; x)`
    Power(u32, Rational),
    /// `sum_{k<=n} (k+a)^-p` with the series shift `a`.
    Hurwitz(u32),
}

/// The `n`-dependent weight multiplying `(n+a)^-q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Outer {
    Plain,
    /// `(-1)^(n-1)`
    Alt,
    /// `z^n`
    Power(Rational),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTerm {
    pub coeff: Rational,
    pub consts: Vec<Const>,
    pub factors: Vec<Factor>,
    pub outer: Outer,
    pub q: u32,
}

impl SeriesTerm {
    pub fn new(coeff: Rational, consts: Vec<Const>, factors: Vec<Factor>, outer: Outer, q: u32) -> Self {
        SeriesTerm { coeff, consts, factors, outer, q }
    }
}

/// `sum_{n>=1} sum_terms (...)` plus constant products added once.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Series {
    pub shift: Rational,
    pub terms: Vec<SeriesTerm>,
    pub constants: Vec<(Rational, Vec<Const>)>,
}

impl Series {
    pub fn single(term: SeriesTerm) -> Self {
        Series { shift: Rational::zero(), terms: vec![term], constants: vec![] }
    }

    pub fn with_shift(shift: Rational) -> Self {
        Series { shift, terms: vec![], constants: vec![] }
    }

    pub fn push(&mut self, term: SeriesTerm) -> &mut Self {
        self.terms.push(term);
        self
    }

    pub fn push_constant(&mut self, coeff: Rational, consts: Vec<Const>) -> &mut Self {
        self.constants.push((coeff, consts));
        self
    }

    /// `self - other` (shifts must agree).
    pub fn minus(mut self, other: &Series) -> Self {
        assert_eq!(self.shift, other.shift, "series shifts differ");
        for t in &other.terms {
            let mut t = t.clone();
            t.coeff = -t.coeff;
            self.terms.push(t);
        }
        for (c, k) in &other.constants {
            self.constants.push((-c.clone(), k.clone()));
        }
        self
    }

    pub fn scaled(mut self, r: &Rational) -> Self {
        for t in &mut self.terms {
            t.coeff *= r;
        }
        for c in &mut self.constants {
            c.0 *= r;
        }
        self
    }
}

/// Normalized factor used by the evaluator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum F {
    Zeta(u32),
    Alt(u32),
    Geo(u32, Rational),
    Hurwitz(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum W {
    Plain,
    Alt,
    Geo(Rational),
}

#[derive(Clone, Debug)]
struct Term {
    coeff: Rational,
    consts: Vec<Const>,
    factors: Vec<F>,
    outer: W,
    q: u32,
}

fn normalize_terms(series: &Series) -> Result<Vec<Term>> {
    let shifted = !series.shift.is_zero();
    let mut out = Vec::new();
    'terms: for t in &series.terms {
        let mut coeff = t.coeff.clone();
        if coeff.is_zero() {
            continue;
        }
        let mut factors = Vec::new();
        for f in &t.factors {
            let nf = match f {
                Factor::Zeta(p) | Factor::Alt(p) | Factor::Power(p, _) | Factor::Hurwitz(p) if *p == 0 => {
                    return Err(Error::Domain("partial sum exponents must be positive".into()))
                }
                Factor::Zeta(p) => F::Zeta(*p),
                Factor::Alt(p) => F::Alt(*p),
                Factor::Hurwitz(p) => {
                    if shifted {
                        F::Hurwitz(*p)
                    } else {
                        F::Zeta(*p)
                    }
                }
                Factor::Power(l, x) => {
                    if x.abs() > Rational::one() {
                        return Err(Error::Domain("partial power argument outside [-1, 1]".into()));
                    }
                    if x.is_zero() {
                        continue 'terms;
                    } else if x.is_one() {
                        F::Zeta(*l)
                    } else if *x == -Rational::one() {
                        coeff = -coeff;
                        F::Alt(*l)
                    } else {
                        F::Geo(*l, x.clone())
                    }
                }
            };
            if shifted && matches!(nf, F::Zeta(_) | F::Alt(_)) {
                return Err(Error::Domain("shifted series only take Hurwitz partial sums".into()));
            }
            factors.push(nf);
        }
        let outer = match &t.outer {
            Outer::Plain => W::Plain,
            Outer::Alt => W::Alt,
            Outer::Power(z) => {
                if z.abs() > Rational::one() {
                    return Err(Error::Domain("outer power argument outside [-1, 1]".into()));
                }
                if z.is_zero() {
                    continue;
                } else if z.is_one() {
                    W::Plain
                } else if *z == -Rational::one() {
                    coeff = -coeff;
                    W::Alt
                } else {
                    W::Geo(z.clone())
                }
            }
        };
        if shifted && outer != W::Plain {
            return Err(Error::Domain("shifted series only take a plain outer weight".into()));
        }
        factors.sort();
        out.push(Term { coeff, consts: t.consts.clone(), factors, outer, q: t.q });
    }
    Ok(out)
}

/// Constants are fetched once per evaluation so that equal constants
/// appearing in coefficients and in expansions are bit-identical.
struct ConstMemo<'a> {
    ctx: &'a PrecisionContext,
    bits: u32,
    shift: Rational,
    memo: HashMap<Const, NumericalResult>,
    harmonic: Option<NumericalResult>,
}

impl<'a> ConstMemo<'a> {
    fn new(ctx: &'a PrecisionContext, shift: &Rational) -> Self {
        ConstMemo { ctx, bits: ctx.bits(), shift: shift.clone(), memo: HashMap::new(), harmonic: None }
    }

    fn get(&mut self, c: &Const) -> Result<NumericalResult> {
        if let Some(v) = self.memo.get(c) {
            return Ok(v.clone());
        }
        let v = match c {
            Const::Zeta(s) => zeta_at(*s, self.bits, self.ctx)?,
            Const::ZetaBar(s) => zetabar_value(*s as i64, self.ctx)?,
            Const::Hurwitz(p) => hurwitz_zeta_value(*p, &self.shift, self.ctx)?,
            Const::Polylog(l, x) => {
                if x.is_one() {
                    if *l < 2 {
                        return Err(Error::Domain("Li_1(1) diverges".into()));
                    }
                    zeta_at(*l, self.bits, self.ctx)?
                } else if *x == -Rational::one() {
                    zetabar_value(*l as i64, self.ctx)?.neg()
                } else if x.is_zero() {
                    NumericalResult::zero(self.bits)
                } else {
                    polylog_value(*l, x, self.ctx)?
                }
            }
        };
        self.memo.insert(c.clone(), v.clone());
        Ok(v)
    }

    fn product(&mut self, coeff: &Rational, consts: &[Const]) -> Result<NumericalResult> {
        let mut acc = NumericalResult::exact(Real::from_rational(coeff, self.bits));
        if Real::from_rational(coeff, self.bits).to_rational() != *coeff {
            acc.abs_error_bound = Real::ulp(self.bits);
        }
        for c in consts {
            acc = acc.mul(&self.get(c)?);
        }
        Ok(acc)
    }

    fn harmonic(&mut self) -> Result<NumericalResult> {
        if self.harmonic.is_none() {
            self.harmonic = Some(harmonic_constant(&self.shift, self.ctx)?);
        }
        Ok(self.harmonic.clone().unwrap())
    }

    fn expansion(&mut self, f: &F, order: u32) -> Result<Expansion> {
        let bits = self.bits;
        Ok(match f {
            F::Zeta(1) | F::Hurwitz(1) => Expansion::partial_harmonic(&self.harmonic()?, order, bits),
            F::Zeta(p) => Expansion::partial_power(&self.get(&Const::Zeta(*p))?, *p, order, bits),
            F::Hurwitz(p) => Expansion::partial_power(&self.get(&Const::Hurwitz(*p))?, *p, order, bits),
            F::Alt(p) => Expansion::partial_alternating(&self.get(&Const::ZetaBar(*p))?, *p, order, bits),
            F::Geo(l, x) => Expansion::constant(&self.get(&Const::Polylog(*l, x.clone()))?, order, bits),
        })
    }
}

fn geo_ratio(terms: &[Term]) -> f64 {
    let mut r: f64 = 0.0;
    for t in terms {
        for f in &t.factors {
            if let F::Geo(_, x) = f {
                r = r.max(rational_to_f64(x).abs());
            }
        }
        if let W::Geo(z) = &t.outer {
            r = r.max(rational_to_f64(z).abs());
        }
    }
    r
}

/// Direct summation cutoff for this series at this precision.
fn cutoff(terms: &[Term], ctx: &PrecisionContext) -> Result<u64> {
    let mut n = ctx.base_cutoff();
    let r = geo_ratio(terms);
    if r > 0.0 {
        let digits = ctx.working_digits() as f64 + 6.0;
        let need = (digits * std::f64::consts::LN_10 / -r.ln()).ceil() as u64 + 10;
        n = n.max(need);
    }
    if 3 * n / 2 > ctx.max_terms {
        return Err(Error::PrecisionUnreachable {
            reason: format!("series needs about {} terms, above max_terms = {}", 3 * n / 2, ctx.max_terms),
            best_effort: Box::new(NumericalResult::new(Real::zero(ctx.bits()), f64::INFINITY)),
        });
    }
    Ok(n)
}

/// Running values of the distinct factors during direct summation.
struct Running {
    factors: Vec<F>,
    values: Vec<Real>,
    powers: Vec<Real>,
    xs: Vec<Real>,
}

impl Running {
    fn new(factors: Vec<F>, w: u32) -> Self {
        let xs = factors
            .iter()
            .map(|f| match f {
                F::Geo(_, x) => Real::from_rational(x, w),
                _ => Real::one(w),
            })
            .collect();
        let n = factors.len();
        Running { factors, values: vec![Real::zero(w); n], powers: vec![Real::one(w); n], xs }
    }

    fn step(&mut self, n: u64, shift: &Rational, w: u32) {
        for i in 0..self.factors.len() {
            let add = match &self.factors[i] {
                F::Zeta(p) => Real::inv_pow(n, *p, w),
                F::Alt(p) => {
                    let t = Real::inv_pow(n, *p, w);
                    if n.is_multiple_of(2) {
                        -t
                    } else {
                        t
                    }
                }
                F::Hurwitz(p) => shifted_inv_pow(n, *p, shift, w),
                F::Geo(l, _) => {
                    self.powers[i] = &self.powers[i] * &self.xs[i];
                    self.powers[i].div_int(num_traits::pow(BigInt::from(n), *l as usize))
                }
            };
            self.values[i] += &add;
        }
    }

    fn value(&self, f: &F) -> &Real {
        let i = self.factors.iter().position(|g| g == f).unwrap();
        &self.values[i]
    }
}

fn shifted_inv_pow(n: u64, p: u32, shift: &Rational, w: u32) -> Real {
    if shift.is_zero() {
        return Real::inv_pow(n, p, w);
    }
    let base = shift + int(n as i64);
    Real::from_rational(&num_traits::pow(base, p as usize).recip(), w)
}

fn evaluate_at(terms: &[Term], series: &Series, ctx: &PrecisionContext, cutoff: u64) -> Result<NumericalResult> {
    let bits = ctx.bits();
    let w = bits + 16;
    let shift = &series.shift;
    let mut memo = ConstMemo::new(ctx, shift);
    let mut coeffs = Vec::with_capacity(terms.len());
    let mut coeff_err = 0.0;
    let mut coeff_mag = 0.0;
    for t in terms {
        let c = memo.product(&t.coeff, &t.consts)?;
        coeff_err += c.abs_error_bound;
        coeff_mag += c.abs_value();
        coeffs.push(c.value.with_bits(w));
    }
    let mut distinct: Vec<F> = terms.iter().flat_map(|t| t.factors.iter().cloned()).collect();
    distinct.sort();
    distinct.dedup();
    let depth = terms.iter().map(|t| t.factors.len()).max().unwrap_or(0) as i32;
    let mut running = Running::new(distinct, w);
    let mut outer_cache: HashMap<u32, Real> = HashMap::new();
    let mut geo_outer: Vec<Real> = terms
        .iter()
        .map(|t| match &t.outer {
            W::Geo(z) => Real::from_rational(z, w),
            _ => Real::one(w),
        })
        .collect();
    let geo_step: Vec<Real> = geo_outer.clone();
    let mut acc = Real::zero(w);
    for n in 1..=cutoff {
        running.step(n, shift, w);
        outer_cache.clear();
        for (i, t) in terms.iter().enumerate() {
            let mut v = coeffs[i].clone();
            for f in &t.factors {
                v = &v * running.value(f);
            }
            let inv = outer_cache.entry(t.q).or_insert_with(|| shifted_inv_pow(n, t.q, shift, w));
            v = &v * inv;
            match &t.outer {
                W::Plain => {}
                W::Alt => {
                    if n % 2 == 0 {
                        v = -v;
                    }
                }
                W::Geo(_) => {
                    v = &v * &geo_outer[i];
                    geo_outer[i] = &geo_outer[i] * &geo_step[i];
                }
            }
            acc += &v;
        }
    }
    let log_n = (cutoff as f64).ln() + 2.0;
    let factor_mag = log_n.powi(depth.max(1));
    let mut err = Real::ulp(w) * (cutoff as f64) * (terms.len() as f64) * (depth as f64 + 4.0) * (coeff_mag + 1.0) * factor_mag
        + coeff_err * (cutoff as f64) * factor_mag * 4.0;

    // tail
    let order = ctx.expansion_order();
    let mut total = Expansion::zero(order, bits);
    for (i, t) in terms.iter().enumerate() {
        let cf = coeffs[i].to_f64().abs();
        if let W::Geo(z) = &t.outer {
            let zf = rational_to_f64(z).abs();
            let bound = cf * zf.powi(cutoff as i32 + 1) / (1.0 - zf) * factor_mag * 2.0;
            err += bound;
            continue;
        }
        let mut e = Expansion::constant(&NumericalResult::exact(coeffs[i].with_bits(bits)), order, bits);
        for f in &t.factors {
            if let F::Geo(_, x) = f {
                let xf = rational_to_f64(x).abs();
                // remainder of the partial power beyond n, times the other factors
                err += cf * xf.powi(cutoff as i32 + 1) / (1.0 - xf).powi(2) * factor_mag * 2.0;
            }
            e = e.mul(&memo.expansion(f, order)?);
        }
        // (-1)^(n-1) = -(-1)^n
        let alt = t.outer == W::Alt;
        let outer = Expansion::inv_power(t.q, alt, alt, order, bits);
        total = total.add(&e.mul(&outer));
    }
    let x0 = shift + int(cutoff as i64 + 1);
    let tail = total.tail_sum(cutoff + 1, &x0)?;
    let mut value = NumericalResult::new(acc.with_bits(bits), err + Real::ulp(bits)).add(&tail);
    for (c, ks) in &series.constants {
        value = value.add(&memo.product(c, ks)?);
    }
    Ok(value)
}

/// Evaluate a series with a certified absolute error bound.
///
/// The value is computed at two cutoffs; the reported bound is at least
/// their difference.
pub fn evaluate_series(series: &Series, ctx: &PrecisionContext) -> Result<NumericalResult> {
    let terms = normalize_terms(series)?;
    if terms.is_empty() {
        let mut memo = ConstMemo::new(ctx, &series.shift);
        let mut value = NumericalResult::zero(ctx.bits());
        for (c, ks) in &series.constants {
            value = value.add(&memo.product(c, ks)?);
        }
        return Ok(value);
    }
    let n1 = cutoff(&terms, ctx)?;
    let first = evaluate_at(&terms, series, ctx, n1)?;
    let second = evaluate_at(&terms, series, ctx, n1 + n1 / 2)?;
    let spread = (&first.value - &second.value).to_f64().abs();
    let bound = second.abs_error_bound.max(spread).max(first.abs_error_bound.min(second.abs_error_bound));
    let result = NumericalResult::new(second.value, bound);
    if result.abs_error_bound > ctx.target_tolerance() {
        return Err(Error::PrecisionUnreachable {
            reason: format!("error bound {:.2e} above the requested tolerance", result.abs_error_bound),
            best_effort: Box::new(result),
        });
    }
    Ok(result)
}

fn sum_memo() -> &'static Mutex<HashMap<(SumSignature, PrecisionContext), NumericalResult>> {
    static MEMO: OnceLock<Mutex<HashMap<(SumSignature, PrecisionContext), NumericalResult>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Forget memoized sum values; benchmarks use this to time cold runs.
pub fn clear_sum_cache() {
    sum_memo().lock().unwrap().clear();
}

/// Value of the Euler sum named by `sig`.
pub fn euler_sum_value(sig: &SumSignature, ctx: &PrecisionContext) -> Result<NumericalResult> {
    if !sig.outer_alt && sig.outer < 2 {
        return Err(Error::Divergent(sig.to_string()));
    }
    let key = (sig.clone(), *ctx);
    if let Some(v) = sum_memo().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = evaluate_series(&sig.to_series(), ctx)?;
    sum_memo().lock().unwrap().insert(key, v.clone());
    Ok(v)
}

/// `|LHS - RHS|` of the three-parameter partial-power relation.
///
/// The left side is
/// `sum zeta_n(l1;x) zeta_n(l2;y) z^n/n^m + (cyclic in (l1,x), (l2,y), (m,z))`
/// and the right side is the three single-factor sums with paired
/// arguments plus `Li_m(z) Li_l1(x) Li_l2(y) - Li_{l1+l2+m}(xyz)`.
pub fn thm28_series(l1: u32, l2: u32, m: u32, x: &Rational, y: &Rational, z: &Rational) -> Result<Series> {
    if l1 == 0 || l2 == 0 || m == 0 {
        return Err(Error::Domain("exponents must be positive".into()));
    }
    for v in [x, y, z] {
        if v.abs() > Rational::one() {
            return Err(Error::Domain("arguments must lie in [-1, 1]".into()));
        }
    }
    for (l, v) in [(l1, x), (l2, y), (m, z)] {
        if l == 1 && v.is_one() {
            return Err(Error::Domain(format!("divergent corner: exponent 1 with argument 1 ({l1},{l2},{m})")));
        }
    }
    let pw = |l: u32, v: &Rational| Factor::Power(l, v.clone());
    let one = Rational::one();
    let mut s = Series::default();
    s.push(SeriesTerm::new(one.clone(), vec![], vec![pw(l1, x), pw(l2, y)], Outer::Power(z.clone()), m));
    s.push(SeriesTerm::new(one.clone(), vec![], vec![pw(l1, x), pw(m, z)], Outer::Power(y.clone()), l2));
    s.push(SeriesTerm::new(one.clone(), vec![], vec![pw(l2, y), pw(m, z)], Outer::Power(x.clone()), l1));
    let neg = -one.clone();
    s.push(SeriesTerm::new(neg.clone(), vec![], vec![pw(m, z)], Outer::Power(x * y), l1 + l2));
    s.push(SeriesTerm::new(neg.clone(), vec![], vec![pw(l1, x)], Outer::Power(y * z), m + l2));
    s.push(SeriesTerm::new(neg.clone(), vec![], vec![pw(l2, y)], Outer::Power(x * z), l1 + m));
    s.push_constant(
        neg.clone(),
        vec![Const::Polylog(m, z.clone()), Const::Polylog(l1, x.clone()), Const::Polylog(l2, y.clone())],
    );
    s.push_constant(one, vec![Const::Polylog(l1 + l2 + m, x * y * z)]);
    Ok(s)
}

pub fn thm28_numeric_check(
    l1: u32,
    l2: u32,
    m: u32,
    x: &Rational,
    y: &Rational,
    z: &Rational,
    ctx: &PrecisionContext,
) -> Result<NumericalResult> {
    let s = thm28_series(l1, l2, m, x, y, z)?;
    let r = evaluate_series(&s, ctx)?;
    Ok(NumericalResult::new(r.value.abs(), r.abs_error_bound))
}

/// `sum_{n<=N} zeta_n(m) x^n - Li_m(x)/(1-x)` and a bound on the omitted tail.
pub fn generating_function_check(m: u32, x: &Rational, cutoff: u64, ctx: &PrecisionContext) -> Result<(NumericalResult, f64)> {
    if x.abs() >= Rational::one() || m == 0 {
        return Err(Error::Domain("generating function check needs |x| < 1 and m >= 1".into()));
    }
    let bits = ctx.bits();
    let mut acc = Rational::zero();
    let mut zn = Rational::zero();
    let mut power = Rational::one();
    for n in 1..=cutoff {
        zn += inv_pow_rat(n, m);
        power *= x;
        acc += &zn * &power;
    }
    let li = polylog_value(m, x, ctx)?;
    let closed = li.scale(&(Rational::one() - x).recip());
    let diff = NumericalResult::new(Real::from_rational(&acc, bits), Real::ulp(bits)).sub(&closed);
    let xf = rational_to_f64(x).abs();
    // |zeta_n(m)| <= 1 + ln n, so the tail is below (1 + ln N') |x|^(N+1) / (1-|x|)^2
    let tail = (2.0 + (cutoff as f64).ln()) * xf.powi(cutoff as i32 + 1) / (1.0 - xf).powi(2);
    Ok((diff, tail))
}

/// Left minus right side of the shifted two-parameter relation, with the
/// shift `a` of `zeta_n(p, a+1) = sum_{k<=n} (k+a)^-p`.
pub fn hurwitz_thm21_series(m: u32, p: u32, a: &Rational) -> Result<Series> {
    if m < 2 || p < 2 {
        return Err(Error::Domain("needs m, p >= 2".into()));
    }
    if *a <= int(-1) {
        return Err(Error::Domain("shift must exceed -1".into()));
    }
    let one = Rational::one();
    let mut s = Series::with_shift(a.clone());
    // lhs
    s.push(SeriesTerm::new(one.clone(), vec![Const::Hurwitz(m)], vec![Factor::Hurwitz(p)], Outer::Plain, 1));
    s.push(SeriesTerm::new(-one.clone(), vec![Const::Hurwitz(p)], vec![Factor::Hurwitz(m)], Outer::Plain, 1));
    // minus rhs
    s.push(SeriesTerm::new(-one.clone(), vec![Const::Hurwitz(p)], vec![Factor::Hurwitz(1)], Outer::Plain, m));
    s.push(SeriesTerm::new(one.clone(), vec![Const::Hurwitz(m)], vec![Factor::Hurwitz(1)], Outer::Plain, p));
    s.push_constant(-one.clone(), vec![Const::Hurwitz(m), Const::Hurwitz(p + 1)]);
    s.push_constant(one, vec![Const::Hurwitz(m + 1), Const::Hurwitz(p)]);
    Ok(s)
}

pub fn hurwitz_numeric_check(m: u32, p: u32, a: &Rational, ctx: &PrecisionContext) -> Result<NumericalResult> {
    let r = evaluate_series(&hurwitz_thm21_series(m, p, a)?, ctx)?;
    Ok(NumericalResult::new(r.value.abs(), r.abs_error_bound))
}
