//! Arbitrary-precision constants with tracked absolute error bounds.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::asymptotic;
use crate::error::{Error, Result};
use crate::exact::{bernoulli, int, rat, Rational};
use crate::real::Real;

/// Precision requested from a numerical evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    /// Decimal digits after the point that must be certified.
    pub target_digits: u32,
    /// Extra digits carried internally.
    pub guard_digits: u32,
    /// Hard cap on the number of explicitly summed series terms.
    pub max_terms: u64,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { target_digits: 30, guard_digits: 10, max_terms: 1_000_000 }
    }
}

impl PrecisionContext {
    pub fn new(target_digits: u32, guard_digits: u32, max_terms: u64) -> Result<Self> {
        if target_digits < 10 || guard_digits < 10 || max_terms < 1000 {
            return Err(Error::Domain(format!(
                "precision context needs target >= 10, guard >= 10, max_terms >= 1000 \
                 (got {target_digits}, {guard_digits}, {max_terms})"
            )));
        }
        Ok(PrecisionContext { target_digits, guard_digits, max_terms })
    }

    pub fn with_digits(target_digits: u32) -> Self {
        PrecisionContext { target_digits: target_digits.max(10), ..Default::default() }
    }

    pub fn working_digits(&self) -> u32 {
        self.target_digits + self.guard_digits
    }

    /// Fractional bits used by fixed-point arithmetic at this precision.
    pub fn bits(&self) -> u32 {
        (self.working_digits() as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
    }

    pub fn target_tolerance(&self) -> f64 {
        10f64.powi(-(self.target_digits as i32))
    }

    /// Cutoff at which explicit summation hands over to the asymptotic tail.
    pub fn base_cutoff(&self) -> u64 {
        (2 * self.working_digits() as u64).max(80)
    }

    /// Highest inverse power kept in asymptotic expansions.
    pub fn expansion_order(&self) -> u32 {
        let per_order = (self.base_cutoff() as f64).log10();
        (self.working_digits() as f64 / per_order).ceil() as u32 + 10
    }
}

/// A value together with a bound on its absolute error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericalResult {
    #[serde(with = "real_serde")]
    pub value: Real,
    pub abs_error_bound: f64,
}

mod real_serde {
    use serde::{Deserializer, Serializer};

    use crate::real::Real;

    pub fn serialize<S: Serializer>(x: &Real, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(_d: D) -> Result<Real, D::Error> {
        Err(serde::de::Error::custom("numerical results are output only"))
    }
}

/// Round a bound up by a relative ulp so repeated f64 arithmetic never shrinks it.
pub fn up(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (1.0 + 4.0 * f64::EPSILON)
    }
}

impl NumericalResult {
    pub fn new(value: Real, abs_error_bound: f64) -> Self {
        NumericalResult { value, abs_error_bound: up(abs_error_bound.abs()) }
    }

    pub fn exact(value: Real) -> Self {
        NumericalResult { value, abs_error_bound: 0.0 }
    }

    pub fn zero(bits: u32) -> Self {
        Self::exact(Real::zero(bits))
    }

    pub fn bits(&self) -> u32 {
        self.value.bits()
    }

    pub fn add(&self, other: &NumericalResult) -> NumericalResult {
        NumericalResult::new(&self.value + &other.value, self.abs_error_bound + other.abs_error_bound)
    }

    pub fn sub(&self, other: &NumericalResult) -> NumericalResult {
        NumericalResult::new(&self.value - &other.value, self.abs_error_bound + other.abs_error_bound)
    }

    pub fn neg(&self) -> NumericalResult {
        NumericalResult { value: -&self.value, abs_error_bound: self.abs_error_bound }
    }

    pub fn mul(&self, other: &NumericalResult) -> NumericalResult {
        let a = self.value.to_f64().abs();
        let b = other.value.to_f64().abs();
        let da = self.abs_error_bound;
        let db = other.abs_error_bound;
        let ulp = Real::ulp(self.bits().max(other.bits()));
        NumericalResult::new(&self.value * &other.value, a * db + b * da + da * db + ulp)
    }

    pub fn scale(&self, r: &Rational) -> NumericalResult {
        let c = rational_to_f64(r).abs();
        NumericalResult::new(self.value.mul_rational(r), self.abs_error_bound * c + Real::ulp(self.bits()))
    }

    pub fn abs_value(&self) -> f64 {
        self.value.to_f64().abs()
    }

    /// Decimal places justified by the error bound.
    pub fn certified_digits(&self) -> u32 {
        if self.abs_error_bound == 0.0 {
            return (self.bits() as f64 * std::f64::consts::LOG10_2) as u32;
        }
        let d = -self.abs_error_bound.log10();
        if d <= 0.0 {
            0
        } else {
            d.floor() as u32
        }
    }

    /// Rendering truncated to the certified digits (at most `max_places`).
    pub fn display(&self, max_places: u32) -> String {
        self.value.to_decimal(self.certified_digits().min(max_places) as usize)
    }
}

impl fmt::Display for NumericalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (+/- {:.2e})", self.display(60), self.abs_error_bound)
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        let nb = r.numer().bits() as i64;
        let db = r.denom().bits() as i64;
        let shift = (nb - db).clamp(-1000, 1000);
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        sign * (shift as f64).exp2()
    })
}

/// Keys of the memoized constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConstantKey {
    Pi,
    Ln2,
    Gamma,
    Zeta(u32),
    /// `lim_n (sum_{k<=n} (k+a)^{-p})` for `p >= 2`, i.e. the Hurwitz value `zeta(p, a+1)`.
    HurwitzZeta(u32, Rational),
    /// `lim_n (sum_{k<=n} 1/(k+a) - ln(n+a))`, which is `-psi(a+1)`.
    HarmonicConstant(Rational),
    Polylog(u32, Rational),
}

/// Memo of constants keyed by kind and achieved precision (fractional bits).
pub struct ConstantCache {
    memo: Mutex<HashMap<ConstantKey, NumericalResult>>,
}

impl ConstantCache {
    pub fn global() -> &'static ConstantCache {
        static CACHE: OnceLock<ConstantCache> = OnceLock::new();
        CACHE.get_or_init(|| ConstantCache { memo: Mutex::new(HashMap::new()) })
    }

    pub fn get_or_compute(
        &self,
        key: ConstantKey,
        bits: u32,
        compute: impl FnOnce(u32) -> Result<NumericalResult>,
    ) -> Result<NumericalResult> {
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            if hit.bits() >= bits {
                let v = hit.value.with_bits(bits);
                let slack = if hit.bits() > bits { Real::ulp(bits) } else { 0.0 };
                return Ok(NumericalResult::new(v, hit.abs_error_bound + slack));
            }
        }
        let fresh = compute(bits)?;
        let mut memo = self.memo.lock().unwrap();
        let replace = memo.get(&key).is_none_or(|old| old.bits() < fresh.bits());
        if replace {
            memo.insert(key, fresh.clone());
        }
        Ok(fresh)
    }

    pub fn len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn cached(key: ConstantKey, bits: u32, f: impl FnOnce(u32) -> Result<NumericalResult>) -> Result<NumericalResult> {
    ConstantCache::global().get_or_compute(key, bits, f)
}

/// `sum_{i>=0} (-1)^i / ((2i+1) k^(2i+1))`, i.e. `atan(1/k)`.
fn atan_inv(k: u32, bits: u32) -> (Real, u64) {
    let k2 = BigInt::from(k) * k;
    let mut power = Real::one(bits).div_int(k);
    let mut acc = Real::zero(bits);
    let mut i = 0u64;
    while !power.is_zero() {
        let term = power.div_int(2 * i + 1);
        if i.is_multiple_of(2) {
            acc += &term;
        } else {
            acc -= &term;
        }
        power = power.div_int(k2.clone());
        i += 1;
    }
    (acc, i)
}

/// `sum_{i>=0} t^(2i+1)/(2i+1)` for `|t| <= 1/3`.
fn atanh_series(t: &Real) -> (Real, u64) {
    let bits = t.bits();
    let t2 = t * t;
    let mut power = t.clone();
    let mut acc = Real::zero(bits);
    let mut i = 0u64;
    while !power.is_zero() {
        acc += &power.div_int(2 * i + 1);
        power = &power * &t2;
        i += 1;
    }
    (acc, i)
}

pub fn pi_value(ctx: &PrecisionContext) -> NumericalResult {
    pi_at(ctx.bits())
}

pub fn pi_at(bits: u32) -> NumericalResult {
    cached(ConstantKey::Pi, bits, |bits| {
        let w = bits + 16;
        let (a, na) = atan_inv(5, w);
        let (b, nb) = atan_inv(239, w);
        let v = a.mul_int(16) - b.mul_int(4);
        let err = Real::ulp(w) * (20 * (na + nb) + 20) as f64 + Real::ulp(bits);
        Ok(NumericalResult::new(v.with_bits(bits), err))
    })
    .expect("pi is total")
}

pub fn ln2_value(ctx: &PrecisionContext) -> NumericalResult {
    ln2_at(ctx.bits())
}

pub fn ln2_at(bits: u32) -> NumericalResult {
    cached(ConstantKey::Ln2, bits, |bits| {
        // ln 2 = 2 atanh(1/3)
        let w = bits + 16;
        let (s, n) = atanh_series(&Real::one(w).div_int(3));
        let err = Real::ulp(w) * (4 * n + 8) as f64 + Real::ulp(bits);
        Ok(NumericalResult::new(s.mul_int(2).with_bits(bits), err))
    })
    .expect("ln 2 is total")
}

/// Natural logarithm of a positive fixed-point value.
pub fn ln_real(x: &Real) -> NumericalResult {
    assert!(!x.is_negative() && !x.is_zero(), "logarithm of a non-positive value");
    let bits = x.bits();
    let w = bits + 16;
    let xw = x.with_bits(w);
    let e = xw.ilog2().unwrap();
    let y = if e >= 0 { xw.shr(e as u32) } else { xw.shl((-e) as u32) };
    let one = Real::one(w);
    let t = (&y - &one).div(&(&y + &one));
    let (s, n) = atanh_series(&t);
    let ln2 = ln2_at(w);
    let v = s.mul_int(2) + ln2.value.mul_int(e);
    let err = Real::ulp(w) * (4 * n + 16) as f64 + ln2.abs_error_bound * (e.unsigned_abs() as f64) + Real::ulp(bits);
    NumericalResult::new(v.with_bits(bits), err)
}

pub fn ln_rational(q: &Rational, bits: u32) -> NumericalResult {
    assert!(q.is_positive(), "logarithm of a non-positive rational");
    ln_real(&Real::from_rational(q, bits + 8)).with_bits(bits)
}

impl NumericalResult {
    pub fn with_bits(&self, bits: u32) -> NumericalResult {
        let slack = if bits < self.bits() { Real::ulp(bits) } else { 0.0 };
        NumericalResult::new(self.value.with_bits(bits), self.abs_error_bound + slack)
    }
}

/// `exp(x)` for moderate `|x|` (below a few hundred).
pub fn exp_real(x: &Real) -> NumericalResult {
    let bits = x.bits();
    const SQUARINGS: u32 = 10;
    let w = bits + 24 + SQUARINGS;
    let xw = x.with_bits(w);
    let ln2 = ln2_at(w);
    let k = (x.to_f64() / std::f64::consts::LN_2).round() as i64;
    let r = &xw - &ln2.value.mul_int(k);
    let r = r.shr(SQUARINGS);
    let mut term = Real::one(w);
    let mut acc = Real::one(w);
    let mut i = 1u64;
    while !term.is_zero() {
        term = (&term * &r).div_int(i);
        acc += &term;
        i += 1;
    }
    for _ in 0..SQUARINGS {
        acc = &acc * &acc;
    }
    let acc = if k >= 0 { acc.shl(k as u32) } else { acc.shr((-k) as u32) };
    let rel = Real::ulp(w) * ((i + 8) as f64) * (1u64 << SQUARINGS) as f64
        + ln2.abs_error_bound * k.unsigned_abs() as f64;
    let err = acc.to_f64().abs() * rel * 2.0 + Real::ulp(bits);
    NumericalResult::new(acc.with_bits(bits), err)
}

/// `zeta(s)` for integer `s >= 2`: direct sum to a cutoff plus the
/// Euler-Maclaurin tail.
pub fn zeta_value(s: i64, ctx: &PrecisionContext) -> Result<NumericalResult> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta({s}) needs s >= 2")));
    }
    zeta_at(s as u32, ctx.bits(), ctx)
}

pub(crate) fn zeta_at(s: u32, bits: u32, ctx: &PrecisionContext) -> Result<NumericalResult> {
    let cutoff = ctx.base_cutoff();
    cached(ConstantKey::Zeta(s), bits, |bits| {
        let head = power_partial_sum(s, cutoff, &Rational::zero(), bits);
        let tail = asymptotic::plain_tail_at(s, &int(cutoff as i64), bits)?;
        Ok(head.add(&tail))
    })
}

/// `sum_{k=1}^{n} (k+a)^{-p}` in fixed point.
pub(crate) fn power_partial_sum(p: u32, n: u64, shift: &Rational, bits: u32) -> NumericalResult {
    let w = bits + 16;
    let mut acc = Real::zero(w);
    for k in 1..=n {
        if shift.is_zero() {
            acc += &Real::inv_pow(k, p, w);
        } else {
            let base = shift + int(k as i64);
            let den = num_traits::pow(base, p as usize);
            acc += &Real::from_rational(&den.recip(), w);
        }
    }
    NumericalResult::new(acc.with_bits(bits), Real::ulp(w) * (n + 2) as f64 + Real::ulp(bits))
}

/// `zeta(s, a+1) = sum_{k>=1} (k+a)^{-s}`.
pub fn hurwitz_zeta_value(s: u32, shift: &Rational, ctx: &PrecisionContext) -> Result<NumericalResult> {
    if s < 2 {
        return Err(Error::Domain(format!("Hurwitz zeta({s}, .) needs s >= 2")));
    }
    if shift.is_zero() {
        return zeta_at(s, ctx.bits(), ctx);
    }
    if *shift <= int(-1) {
        return Err(Error::Domain("Hurwitz shift must exceed -1".into()));
    }
    let cutoff = ctx.base_cutoff();
    cached(ConstantKey::HurwitzZeta(s, shift.clone()), ctx.bits(), |bits| {
        let head = power_partial_sum(s, cutoff, shift, bits);
        let tail = asymptotic::plain_tail_at(s, &(shift + int(cutoff as i64)), bits)?;
        Ok(head.add(&tail))
    })
}

/// `lim_n (sum_{k<=n} 1/(k+a) - ln(n+a))`; equals Euler's gamma at `a = 0`.
pub fn harmonic_constant(shift: &Rational, ctx: &PrecisionContext) -> Result<NumericalResult> {
    let key = if shift.is_zero() { ConstantKey::Gamma } else { ConstantKey::HarmonicConstant(shift.clone()) };
    let cutoff = ctx.base_cutoff();
    cached(key, ctx.bits(), |bits| {
        let head = power_partial_sum(1, cutoff, shift, bits);
        let x = shift + int(cutoff as i64);
        let asym = asymptotic::harmonic_remainder_at(&x, bits)?;
        Ok(head.sub(&asym))
    })
}

pub fn gamma_value(ctx: &PrecisionContext) -> NumericalResult {
    harmonic_constant(&Rational::zero(), ctx).expect("gamma is total")
}

/// Alternating zeta `sum (-1)^(n-1)/n^s`; `s = 1` gives `ln 2`.
pub fn zetabar_value(s: i64, ctx: &PrecisionContext) -> Result<NumericalResult> {
    if s < 1 {
        return Err(Error::Domain(format!("alternating zeta({s}) needs s >= 1")));
    }
    if s == 1 {
        return Ok(ln2_value(ctx));
    }
    let z = zeta_value(s, ctx)?;
    let factor = Rational::one() - Rational::new(BigInt::one(), BigInt::one() << (s - 1) as u32);
    Ok(z.scale(&factor))
}

/// `Li_k(x) = sum x^n / n^k` for rational `|x| < 1` by direct summation.
pub fn polylog_value(k: u32, x: &Rational, ctx: &PrecisionContext) -> Result<NumericalResult> {
    if k < 1 {
        return Err(Error::Domain("polylogarithm order must be positive".into()));
    }
    if x.abs() >= Rational::one() {
        return Err(Error::Domain("direct polylogarithm series needs |x| < 1".into()));
    }
    let max_terms = ctx.max_terms;
    cached(ConstantKey::Polylog(k, x.clone()), ctx.bits(), |bits| {
        let w = bits + 16;
        let xr = Real::from_rational(x, w);
        let absx = rational_to_f64(x).abs();
        let mut power = xr.clone();
        let mut acc = Real::zero(w);
        let mut n = 1u64;
        loop {
            if power.is_zero() {
                break;
            }
            let term = power.div_int(num_traits::pow(BigInt::from(n), k as usize));
            if term.is_zero() {
                break;
            }
            acc += &term;
            n += 1;
            if n > max_terms {
                let best = NumericalResult::new(acc.with_bits(bits), power.to_f64().abs() / (1.0 - absx));
                return Err(Error::PrecisionUnreachable {
                    reason: format!("Li_{k}({x}) needs more than {max_terms} terms"),
                    best_effort: Box::new(best),
                });
            }
            power = &power * &xr;
        }
        // first omitted term bounded by |x|^n, doubled
        let omitted = absx.powi(n as i32) * 2.0 / (1.0 - absx);
        Ok(NumericalResult::new(acc.with_bits(bits), omitted + Real::ulp(w) * (2 * n + 4) as f64 + Real::ulp(bits)))
    })
}

pub fn polylog_half(k: i64, ctx: &PrecisionContext) -> Result<NumericalResult> {
    if k < 1 {
        return Err(Error::Domain(format!("Li_{k}(1/2) needs k >= 1")));
    }
    polylog_value(k as u32, &rat(1, 2), ctx)
}

/// `sum_{k>N} k^{-p}` from the Euler-Maclaurin expansion at `N` alone.
pub fn hurwitz_tail(p: i64, n: u64, ctx: &PrecisionContext) -> Result<NumericalResult> {
    if p < 2 || n < 1 {
        return Err(Error::Domain(format!("hurwitz_tail needs p >= 2 and N >= 1 (got {p}, {n})")));
    }
    asymptotic::plain_tail_at(p as u32, &int(n as i64), ctx.bits())
}

/// `zeta(-n)` for `n >= 0` as an exact rational.
pub fn zeta_nonpositive(n: u32) -> Rational {
    if n == 0 {
        return rat(-1, 2);
    }
    -bernoulli(n as usize + 1) / int(n as i64 + 1)
}

/// `Li_s(x)` for `x` in `[-1/2, 1]`, given `ln x` for `x > 0` (used where
/// `x` approaches 1 and a direct series is hopeless).
pub fn polylog_real(s: u32, x: &Real, ln_x: Option<&Real>, ctx: &PrecisionContext) -> Result<NumericalResult> {
    let bits = x.bits();
    let xf = x.to_f64();
    if xf <= 0.5 {
        if xf < -0.5 - 1e-12 {
            return Err(Error::Domain("polylog_real supports x >= -1/2".into()));
        }
        let mut power = x.clone();
        let mut acc = Real::zero(bits);
        let mut n = 1u64;
        while !power.is_zero() {
            acc += &power.div_int(num_traits::pow(BigInt::from(n), s as usize));
            power = &power * x;
            n += 1;
        }
        return Ok(NumericalResult::new(acc, Real::ulp(bits) * (3 * n + 4) as f64));
    }
    // Li_s(e^mu) = mu^(s-1)/(s-1)! [H_{s-1} - ln(-mu)] + sum_{k != s-1} zeta(s-k) mu^k / k!
    let mu = match ln_x {
        Some(l) => NumericalResult::exact(l.clone()),
        None => ln_real(x),
    };
    if mu.value.is_zero() {
        return zeta_at(s, bits, ctx);
    }
    let mu_v = &mu.value;
    let mut acc = Real::zero(bits);
    let mut err = 0.0;
    let mut power = Real::one(bits); // mu^k / k!
    let mut k = 0u32;
    loop {
        if k > 0 {
            power = (&power * mu_v).div_int(k);
        }
        if k + 1 == s {
            let harmonic: Rational = (1..s).map(|j| Rational::new(BigInt::one(), BigInt::from(j))).sum();
            let log_neg_mu = ln_real(&(-mu_v));
            let bracket = &Real::from_rational(&harmonic, bits) - &log_neg_mu.value;
            acc += &(&power * &bracket);
            err += log_neg_mu.abs_error_bound * power.to_f64().abs();
        } else if k + 1 < s {
            let z = zeta_at(s - k, bits, ctx)?;
            acc += &(&power * &z.value);
            err += z.abs_error_bound * power.to_f64().abs();
        } else {
            let z = zeta_nonpositive(k - s);
            let term = power.mul_rational(&z);
            // zeta vanishes at negative even integers; stop on a genuine zero term
            if term.is_zero() && !z.is_zero() && k > s + 4 {
                break;
            }
            acc += &term;
        }
        k += 1;
        if k > 4 * bits {
            break;
        }
    }
    err += mu.abs_error_bound * 4.0 + Real::ulp(bits) * (4 * k + 8) as f64;
    Ok(NumericalResult::new(acc, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx40() -> PrecisionContext {
        PrecisionContext::new(40, 10, 1_000_000).unwrap()
    }

    #[test]
    fn rejects_small_contexts() {
        assert!(PrecisionContext::new(5, 10, 1000).is_err());
        assert!(PrecisionContext::new(30, 10, 10).is_err());
    }

    #[test]
    fn pi_two_ways() {
        // Euler's atan formula as an independent route
        let ctx = ctx40();
        let bits = ctx.bits() + 16;
        let (a, _) = atan_inv(7, bits);
        let three_over_79 = {
            // atan(3/79) = sum (-1)^i (3/79)^(2i+1)/(2i+1)
            let t = Real::from_rational(&rat(3, 79), bits);
            let t2 = &t * &t;
            let mut power = t.clone();
            let mut acc = Real::zero(bits);
            let mut i = 0u64;
            while !power.is_zero() {
                let term = power.div_int(2 * i + 1);
                if i.is_multiple_of(2) { acc += &term } else { acc -= &term }
                power = &power * &t2;
                i += 1;
            }
            acc
        };
        let other = a.mul_int(20) + three_over_79.mul_int(8);
        let pi = pi_value(&ctx);
        assert_eq!(pi.value.to_decimal(45), other.with_bits(ctx.bits()).to_decimal(45));
        assert!(pi.value.to_decimal(20).starts_with("3.14159265358979323846"));
        assert!(pi.certified_digits() >= 40);
    }

    #[test]
    fn ln2_matches_accelerated_alternating_series() {
        // Cohen-Villegas-Zagier acceleration of sum (-1)^(k) / (k+1)
        let ctx = ctx40();
        let n = 70u32;
        let bits = ctx.bits() + 64;
        let sqrt8 = Real::from_int(8, bits).sqrt();
        let d0 = {
            let base = &Real::from_int(3, bits) + &sqrt8;
            base.powi(n)
        };
        let d = (&d0 + &Real::one(bits).div(&d0)).div_int(2);
        let mut b = Real::from_int(-1, bits);
        let mut c = -&d;
        let mut s = Real::zero(bits);
        for k in 0..n {
            c = &b - &c;
            s += &c.div_int(k + 1);
            let num = BigInt::from(2 * (n + k) as i64) * BigInt::from(k as i64 - n as i64);
            let den = BigInt::from(k + 1) * BigInt::from(2 * k + 1);
            b = b.mul_int(num).div_int(den);
        }
        let oracle = s.div(&d);
        let ln2 = ln2_value(&ctx);
        assert_eq!(ln2.value.to_decimal(40), oracle.with_bits(ctx.bits()).to_decimal(40));
        assert!(ln2.value.to_decimal(19).starts_with("0.6931471805599453094"));
    }

    #[test]
    fn gamma_from_two_cutoffs() {
        let ctx = ctx40();
        let g = gamma_value(&ctx);
        assert!(g.value.to_decimal(19).starts_with("0.5772156649015328606"));
        // independent cutoff: H_500 - ln 500 - remainder
        let bits = ctx.bits();
        let head = power_partial_sum(1, 500, &Rational::zero(), bits);
        let rem = asymptotic::harmonic_remainder_at(&int(500), bits).unwrap();
        let other = head.sub(&rem);
        assert!((&g.value - &other.value).to_f64().abs() < 1e-45);
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let ctx = ctx40();
        let z2 = zeta_value(2, &ctx).unwrap();
        let pi = pi_value(&ctx);
        let oracle = (&pi.value * &pi.value).div_int(6);
        assert!((&z2.value - &oracle).to_f64().abs() < 1e-45);
        assert!(z2.value.to_decimal(27).starts_with("1.644934066848226436472415167"));
        let z4 = zeta_value(4, &ctx).unwrap();
        let oracle4 = pi.value.powi(4).div_int(90);
        assert!((&z4.value - &oracle4).to_f64().abs() < 1e-45);
        assert!(zeta_value(1, &ctx).is_err());
    }

    #[test]
    fn zetabar_values() {
        let ctx = ctx40();
        assert_eq!(zetabar_value(1, &ctx).unwrap().value, ln2_value(&ctx).value);
        let z3 = zeta_value(3, &ctx).unwrap();
        let zb3 = zetabar_value(3, &ctx).unwrap();
        assert!((&zb3.value - &z3.value.mul_rational(&rat(3, 4))).to_f64().abs() < 1e-45);
        assert!(zetabar_value(0, &ctx).is_err());
    }

    #[test]
    fn zetabar_identity_over_range() {
        let ctx = ctx40();
        for s in 2..=12 {
            let z = zeta_value(s, &ctx).unwrap();
            let zb = zetabar_value(s, &ctx).unwrap();
            let factor = Rational::one() - Rational::new(BigInt::one(), BigInt::one() << (s - 1) as u32);
            let diff = (&zb.value - &z.value.mul_rational(&factor)).to_f64().abs();
            assert!(diff <= zb.abs_error_bound + z.abs_error_bound + 1e-50);
        }
    }

    #[test]
    fn polylog_half_values() {
        let ctx = ctx40();
        let li1 = polylog_half(1, &ctx).unwrap();
        assert!((&li1.value - &ln2_value(&ctx).value).to_f64().abs() < 1e-45);
        let li2 = polylog_half(2, &ctx).unwrap();
        let z2 = zeta_value(2, &ctx).unwrap();
        let l = ln2_value(&ctx);
        let oracle = (&z2.value - &(&l.value * &l.value)).div_int(2);
        assert!((&li2.value - &oracle).to_f64().abs() < 1e-45);
        let li4 = polylog_half(4, &ctx).unwrap();
        assert!(li4.value.to_decimal(19).starts_with("0.5174790616738993863"));
    }

    #[test]
    fn hurwitz_tail_against_exact_partial_sums() {
        let ctx = ctx40();
        for p in 2..=8i64 {
            let z = zeta_value(p, &ctx).unwrap();
            for n in [1u64, 10, 100] {
                let tail = hurwitz_tail(p, n, &ctx).unwrap();
                let exact = crate::sums::partial_zeta(n, p as u32).unwrap();
                let head = Real::from_rational(&exact, ctx.bits());
                let diff = (&(&head + &tail.value) - &z.value).to_f64().abs();
                assert!(diff <= tail.abs_error_bound + z.abs_error_bound + 1e-50, "p={p} N={n}: {diff} {}", tail.abs_error_bound);
            }
        }
        let t = hurwitz_tail(3, 10, &ctx).unwrap();
        assert!(t.abs_error_bound < 1e-20);
    }

    #[test]
    fn precision_monotonicity() {
        let lo = PrecisionContext::new(20, 10, 1_000_000).unwrap();
        let hi = ctx40();
        for s in [2i64, 3, 5] {
            let a = zeta_value(s, &lo).unwrap();
            let b = zeta_value(s, &hi).unwrap();
            assert!((&a.value - &b.value).to_f64().abs() <= a.abs_error_bound + b.abs_error_bound);
        }
    }

    #[test]
    fn exp_and_ln_are_inverse() {
        let bits = 200;
        let x = Real::from_rational(&rat(7, 3), bits);
        let e = exp_real(&x);
        let back = ln_real(&e.value);
        assert!((&back.value - &x).to_f64().abs() < 1e-50);
        let e1 = exp_real(&Real::one(bits));
        assert!(e1.value.to_decimal(30).starts_with("2.71828182845904523536028747135"));
    }

    #[test]
    fn polylog_near_one() {
        let ctx = ctx40();
        let bits = ctx.bits();
        let x = Real::from_rational(&rat(3, 4), bits);
        for s in [2, 3, 4] {
            let via_log = polylog_real(s, &x, None, &ctx).unwrap();
            let direct = polylog_value(s, &rat(3, 4), &ctx).unwrap();
            assert!((&via_log.value - &direct.value).to_f64().abs() < 1e-40, "s={s}");
        }
        let one = polylog_real(2, &Real::one(bits), Some(&Real::zero(bits)), &ctx).unwrap();
        assert_eq!(one.value, zeta_value(2, &ctx).unwrap().value);
    }
}
