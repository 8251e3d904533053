//! Tanh-sinh quadrature on `(0, 1)` in fixed point, and the polylogarithm
//! kernel integrals checked with it.
//!
//! Nodes are parametrized by `u = (pi/2) sinh t`, `q = exp(-2u)`,
//! `x = 1/(1+q)`, so that `1 - x`, `ln x` and `ln(1 - x)` all come out
//! without cancellation at either endpoint.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, int, Rational};
use crate::numerics::{exp_real, ln_rational, ln_real, pi_at, polylog_real, polylog_value, zeta_value, NumericalResult, PrecisionContext};
use crate::real::Real;
use crate::sums::{partial_power_exact, partial_zeta};

/// One abscissa with everything an integrand near an endpoint may need.
#[derive(Clone, Debug)]
pub struct Node {
    pub x: Real,
    pub one_minus_x: Real,
    pub ln_x: Real,
    pub ln_one_minus_x: Real,
    weight: Real,
}

const FIRST_STEP: u32 = 3; // h = 1/8 at level 0
const MAX_LEVEL: u32 = 9;

type NodeCache = Mutex<HashMap<(u32, u32), Arc<Vec<Node>>>>;

fn node_cache() -> &'static NodeCache {
    static CACHE: OnceLock<NodeCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Nodes new at `level`: `t = j h` with `h = 2^-(3+level)` and `j` odd
/// (every `j` at level 0), mirrored to `-t`.
fn level_nodes(bits: u32, level: u32) -> Arc<Vec<Node>> {
    if let Some(v) = node_cache().lock().unwrap().get(&(bits, level)) {
        return v.clone();
    }
    let nodes = Arc::new(compute_level(bits, level));
    node_cache().lock().unwrap().insert((bits, level), nodes.clone());
    nodes
}

fn compute_level(bits: u32, level: u32) -> Vec<Node> {
    let half_pi = pi_at(bits).value.shr(1);
    let one = Real::one(bits);
    let cutoff = Real::ulp(bits + 24);
    let shift = FIRST_STEP + level;
    let (start, step) = if level == 0 { (0u64, 1u64) } else { (1, 2) };
    let mut out = Vec::new();
    let mut j = start;
    loop {
        let t = Real::from_int(j, bits).shr(shift);
        let et = exp_real(&t).value;
        let eti = et.recip();
        let sinh = (&et - &eti).shr(1);
        let cosh = (&et + &eti).shr(1);
        let u = &half_pi * &sinh;
        let q = exp_real(&-(u.shl(1))).value;
        let one_plus_q = &one + &q;
        let x = one_plus_q.recip();
        let y = &one - &x;
        let l1q = ln_real(&one_plus_q).value;
        let ln_x = -&l1q;
        let ln_y = -(&u.shl(1) + &l1q);
        // dx/dt = pi cosh(t) x (1-x)
        let weight = &(&(&half_pi.shl(1) * &cosh) * &x) * &y;
        if weight.to_f64() < cutoff || y.is_zero() {
            break;
        }
        if j == 0 {
            out.push(Node { x, one_minus_x: y, ln_x, ln_one_minus_x: ln_y, weight });
        } else {
            out.push(Node {
                x: x.clone(),
                one_minus_x: y.clone(),
                ln_x: ln_x.clone(),
                ln_one_minus_x: ln_y.clone(),
                weight: weight.clone(),
            });
            out.push(Node { x: y, one_minus_x: x, ln_x: ln_y, ln_one_minus_x: ln_x, weight });
        }
        j += step;
    }
    out
}

/// `int_0^1 f` to absolute tolerance `tol`, refining the step until two
/// successive levels agree. The bound is the last difference, which
/// overestimates the error of a double-exponential rule once it converges.
pub fn integrate_unit(bits: u32, tol: f64, f: impl Fn(&Node) -> Result<Real>) -> Result<NumericalResult> {
    let w = bits + 32;
    let mut sum = Real::zero(w);
    let mut prev: Option<Real> = None;
    let mut count = 0u64;
    for level in 0..=MAX_LEVEL {
        for node in level_nodes(w, level).iter() {
            sum += &(&f(node)? * &node.weight);
            count += 1;
        }
        let estimate = sum.shr(FIRST_STEP + level);
        if let Some(p) = &prev {
            let diff = (&estimate - p).to_f64().abs();
            if diff < tol && level >= 2 {
                let err = diff + Real::ulp(w) * (count * 4) as f64 + Real::ulp(bits);
                return Ok(NumericalResult::new(estimate.with_bits(bits), err));
            }
        }
        prev = Some(estimate);
    }
    Err(Error::Quadrature(format!("no convergence to {tol:.1e} after {MAX_LEVEL} refinements")))
}

fn residual(a: &NumericalResult, b: &NumericalResult) -> NumericalResult {
    let d = a.sub(b);
    NumericalResult::new(d.value.abs(), d.abs_error_bound)
}

fn rational_real(r: &Rational, bits: u32) -> NumericalResult {
    NumericalResult::new(Real::from_rational(r, bits), Real::ulp(bits))
}

fn quad_bits(ctx: &PrecisionContext) -> u32 {
    ctx.bits()
}

/// `int_0^x t^(n-1) Li_p(t) dt` by quadrature (substituting `t = x s`).
pub fn kernel_integral(n: u32, p: u32, x: &Rational, ctx: &PrecisionContext) -> Result<NumericalResult> {
    check_kernel_args(n, p, x)?;
    let bits = quad_bits(ctx);
    let xr = Real::from_rational(x, bits + 32);
    let q = integrate_unit(bits, ctx.target_tolerance(), |node| {
        let t = &xr * &node.x;
        let li = polylog_real(p, &t, None, ctx)?;
        Ok(&node.x.powi(n - 1) * &li.value)
    })?;
    let xn = num_traits::pow(x.clone(), n as usize);
    Ok(q.scale(&xn))
}

/// Closed form of the kernel integral obtained by integrating by parts.
pub fn kernel_integral_closed(n: u32, p: u32, x: &Rational, ctx: &PrecisionContext) -> Result<NumericalResult> {
    check_kernel_args(n, p, x)?;
    let bits = ctx.bits();
    let xn = num_traits::pow(x.clone(), n as usize);
    let mut acc = NumericalResult::zero(bits);
    for i in 1..p {
        let li = polylog_value(p + 1 - i, x, ctx)?;
        let sign = if i % 2 == 1 { 1 } else { -1 };
        let c = &xn * int(sign) / num_traits::pow(int(n as i64), i as usize);
        acc = acc.add(&li.scale(&c));
    }
    let sign_p = if p.is_multiple_of(2) { int(1) } else { int(-1) };
    let inv_np = num_traits::pow(int(n as i64), p as usize).recip();
    let ln1mx = ln_rational(&(Rational::one() - x), bits);
    acc = acc.add(&ln1mx.scale(&(&sign_p * &inv_np * (&xn - Rational::one()))));
    let partial = partial_power_exact(n as u64, 1, x)?;
    acc = acc.sub(&rational_real(&(&sign_p * &inv_np * partial), bits));
    Ok(acc)
}

fn check_kernel_args(n: u32, p: u32, x: &Rational) -> Result<()> {
    if n == 0 || p < 2 {
        return Err(Error::Domain("kernel integral needs n >= 1 and p >= 2".into()));
    }
    if *x <= int(-1) || *x >= int(1) {
        return Err(Error::Domain("kernel integral needs x in (-1, 1)".into()));
    }
    if *x < Rational::new((-1).into(), 2.into()) {
        return Err(Error::Domain("kernel integral quadrature supports x >= -1/2".into()));
    }
    Ok(())
}

/// `|quadrature - closed form|` for the kernel `int_0^x t^(n-1) Li_p(t) dt`.
pub fn kernel_integral_check(n: u32, p: u32, x: &Rational, ctx: &PrecisionContext) -> Result<NumericalResult> {
    if x.is_zero() {
        return Ok(NumericalResult::zero(ctx.bits()));
    }
    Ok(residual(&kernel_integral(n, p, x, ctx)?, &kernel_integral_closed(n, p, x, ctx)?))
}

/// `int_0^1 x^(n-1) ln^m(x) ln(1-x) dx` by quadrature.
pub fn log_moment(n: u32, m: u32, ctx: &PrecisionContext) -> Result<NumericalResult> {
    if n == 0 {
        return Err(Error::Domain("log moment needs n >= 1".into()));
    }
    integrate_unit(ctx.bits(), ctx.target_tolerance(), |node| {
        Ok(&(&node.x.powi(n - 1) * &node.ln_x.powi(m)) * &node.ln_one_minus_x)
    })
}

/// `(-1)^(m+1) m! { H_n/n^(m+1) - sum_{j<=m} (zeta(j+1) - zeta_n(j+1))/n^(m+1-j) }`.
pub fn log_moment_closed(n: u32, m: u32, ctx: &PrecisionContext) -> Result<NumericalResult> {
    let bits = ctx.bits();
    let nn = int(n as i64);
    let h = partial_zeta(n as u64, 1)?;
    let mut acc = rational_real(&(h / num_traits::pow(nn.clone(), m as usize + 1)), bits);
    for j in 1..=m {
        let tail = tail_of_zeta(j + 1, n, ctx)?;
        acc = acc.sub(&tail.scale(&num_traits::pow(nn.clone(), (m + 1 - j) as usize).recip()));
    }
    let sign = if m % 2 == 1 { 1 } else { -1 };
    Ok(acc.scale(&(int(sign) * Rational::from_integer(factorial(m)))))
}

/// `zeta(s) - zeta_n(s)`.
fn tail_of_zeta(s: u32, n: u32, ctx: &PrecisionContext) -> Result<NumericalResult> {
    let z = zeta_value(s as i64, ctx)?;
    Ok(z.sub(&rational_real(&partial_zeta(n as u64, s)?, ctx.bits())))
}

pub fn log_moment_check(n: u32, m: u32, ctx: &PrecisionContext) -> Result<NumericalResult> {
    Ok(residual(&log_moment(n, m, ctx)?, &log_moment_closed(n, m, ctx)?))
}

/// `int_0^1 x^(n-1) ln^m(x) Li_p(x) dx` by quadrature.
pub fn log_kernel(n: u32, m: u32, p: u32, ctx: &PrecisionContext) -> Result<NumericalResult> {
    if n == 0 || p < 2 {
        return Err(Error::Domain("log kernel needs n >= 1 and p >= 2".into()));
    }
    integrate_unit(ctx.bits(), ctx.target_tolerance(), |node| {
        let li = polylog_real(p, &node.x, Some(&node.ln_x), ctx)?;
        Ok(&(&node.x.powi(n - 1) * &node.ln_x.powi(m)) * &li.value)
    })
}

/// Residual of the recurrence expressing the `m`-th log kernel through the
/// `(m-1)`-th ones, every integral taken by quadrature.
pub fn log_kernel_recurrence_check(n: u32, m: u32, p: u32, ctx: &PrecisionContext) -> Result<NumericalResult> {
    if m == 0 {
        return Err(Error::Domain("recurrence needs m >= 1".into()));
    }
    let bits = ctx.bits();
    let nn = int(n as i64);
    let mut rhs = NumericalResult::zero(bits);
    for i in 1..p {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let c = int(sign * m as i64) / num_traits::pow(nn.clone(), i as usize);
        rhs = rhs.add(&log_kernel(n, m - 1, p + 1 - i, ctx)?.scale(&c));
    }
    let mf = Rational::from_integer(factorial(m));
    let sign = if (m + p - 1).is_multiple_of(2) { int(1) } else { int(-1) };
    let inv_np = num_traits::pow(nn.clone(), p as usize).recip();
    let zn = partial_zeta(n as u64, m + 1)?;
    let h = partial_zeta(n as u64, 1)?;
    let mut bracket = rational_real(&(h / num_traits::pow(nn.clone(), m as usize) + zn), bits);
    for j in 1..m {
        let tail = tail_of_zeta(j + 1, n, ctx)?;
        bracket = bracket.sub(&tail.scale(&num_traits::pow(nn.clone(), (m - j) as usize).recip()));
    }
    bracket = bracket.sub(&zeta_value(m as i64 + 1, ctx)?);
    rhs = rhs.add(&bracket.scale(&(&mf * &sign * &inv_np)));
    Ok(residual(&log_kernel(n, m, p, ctx)?, &rhs))
}

/// Closed form of the first log kernel (`m = 1`).
pub fn log_kernel_first_closed(n: u32, p: u32, ctx: &PrecisionContext) -> Result<NumericalResult> {
    let bits = ctx.bits();
    let nn = int(n as i64);
    let mut acc = NumericalResult::zero(bits);
    for i in 1..p {
        for j in 1..=(p - i) {
            let sign = if (i + j) % 2 == 0 { -1 } else { 1 };
            let z = zeta_value((p + 2 - i - j) as i64, ctx)?;
            acc = acc.add(&z.scale(&(int(sign) / num_traits::pow(nn.clone(), (i + j) as usize))));
        }
    }
    let sign_p = if p.is_multiple_of(2) { int(1) } else { int(-1) };
    let h = partial_zeta(n as u64, 1)?;
    let c = &sign_p * int(p as i64) * h / num_traits::pow(nn.clone(), p as usize + 1);
    acc = acc.add(&rational_real(&c, bits));
    let t2 = tail_of_zeta(2, n, ctx)?;
    acc = acc.sub(&t2.scale(&(&sign_p / num_traits::pow(nn, p as usize))));
    Ok(acc)
}

pub fn log_kernel_first_check(n: u32, p: u32, ctx: &PrecisionContext) -> Result<NumericalResult> {
    Ok(residual(&log_kernel(n, 1, p, ctx)?, &log_kernel_first_closed(n, p, ctx)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(30, 10, 1_000_000).unwrap()
    }

    #[test]
    fn polynomial_and_log_integrals() {
        let c = ctx();
        let r = integrate_unit(c.bits(), 1e-35, |n| Ok(n.x.powi(3))).unwrap();
        assert!((r.value.to_f64() - 0.25).abs() < 1e-15);
        assert!(r.abs_error_bound < 1e-35);
        // int_0^1 ln x ln(1-x) dx = 2 - zeta(2)
        let r = log_moment(1, 1, &c).unwrap();
        let expect = 2.0 - std::f64::consts::PI.powi(2) / 6.0;
        assert!((r.value.to_f64() - expect).abs() < 1e-15);
    }

    #[test]
    fn elementary_log_moment_matches_closed_form() {
        let c = ctx();
        for n in [1, 2, 5] {
            for m in [1, 2] {
                let r = log_moment_check(n, m, &c).unwrap();
                assert!(r.value.to_f64() + r.abs_error_bound < 1e-25, "n={n} m={m}: {r}");
            }
        }
    }

    #[test]
    fn kernel_against_integration_by_parts() {
        let c = ctx();
        for x in [rat(1, 2), rat(-1, 2)] {
            let r = kernel_integral_check(1, 2, &x, &c).unwrap();
            assert!(r.value.to_f64() + r.abs_error_bound < 1e-25, "x={x}: {r}");
        }
        let tiny = kernel_integral_closed(2, 2, &rat(1, 1_000_000), &c).unwrap();
        assert!(tiny.value.to_f64().abs() < 1e-18);
        assert!(kernel_integral_check(1, 1, &rat(1, 2), &c).is_err());
    }

    #[test]
    fn log_kernels() {
        let c = ctx();
        let r = log_kernel_recurrence_check(2, 2, 3, &c).unwrap();
        assert!(r.value.to_f64() + r.abs_error_bound < 1e-25, "{r}");
        let r = log_kernel_first_check(5, 2, &c).unwrap();
        assert!(r.value.to_f64() + r.abs_error_bound < 1e-25, "{r}");
    }
}
