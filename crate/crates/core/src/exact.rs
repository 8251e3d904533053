//! Exact rational arithmetic, Bernoulli numbers and the even zeta values.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::symbolic::{Atom, Expression};

/// Exact arbitrary-size rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Rising factorial `p (p+1) ... (p+r-1)`.
pub fn rising(p: u32, r: u32) -> BigInt {
    (0..r).fold(BigInt::one(), |acc, i| acc * (p + i))
}

/// Memoized table of Bernoulli numbers `B_0, B_1, ...` with `B_1 = -1/2`.
pub struct BernoulliCache {
    table: RwLock<Vec<Rational>>,
}

impl BernoulliCache {
    fn new() -> Self {
        BernoulliCache {
            table: RwLock::new(vec![Rational::one()]),
        }
    }

    pub fn get(&self, n: usize) -> Rational {
        if let Some(b) = self.table.read().unwrap().get(n) {
            return b.clone();
        }
        let mut table = self.table.write().unwrap();
        // sum_{j=0}^{k} C(k+1, j) B_j = 0
        while table.len() <= n {
            let k = table.len();
            if k > 1 && k % 2 == 1 {
                table.push(Rational::zero());
                continue;
            }
            let mut acc = Rational::zero();
            for (j, b) in table.iter().enumerate() {
                if !b.is_zero() {
                    acc += Rational::from_integer(binomial(k as u32 + 1, j as u32)) * b;
                }
            }
            table.push(-acc / Rational::from_integer(BigInt::from(k + 1)));
        }
        table[n].clone()
    }
}

fn bernoulli_cache() -> &'static BernoulliCache {
    static CACHE: OnceLock<BernoulliCache> = OnceLock::new();
    CACHE.get_or_init(BernoulliCache::new)
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_cache().get(n)
}

/// `E_r(0)`, the Euler polynomials at zero: `1, -1/2, 0, 1/4, 0, -1/2, ...`.
pub fn euler_poly_at_zero(r: usize) -> Rational {
    if r == 0 {
        return Rational::one();
    }
    let b = bernoulli(r + 1);
    let pow = (BigInt::one() << (r + 1)) - 1;
    -Rational::from_integer(pow * 2) * b / Rational::from_integer(BigInt::from(r + 1))
}

/// Rational `c` with `zeta(2m) = c * pi^(2m)`.
pub fn zeta_even_coefficient(two_m: u32) -> Result<Rational> {
    if two_m == 0 || two_m % 2 == 1 {
        return Err(Error::Domain(format!(
            "even zeta closed form needs a positive even argument, got {two_m}"
        )));
    }
    let m = two_m / 2;
    let b = bernoulli(two_m as usize);
    let sign = if m % 2 == 1 { 1 } else { -1 };
    let two_pow = Rational::from_integer(BigInt::one() << two_m);
    Ok(int(sign) * b * two_pow / Rational::from_integer(factorial(two_m) * 2))
}

/// `zeta(2m)` as a rational multiple of `pi^(2m)`.
pub fn zeta_even_closed(two_m: u32) -> Result<Expression> {
    let c = zeta_even_coefficient(two_m)?;
    Ok(Expression::atom_pow(Atom::Pi, two_m).scale(&c))
}

/// Product `zeta(2a) zeta(2b) ...` of even zeta values as `c * zeta(2a + 2b + ...)`.
pub fn even_zeta_product_ratio(args: &[u32]) -> Result<Rational> {
    let total: u32 = args.iter().sum();
    let mut c = Rational::one();
    for &a in args {
        c *= zeta_even_coefficient(a)?;
    }
    Ok(c / zeta_even_coefficient(total)?)
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}
