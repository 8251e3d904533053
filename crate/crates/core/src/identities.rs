//! Generators for the reduction identities, as exact expressions over the
//! zeta-monomial basis, plus their numerical residuals.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, rat, Rational};
use crate::numerics::{NumericalResult, PrecisionContext};
use crate::parse::parse_identity;
use crate::sums::{evaluate_series, hurwitz_thm21_series, Const, Factor, Outer, Series, SeriesTerm, SumSignature};
use crate::symbolic::Expression;

/// The two sides of an identity.
#[derive(Clone, Debug)]
pub enum Form {
    Symbolic { lhs: Expression, rhs: Expression },
    /// A left side that only exists as a convergent combined series.
    Numeric { lhs: Series, rhs: Expression },
}

#[derive(Clone, Debug)]
pub struct Identity {
    pub generator: &'static str,
    pub params: Vec<(&'static str, String)>,
    /// Short human description of the family.
    pub description: &'static str,
    pub form: Form,
}

impl Identity {
    fn symbolic(generator: &'static str, params: Vec<(&'static str, String)>, description: &'static str, lhs: Expression, rhs: Expression) -> Self {
        Identity { generator, params, description, form: Form::Symbolic { lhs, rhs } }
    }

    /// `generator(k=v,...)`
    pub fn id(&self) -> String {
        let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", self.generator, ps.join(","))
    }

    pub fn lhs(&self) -> Option<&Expression> {
        match &self.form {
            Form::Symbolic { lhs, .. } => Some(lhs),
            Form::Numeric { .. } => None,
        }
    }

    pub fn rhs(&self) -> &Expression {
        match &self.form {
            Form::Symbolic { rhs, .. } | Form::Numeric { rhs, .. } => rhs,
        }
    }

    /// `lhs - rhs` when both sides are symbolic.
    pub fn difference(&self) -> Option<Expression> {
        self.lhs().map(|l| l - self.rhs())
    }

    /// `lhs - rhs` evaluated numerically; the bound covers both sides.
    pub fn residual(&self, ctx: &PrecisionContext) -> Result<NumericalResult> {
        match &self.form {
            Form::Symbolic { lhs, rhs } => {
                let d = lhs - rhs;
                if d.canonical().is_zero() {
                    return Ok(NumericalResult::zero(ctx.bits()));
                }
                d.eval(ctx)
            }
            Form::Numeric { lhs, rhs } => Ok(evaluate_series(lhs, ctx)?.sub(&rhs.eval(ctx)?)),
        }
    }

    /// Every monomial on both sides must carry the same weight; returns it.
    pub fn check_weight(&self) -> Result<Option<u32>> {
        let mut ws = self.rhs().weights();
        if let Some(l) = self.lhs() {
            ws.extend(l.weights());
        }
        match ws.len() {
            0 => Ok(None),
            1 => Ok(ws.into_iter().next()),
            _ => Err(Error::Domain(format!("{}: mixed weights {:?}", self.id(), ws))),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            Form::Symbolic { lhs, rhs } => write!(f, "{}: {} == {}", self.id(), lhs, rhs),
            Form::Numeric { rhs, .. } => write!(f, "{}: <series> == {}", self.id(), rhs),
        }
    }
}

fn sign(e: u32) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn z(k: u32) -> Expression {
    Expression::zeta(k)
}

fn zb(k: u32) -> Expression {
    Expression::zetabar(k)
}

fn ln2() -> Expression {
    Expression::ln2()
}

/// `S(p; q)` with optional bars on either exponent.
fn lin(p: u32, pbar: bool, q: u32, qbar: bool) -> Result<Expression> {
    Ok(Expression::sum(SumSignature::new(vec![(p, pbar)], q, qbar)?))
}

fn s(p: u32, q: u32) -> Result<Expression> {
    lin(p, false, q, false)
}

fn quad(a: (u32, bool), b: (u32, bool), q: u32, qbar: bool) -> Result<Expression> {
    Ok(Expression::sum(SumSignature::new(vec![a, b], q, qbar)?))
}

fn s2(a: u32, b: u32, q: u32) -> Result<Expression> {
    quad((a, false), (b, false), q, false)
}

fn need(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(what.to_string()))
    }
}

fn pm(p: u32, m: u32) -> Vec<(&'static str, String)> {
    vec![("p", p.to_string()), ("m", m.to_string())]
}

/// `sum_{i=2}^{a-1} (-1)^(i-1) zeta(a+1-i) S(b;i)`
fn zeta_weighted(a: u32, b: u32) -> Result<Expression> {
    let mut out = Expression::zero();
    for i in 2..a {
        out = &out + &(&z(a + 1 - i) * &s(b, i)?).scale_int(sign(i - 1));
    }
    Ok(out)
}

/// `sum_{i=1}^{a-1} (-1)^(i-1) zetabar(a+1-i) S(b;ibar)`
fn zetabar_weighted(a: u32, b: u32) -> Result<Expression> {
    let mut out = Expression::zero();
    for i in 1..a {
        out = &out + &(&zb(a + 1 - i) * &lin(b, false, i, true)?).scale_int(sign(i - 1));
    }
    Ok(out)
}

/// `sum_{i=1}^{a-1} sum_{j=1}^{a-i} (-1)^(i+j) zeta(a+2-i-j) S(b;i+j)`
fn double_weighted(a: u32, b: u32) -> Result<Expression> {
    let mut out = Expression::zero();
    for i in 1..a {
        for j in 1..=a - i {
            out = &out + &(&z(a + 2 - i - j) * &s(b, i + j)?).scale_int(sign(i + j));
        }
    }
    Ok(out)
}

/// `sum_{l=1}^{a-1} sum_{i=1}^{a-l} sum_{j=1}^{a+1-i-l} (-1)^(i+j+l) zeta(a+3-i-j-l) S(b;i+j+l)`
fn triple_weighted(a: u32, b: u32) -> Result<Expression> {
    let mut out = Expression::zero();
    for l in 1..a {
        for i in 1..=a - l {
            for j in 1..=a + 1 - i - l {
                out = &out + &(&z(a + 3 - i - j - l) * &s(b, i + j + l)?).scale_int(sign(i + j + l));
            }
        }
    }
    Ok(out)
}

/// `S(1;k)` in zeta values.
pub fn gen_euler_linear(k: u32) -> Result<Identity> {
    need(k >= 2, "euler_linear needs k >= 2")?;
    let mut rhs = z(k + 1).scale_int(k as i64 + 2);
    for i in 1..k.saturating_sub(1) {
        rhs = &rhs - &(&z(k - i) * &z(i + 1));
    }
    let rhs = rhs.scale(&rat(1, 2));
    Ok(Identity::symbolic("euler_linear", vec![("k", k.to_string())], "harmonic linear sum in zeta values", s(1, k)?, rhs))
}

/// Combined series `sum (zeta(m) zeta_n(p) - zeta(p) zeta_n(m))/n` against
/// harmonic linear sums.
pub fn gen_zeta_antisymmetric(m: u32, p: u32) -> Result<Identity> {
    need(m >= 2 && p >= 2, "zeta_antisymmetric needs m, p >= 2")?;
    let one = Rational::one();
    let mut lhs = Series::default();
    lhs.push(SeriesTerm::new(one.clone(), vec![Const::Zeta(m)], vec![Factor::Zeta(p)], Outer::Plain, 1));
    lhs.push(SeriesTerm::new(-one, vec![Const::Zeta(p)], vec![Factor::Zeta(m)], Outer::Plain, 1));
    let rhs = &(&(&z(p) * &s(1, m)?) - &(&z(m) * &s(1, p)?)) + &(&(&z(m) * &z(p + 1)) - &(&z(p) * &z(m + 1)));
    Ok(Identity {
        generator: "zeta_antisymmetric",
        params: vec![("m", m.to_string()), ("p", p.to_string())],
        description: "antisymmetric zeta-weighted harmonic series",
        form: Form::Numeric { lhs, rhs },
    })
}

/// Same relation with partial sums shifted by `a`; both sides numeric.
pub fn gen_hurwitz(m: u32, p: u32, a: &Rational) -> Result<Identity> {
    Ok(Identity {
        generator: "hurwitz",
        params: vec![("m", m.to_string()), ("p", p.to_string()), ("a", a.to_string())],
        description: "shifted antisymmetric zeta-weighted harmonic series",
        form: Form::Numeric { lhs: hurwitz_thm21_series(m, p, a)?, rhs: Expression::zero() },
    })
}

fn harmonic_pair(p: u32, big: u32, plus: bool) -> Result<(Expression, Expression)> {
    let c = if plus { 1 } else { -1 };
    let lhs = (&s2(1, big, p)? + &s2(1, p, big)?.scale_int(c)).scale_int(sign(p - 1));
    let rhs = &(&z(p) * &s(1, big)?) - &(&z(big) * &s(1, p)?);
    let rhs = &rhs + &(&(&z(p + 1) * &z(big)) - &(&z(p) * &z(big + 1)));
    let rhs = &(&rhs + &zeta_weighted(big, p)?) - &zeta_weighted(p, big)?;
    Ok((lhs, rhs))
}

/// `S(1,P;p) + S(1,p;P)` with `P = p+2m+1`.
pub fn gen_harmonic_pair_odd(p: u32, m: u32) -> Result<Identity> {
    need(p >= 2, "harmonic_pair_odd needs p >= 2")?;
    let (lhs, rhs) = harmonic_pair(p, p + 2 * m + 1, true)?;
    Ok(Identity::symbolic("harmonic_pair_odd", pm(p, m), "harmonic quadratic pair, odd gap", lhs, rhs))
}

/// `S(1,P;p) - S(1,p;P)` with `P = p+2m`.
pub fn gen_harmonic_pair_even(p: u32, m: u32) -> Result<Identity> {
    need(p >= 2, "harmonic_pair_even needs p >= 2")?;
    let (lhs, rhs) = harmonic_pair(p, p + 2 * m, false)?;
    Ok(Identity::symbolic("harmonic_pair_even", pm(p, m), "harmonic quadratic pair, even gap", lhs, rhs))
}

fn alt_harmonic_pair(p: u32, big: u32, plus: bool) -> Result<(Expression, Expression)> {
    let c = if plus { 1 } else { -1 };
    let b1 = (1, true);
    let lhs = (&quad(b1, (big, false), p, false)? + &quad(b1, (p, false), big, false)?.scale_int(c)).scale_int(sign(p));
    let rhs = &zetabar_weighted(big, p)? - &zetabar_weighted(p, big)?;
    let plain = &s(big, p)? + &s(p, big)?.scale_int(c);
    let barred = &lin(big, false, p, true)? + &lin(p, false, big, true)?.scale_int(c);
    let rhs = &rhs + &(&ln2() * &(&plain + &barred)).scale_int(sign(p));
    Ok((lhs, rhs))
}

/// `S(b1,P;p) + S(b1,p;P)` with `P = p+2m+1`.
pub fn gen_alt_harmonic_pair_odd(p: u32, m: u32) -> Result<Identity> {
    need(p >= 2, "alt_harmonic_pair_odd needs p >= 2")?;
    let (lhs, rhs) = alt_harmonic_pair(p, p + 2 * m + 1, true)?;
    Ok(Identity::symbolic("alt_harmonic_pair_odd", pm(p, m), "alternating harmonic quadratic pair, odd gap", lhs, rhs))
}

/// `S(b1,P;p) - S(b1,p;P)` with `P = p+2m`.
pub fn gen_alt_harmonic_pair_even(p: u32, m: u32) -> Result<Identity> {
    need(p >= 2, "alt_harmonic_pair_even needs p >= 2")?;
    let (lhs, rhs) = alt_harmonic_pair(p, p + 2 * m, false)?;
    Ok(Identity::symbolic("alt_harmonic_pair_even", pm(p, m), "alternating harmonic quadratic pair, even gap", lhs, rhs))
}

fn mixed_triple_rhs(p: u32, big: u32) -> Result<Expression> {
    let rhs = &(&lin(p, false, big + 1, true)? + &lin(1, true, p + big, false)?) + &lin(big, false, p + 1, true)?;
    Ok(&(&rhs + &(&ln2() * &(&z(big) * &z(p)))) - &zb(p + big + 1))
}

/// Three sums with one alternating harmonic factor, `P = p+2m+1`.
pub fn gen_mixed_triple(p: u32, m: u32) -> Result<Identity> {
    need(p >= 2, "mixed_triple needs p >= 2")?;
    let big = p + 2 * m + 1;
    let b1 = (1, true);
    let lhs = &(&quad(b1, (big, false), p, false)? + &quad(b1, (p, false), big, false)?) + &quad((p, false), (big, false), 1, true)?;
    Ok(Identity::symbolic("mixed_triple", pm(p, m), "triple of sums with one alternating harmonic factor", lhs, mixed_triple_rhs(p, big)?))
}

/// Fully alternating triple, `P = p+2m+1`.
pub fn gen_alt_triple(p: u32, m: u32) -> Result<Identity> {
    need(p >= 1, "alt_triple needs p >= 1")?;
    let big = p + 2 * m + 1;
    let (b1, bp, bb) = ((1, true), (p, true), (big, true));
    let lhs = &(&quad(b1, bb, p, true)? + &quad(b1, bp, big, true)?) + &quad(bp, bb, 1, true)?;
    let rhs = &(&lin(p, true, big + 1, false)? + &lin(1, true, p + big, false)?) + &lin(big, true, p + 1, false)?;
    let rhs = &(&rhs + &(&ln2() * &(&zb(big) * &zb(p)))) - &zb(p + big + 1);
    Ok(Identity::symbolic("alt_triple", pm(p, m), "fully alternating triple of sums", lhs, rhs))
}

/// `S(p,P;b1)` in linear sums, `P = p+2m+1`.
pub fn gen_alternating_outer(p: u32, m: u32) -> Result<Identity> {
    need(p >= 2, "alternating_outer needs p >= 2")?;
    let big = p + 2 * m + 1;
    let lhs = quad((p, false), (big, false), 1, true)?;
    let mut rhs = mixed_triple_rhs(p, big)?;
    rhs = &rhs + &(&zetabar_weighted(big, p)? - &zetabar_weighted(p, big)?).scale_int(sign(p - 1));
    let plain = &s(big, p)? + &s(p, big)?;
    let barred = &lin(big, false, p, true)? + &lin(p, false, big, true)?;
    rhs = &rhs - &(&ln2() * &(&plain + &barred));
    Ok(Identity::symbolic("alternating_outer", pm(p, m), "quadratic sum with alternating outer weight", lhs, rhs))
}

/// `S(l1,l2;m) + S(l1,m;l2) + S(l2,m;l1)` in linear sums.
pub fn gen_triple_ones(l1: u32, l2: u32, m: u32) -> Result<Identity> {
    need(l1 >= 2 && l2 >= 2 && m >= 2, "triple_ones needs all exponents >= 2")?;
    let lhs = &(&s2(l1, l2, m)? + &s2(l1, m, l2)?) + &s2(l2, m, l1)?;
    let rhs = &(&s(m, l1 + l2)? + &s(l1, m + l2)?) + &s(l2, l1 + m)?;
    let rhs = &(&rhs + &(&(&z(m) * &z(l1)) * &z(l2))) - &z(l1 + l2 + m);
    let params = vec![("l1", l1.to_string()), ("l2", l2.to_string()), ("m", m.to_string())];
    Ok(Identity::symbolic("triple_ones", params, "cyclic triple of quadratic sums", lhs, rhs))
}

/// `S(2,P;p) + S(2,p;P)` with `P = p+2m+1`.
pub fn gen_quadratic2_pair_odd(p: u32, m: u32) -> Result<Identity> {
    need(p >= 2, "quadratic2_pair_odd needs p >= 2")?;
    let big = p + 2 * m + 1;
    let sp = sign(p);
    let lhs = (&s2(2, big, p)? + &s2(2, p, big)?).scale_int(-sp);
    let mut rhs = &double_weighted(big, p)? - &double_weighted(p, big)?;
    rhs = &rhs - &(&z(2) * &(&(&z(p) * &z(big)) + &z(p + big))).scale_int(sp);
    rhs = &rhs + &s2(1, p, big + 1)?.scale_int(sp * big as i64);
    rhs = &rhs + &s2(1, big, p + 1)?.scale_int(sp * p as i64);
    Ok(Identity::symbolic("quadratic2_pair_odd", pm(p, m), "square-harmonic quadratic pair, odd gap", lhs, rhs))
}

/// `S(2,P;p) - S(2,p;P)` with `P = p+2m`.
pub fn gen_quadratic2_pair_even(p: u32, m: u32) -> Result<Identity> {
    need(p >= 2, "quadratic2_pair_even needs p >= 2")?;
    let big = p + 2 * m;
    let sq = sign(p - 1);
    let lhs = (&s2(2, big, p)? - &s2(2, p, big)?).scale_int(sq);
    let mut rhs = &double_weighted(big, p)? - &double_weighted(p, big)?;
    rhs = &rhs - &(&z(2) * &(&s(p, big)? - &s(big, p)?)).scale_int(sq);
    rhs = &rhs + &s2(1, p, big + 1)?.scale_int(sq * big as i64);
    rhs = &rhs - &s2(1, big, p + 1)?.scale_int(sq * p as i64);
    Ok(Identity::symbolic("quadratic2_pair_even", pm(p, m), "square-harmonic quadratic pair, even gap", lhs, rhs))
}

fn quadratic3(p: u32, big: u32, plus: bool, s1_coeff: Rational, s2_sign: i64) -> Result<(Expression, Expression)> {
    let c = if plus { 1 } else { -1 };
    let sp = sign(p);
    let lhs = (&s2(3, big, p)? + &s2(3, p, big)?.scale_int(c)).scale_int(sp);
    let mut rhs = (&z(3) * &(&s(big, p)? + &s(p, big)?.scale_int(c))).scale_int(sp);
    rhs = &rhs - &s2(1, big, p + 2)?.scale(&rat(sp * (p * (p + 1)) as i64, 2));
    rhs = &rhs + &s2(1, p, big + 2)?.scale(&s1_coeff);
    rhs = &rhs - &(&s2(2, big, p + 1)? - &(&z(2) * &s(big, p + 1)?)).scale_int(sp * p as i64);
    rhs = &rhs + &(&s2(2, p, big + 1)? - &(&z(2) * &s(p, big + 1)?)).scale_int(s2_sign * big as i64);
    rhs = &(&rhs - &triple_weighted(p, big)?) + &triple_weighted(big, p)?;
    Ok((lhs, rhs))
}

/// `S(3,P;p) + S(3,p;P)` with `P = p+2m+1`.
pub fn gen_quadratic3_pair_odd(p: u32, m: u32) -> Result<Identity> {
    need(p >= 2, "quadratic3_pair_odd needs p >= 2")?;
    let big = p + 2 * m + 1;
    let sp = sign(p);
    let c = rat(-sp * (big * (big + 1)) as i64, 2);
    let (lhs, rhs) = quadratic3(p, big, true, c, -sp)?;
    Ok(Identity::symbolic("quadratic3_pair_odd", pm(p, m), "cube-harmonic quadratic pair, odd gap", lhs, rhs))
}

/// `S(3,P;p) - S(3,p;P)` with `P = p+2m`.
pub fn gen_quadratic3_pair_even(p: u32, m: u32) -> Result<Identity> {
    need(p >= 2, "quadratic3_pair_even needs p >= 2")?;
    let big = p + 2 * m;
    let sp = sign(p);
    let c = rat(sp * (big * (big + 1)) as i64, 2);
    let (lhs, rhs) = quadratic3(p, big, false, c, sp)?;
    Ok(Identity::symbolic("quadratic3_pair_even", pm(p, m), "cube-harmonic quadratic pair, even gap", lhs, rhs))
}

/// `S(p;q) + S(q;p) = zeta(p) zeta(q) + zeta(p+q)`
pub fn gen_reflection(p: u32, q: u32) -> Result<Identity> {
    need(p >= 2 && q >= 2, "reflection needs p, q >= 2")?;
    let lhs = &s(p, q)? + &s(q, p)?;
    let rhs = &(&z(p) * &z(q)) + &z(p + q);
    Ok(Identity::symbolic("reflection", vec![("p", p.to_string()), ("q", q.to_string())], "linear sum reflection", lhs, rhs))
}

const FIXED_ALTERNATING: [(&str, &str); 4] = [
    (
        "pair",
        "S(b1,3;2) + S(b1,2;3) == 3/4*z3^2 + 7/4*z6 + 5/8*z2*z3*ln2 - 2*z2*Li4(1/2) + 5/4*z4*ln2^2 - 1/12*z2*ln2^4",
    ),
    (
        "outer",
        "S(2,3;b1) == -161/64*z6 + 31/16*z5*ln2 + 9/32*z3^2 + 3/8*z2*z3*ln2 + 2*z2*Li4(1/2) - 5/4*z4*ln2^2 \
         + 1/12*z2*ln2^4 + S(2;b4) - S(b3;3)",
    ),
    (
        "low",
        "S(b1,2;3) == 29/8*z2*z3*ln2 - 93/32*z5*ln2 - 1855/128*z6 + 17/16*z3^2 - S(b1;b5) + S(b2;4) + 4*S(2;b4) + 8*S(1;b5)",
    ),
    (
        "high",
        "S(b1,3;2) == 2079/128*z6 + 93/32*z5*ln2 - 5/16*z3^2 - 3*z2*z3*ln2 - 2*z2*Li4(1/2) + 5/4*z4*ln2^2 \
         - 1/12*z2*ln2^4 + S(b1;b5) - S(b2;4) - 4*S(2;b4) - 8*S(1;b5)",
    ),
];

/// The four weight-6 alternating evaluations.
pub fn gen_fixed_alternating() -> Vec<Identity> {
    FIXED_ALTERNATING
        .iter()
        .map(|(tag, text)| {
            let (lhs, rhs) = parse_identity(text).expect("fixed identity text parses");
            Identity::symbolic("fixed_alternating", vec![("case", tag.to_string())], "weight-6 alternating evaluation", lhs, rhs)
        })
        .collect()
}

/// A generator family and how a grid cell `(p, m)` maps onto it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    EulerLinear,
    ZetaAntisymmetric,
    Hurwitz,
    HarmonicPairOdd,
    HarmonicPairEven,
    AltHarmonicPairOdd,
    AltHarmonicPairEven,
    MixedTriple,
    AltTriple,
    AlternatingOuter,
    TripleOnes,
    Quadratic2PairOdd,
    Quadratic2PairEven,
    Quadratic3PairOdd,
    Quadratic3PairEven,
    Reflection,
    FixedAlternating,
}

impl Family {
    pub const ALL: [Family; 17] = [
        Family::EulerLinear,
        Family::ZetaAntisymmetric,
        Family::Hurwitz,
        Family::HarmonicPairOdd,
        Family::HarmonicPairEven,
        Family::AltHarmonicPairOdd,
        Family::AltHarmonicPairEven,
        Family::MixedTriple,
        Family::AltTriple,
        Family::AlternatingOuter,
        Family::TripleOnes,
        Family::Quadratic2PairOdd,
        Family::Quadratic2PairEven,
        Family::Quadratic3PairOdd,
        Family::Quadratic3PairEven,
        Family::Reflection,
        Family::FixedAlternating,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::EulerLinear => "euler_linear",
            Family::ZetaAntisymmetric => "zeta_antisymmetric",
            Family::Hurwitz => "hurwitz",
            Family::HarmonicPairOdd => "harmonic_pair_odd",
            Family::HarmonicPairEven => "harmonic_pair_even",
            Family::AltHarmonicPairOdd => "alt_harmonic_pair_odd",
            Family::AltHarmonicPairEven => "alt_harmonic_pair_even",
            Family::MixedTriple => "mixed_triple",
            Family::AltTriple => "alt_triple",
            Family::AlternatingOuter => "alternating_outer",
            Family::TripleOnes => "triple_ones",
            Family::Quadratic2PairOdd => "quadratic2_pair_odd",
            Family::Quadratic2PairEven => "quadratic2_pair_even",
            Family::Quadratic3PairOdd => "quadratic3_pair_odd",
            Family::Quadratic3PairEven => "quadratic3_pair_even",
            Family::Reflection => "reflection",
            Family::FixedAlternating => "fixed_alternating",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }

    /// How the grid parameters are used, for listings.
    pub fn grid_mapping(self) -> &'static str {
        match self {
            Family::EulerLinear => "k = p + m",
            Family::ZetaAntisymmetric => "(m, p) = (m + 2, p)",
            Family::Hurwitz => "(m, p) = (m + 2, p), a in {0, 1/2, 1}",
            Family::TripleOnes => "(l1, l2, m) = (2, p + 2m + 1, p)",
            Family::Reflection => "(p, q) = (p, p + m)",
            Family::FixedAlternating => "parameter-free, run once per grid",
            _ => "(p, m)",
        }
    }

    /// Instances for one grid cell. Parameter-free families yield nothing
    /// here; see [`Family::fixed`].
    pub fn instantiate(self, p: u32, m: u32) -> Result<Vec<Identity>> {
        let one = |r: Result<Identity>| r.map(|i| vec![i]);
        match self {
            Family::EulerLinear => one(gen_euler_linear(p + m)),
            Family::ZetaAntisymmetric => one(gen_zeta_antisymmetric(m + 2, p)),
            Family::Hurwitz => [Rational::zero(), rat(1, 2), int(1)].iter().map(|a| gen_hurwitz(m + 2, p, a)).collect(),
            Family::HarmonicPairOdd => one(gen_harmonic_pair_odd(p, m)),
            Family::HarmonicPairEven => one(gen_harmonic_pair_even(p, m)),
            Family::AltHarmonicPairOdd => one(gen_alt_harmonic_pair_odd(p, m)),
            Family::AltHarmonicPairEven => one(gen_alt_harmonic_pair_even(p, m)),
            Family::MixedTriple => one(gen_mixed_triple(p, m)),
            Family::AltTriple => one(gen_alt_triple(p, m)),
            Family::AlternatingOuter => one(gen_alternating_outer(p, m)),
            Family::TripleOnes => one(gen_triple_ones(2, p + 2 * m + 1, p)),
            Family::Quadratic2PairOdd => one(gen_quadratic2_pair_odd(p, m)),
            Family::Quadratic2PairEven => one(gen_quadratic2_pair_even(p, m)),
            Family::Quadratic3PairOdd => one(gen_quadratic3_pair_odd(p, m)),
            Family::Quadratic3PairEven => one(gen_quadratic3_pair_even(p, m)),
            Family::Reflection => one(gen_reflection(p, p + m)),
            Family::FixedAlternating => Ok(vec![]),
        }
    }

    pub fn fixed(self) -> Vec<Identity> {
        match self {
            Family::FixedAlternating => gen_fixed_alternating(),
            _ => vec![],
        }
    }
}

/// Every symbolic identity of the given weight reachable from the families
/// with small parameters; the relation pool for the solver.
pub fn relations_of_weight(w: u32) -> Vec<Identity> {
    let mut out = Vec::new();
    let keep = |r: Result<Identity>, out: &mut Vec<Identity>| {
        if let Ok(id) = r {
            if id.lhs().is_some() && id.check_weight().ok().flatten() == Some(w) {
                out.push(id);
            }
        }
    };
    for p in 1..=w {
        for m in 0..=w / 2 {
            for f in Family::ALL {
                if matches!(f, Family::EulerLinear | Family::Reflection | Family::TripleOnes | Family::FixedAlternating) {
                    continue;
                }
                if let Ok(ids) = f.instantiate(p, m) {
                    for id in ids {
                        keep(Ok(id), &mut out);
                    }
                }
            }
        }
    }
    keep(gen_euler_linear(w.saturating_sub(1)), &mut out);
    for p in 2..w {
        if p <= w - p {
            keep(gen_reflection(p, w - p), &mut out);
        }
    }
    for l1 in 2..w {
        for l2 in l1..w {
            for m in l2..w {
                if l1 + l2 + m == w {
                    keep(gen_triple_ones(l1, l2, m), &mut out);
                }
            }
        }
    }
    for id in gen_fixed_alternating() {
        keep(Ok(id), &mut out);
    }
    out
}
