//! ASCII grammar for sums and zeta-monomial expressions.
//!
//! ```text
//! expr   := ["+"|"-"] term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := rational | atom ["^" int]
//! atom   := "z" int | "zb" int | "ln2" | "pi" | "Li" int "(1/2)" | sum
//! sum    := "S(" [arg ("," arg)*] ";" arg ")"
//! arg    := ["b"] int
//! ```
//!
//! Whitespace is ignored between tokens. Error positions are byte offsets
//! into the input.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::sums::SumSignature;
use crate::symbolic::{Atom, Expression};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { src: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos, format!("expected `{}`", c as char))
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse as an integer"))
    }

    fn small(&mut self, what: &str) -> Result<u32> {
        let pos = self.pos;
        let n = self.integer()?;
        match u32::try_from(n) {
            Ok(v) if v > 0 => Ok(v),
            _ => err(pos, format!("{what} must be a positive integer below 2^32")),
        }
    }

    fn arg(&mut self) -> Result<(u32, bool)> {
        let alt = self.eat(b'b');
        Ok((self.small("sum exponent")?, alt))
    }

    fn signature(&mut self) -> Result<SumSignature> {
        let start = self.pos;
        if !self.eat_word("S") {
            return err(self.pos, "expected `S(`");
        }
        self.expect(b'(')?;
        let mut inner = Vec::new();
        if self.peek() != Some(b';') {
            inner.push(self.arg()?);
            while self.eat(b',') {
                inner.push(self.arg()?);
            }
        }
        self.expect(b';')?;
        let (q, qalt) = self.arg()?;
        self.expect(b')')?;
        if inner.len() > 2 {
            return err(start, "sums of depth above 2 are not supported");
        }
        SumSignature::new(inner, q, qalt)
    }

    fn atom(&mut self) -> Result<Atom> {
        let start = {
            self.skip_ws();
            self.pos
        };
        if self.eat_word("ln2") {
            return Ok(Atom::Ln2);
        }
        if self.eat_word("pi") {
            return Ok(Atom::Pi);
        }
        if self.eat_word("Li") {
            let k = self.small("polylogarithm order")?;
            for c in b"(1/2)" {
                self.expect(*c)?;
            }
            if k < 2 {
                return err(start, "Li1(1/2) is ln2; write ln2");
            }
            return Ok(Atom::LiHalf(k));
        }
        if self.peek() == Some(b'S') {
            return Ok(Atom::Sum(self.signature()?));
        }
        if self.eat(b'z') {
            let bar = self.src.get(self.pos) == Some(&b'b') && {
                self.pos += 1;
                true
            };
            let k = self.small("zeta argument")?;
            if bar {
                return Ok(Atom::ZetaBar(k));
            }
            if k < 2 {
                return err(start, "z1 diverges");
            }
            return Ok(Atom::Zeta(k));
        }
        err(start, "expected a number, `z`, `zb`, `ln2`, `pi`, `Li` or `S(`")
    }

    fn factor(&mut self) -> Result<Expression> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let r = if self.eat(b'/') {
                    let pos = self.pos;
                    let d = self.integer()?;
                    if d.is_zero() {
                        return err(pos, "zero denominator");
                    }
                    Rational::new(n, d)
                } else {
                    Rational::from_integer(n)
                };
                Ok(Expression::constant(r))
            }
            _ => {
                let a = self.atom()?;
                let e = if self.eat(b'^') { self.small("exponent")? } else { 1 };
                Ok(Expression::atom_pow(a, e))
            }
        }
    }

    fn term(&mut self) -> Result<Expression> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn expr(&mut self) -> Result<Expression> {
        let mut acc = Expression::zero();
        let mut sign = if self.eat(b'-') {
            -Rational::one()
        } else {
            self.eat(b'+');
            Rational::one()
        };
        loop {
            acc = &acc + &self.term()?.scale(&sign);
            if self.eat(b'+') {
                sign = Rational::one();
            } else if self.eat(b'-') {
                sign = -Rational::one();
            } else {
                return Ok(acc);
            }
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            err(self.pos, format!("unexpected `{}`", self.src[self.pos] as char))
        }
    }
}

/// Parse an expression; the result is not normalized.
pub fn parse_expr(text: &str) -> Result<Expression> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_signature(text: &str) -> Result<SumSignature> {
    let mut p = Parser::new(text);
    let s = p.signature()?;
    p.finish()?;
    Ok(s)
}

/// Parse `lhs == rhs`.
pub fn parse_identity(text: &str) -> Result<(Expression, Expression)> {
    let Some(split) = text.find("==") else {
        return err(text.len(), "expected `==`");
    };
    let lhs = parse_expr(&text[..split])?;
    let rhs = parse_expr(&text[split + 2..]).map_err(|e| match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + split + 2, msg },
        other => other,
    })?;
    Ok((lhs, rhs))
}

/// Parse a table line `LHS := RHS  # comment`, returning the lhs atom, rhs
/// and comment; blank and comment-only lines give `None`.
pub fn parse_table_line(line: &str) -> Result<Option<(Atom, Expression, String)>> {
    let (body, comment) = match line.find('#') {
        Some(i) => (&line[..i], line[i + 1..].trim().to_string()),
        None => (line, String::new()),
    };
    if body.trim().is_empty() {
        return Ok(None);
    }
    let Some(split) = body.find(":=") else {
        return err(body.len(), "expected `:=`");
    };
    let mut p = Parser::new(&body[..split]);
    let atom = p.atom()?;
    p.finish()?;
    let rhs = parse_expr(&body[split + 2..]).map_err(|e| match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + split + 2, msg },
        other => other,
    })?;
    Ok(Some((atom, rhs, comment)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn signatures() {
        let s = parse_signature("S(1,2;3)").unwrap();
        assert_eq!(s, SumSignature::quadratic(1, 2, 3).unwrap());
        let s = parse_signature(" S( b1 , 3 ; 2 ) ").unwrap();
        assert_eq!(s.inner(), &[(1, true), (3, false)]);
        assert_eq!(s.to_string(), "S(b1,3;2)");
        assert!(matches!(parse_signature("S(2;1)"), Err(Error::Divergent(_))));
        assert!(parse_signature("S(2;b1)").is_ok());
        assert!(matches!(parse_signature("S(1,2,3,4;2)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn expressions() {
        let e = parse_expr("-101/48*z6 + 5/2*z3^2").unwrap();
        let expect = &Expression::zeta(6).scale(&rat(-101, 48)) + &Expression::zeta(3).pow(2).scale(&rat(5, 2));
        assert_eq!(e, expect);
        assert_eq!(e.to_string(), "-101/48*z6 + 5/2*z3^2");
        let e = parse_expr("2*Li4(1/2)*z2 - ln2^4 + S(2;6) + zb3 + pi^2").unwrap();
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        assert_eq!(parse_expr("0").unwrap(), Expression::zero());
        assert_eq!(parse_expr("z3 - z3").unwrap(), Expression::zero());
    }

    #[test]
    fn error_positions() {
        match parse_expr("z3 + * z2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        match parse_expr("z3 z2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("z1").is_err());
        assert!(parse_expr("1/0").is_err());
        match parse_identity("S(1;2) == 2*z") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 13),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identities_and_table_lines() {
        let (l, r) = parse_identity("S(1;2) == 2*z3").unwrap();
        assert_eq!(l, Expression::sum(SumSignature::linear(1, 2).unwrap()));
        assert_eq!(r, Expression::zeta(3).scale_int(2));
        let (a, e, c) = parse_table_line("S(1;2) := 2*z3  # source: classical").unwrap().unwrap();
        assert_eq!(a, Atom::Sum(SumSignature::linear(1, 2).unwrap()));
        assert_eq!(e, Expression::zeta(3).scale_int(2));
        assert_eq!(c, "source: classical");
        assert!(parse_table_line("   # only a comment").unwrap().is_none());
        assert!(parse_table_line("S(1;2) = 2*z3").is_err());
    }
}
