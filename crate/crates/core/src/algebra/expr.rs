//! Parser for small polynomial expressions such as `(t^20-1)/(t+1)`,
//! `Phi6*Phi12` or `(t+3)(t-1)^7(t+5)`.

use num_bigint::BigInt;
use thiserror::Error;

use super::cyclotomic::cyclotomic;
use super::field::Field;
use super::poly::Poly;
use super::{Euclidean, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{message} at offset {offset} in `{input}`")]
pub struct ExprError {
    pub input: String,
    pub offset: usize,
    pub message: String,
}

/// Parses an expression in `t` with integer constants, `PhiN`, `+ - * / ^`,
/// parentheses and implicit multiplication. Division must be exact.
pub fn parse_poly<F: Field>(input: &str, ctx: F::Ctx) -> Result<Poly<F>, ExprError> {
    let mut p = Parser { s: input.as_bytes(), pos: 0, input, ctx };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected character"));
    }
    Ok(v)
}

struct Parser<'a, F: Field> {
    s: &'a [u8],
    pos: usize,
    input: &'a str,
    ctx: F::Ctx,
}

impl<F: Field> Parser<'_, F> {
    fn err(&self, message: &str) -> ExprError {
        ExprError { input: self.input.to_string(), offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly<F>, ExprError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly<F>, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    if d.is_zero() {
                        self.pos = at;
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.exact_div(&d).ok_or_else(|| {
                        self.pos = at;
                        self.err("division is not exact")
                    })?;
                }
                Some(c) if c == b'(' || c == b't' || c == b'P' || c.is_ascii_digit() => {
                    acc = acc.mul(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly<F>, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, ExprError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        Ok(self.input[start..self.pos].parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<Poly<F>, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b't') => {
                self.pos += 1;
                Ok(Poly::monomial(self.ctx, 1))
            }
            Some(b'P') if self.s[self.pos..].starts_with(b"Phi") => {
                self.pos += 3;
                let n = self.integer()?;
                let n: u32 = n.try_into().ok().filter(|&n| (1..=10_000).contains(&n)).ok_or_else(|| self.err("bad cyclotomic index"))?;
                Ok(Poly::from_bigints(self.ctx, &cyclotomic(n)))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(Poly::constant(F::from_bigint(&v, self.ctx)))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclotomic_report, Fp, Rational};

    fn q(s: &str) -> Poly<Rational> {
        parse_poly(s, ()).unwrap()
    }

    #[test]
    fn arithmetic() {
        assert_eq!(q("t^6-t^5+t^3-t+1"), Poly::from_ints((), &[1, -1, 0, 1, 0, -1, 1]));
        assert_eq!(q("(1-t)(1+t^3+t^6)"), q("1 - t + t^3 - t^4 + t^6 - t^7"));
        assert_eq!(q("2t^2"), Poly::from_ints((), &[0, 0, 2]));
        assert_eq!(q("-(t-1)"), Poly::from_ints((), &[1, -1]));
        assert_eq!(q("Phi6*Phi12"), q("t^6-t^5+t^3-t+1"));
    }

    #[test]
    fn quotient_identity() {
        let r = cyclotomic_report(&q("(t^20-1)/(t+1)"), 100);
        assert_eq!(r.factors, vec![(1, 1), (4, 1), (5, 1), (10, 1), (20, 1)]);
        assert!(r.is_complete());
    }

    #[test]
    fn modular_parse() {
        let p: Poly<Fp> = parse_poly("(t+3)(t-1)^7(t+5)", 7).unwrap();
        let direct: Poly<Fp> = parse_poly("t^9+t^8+t^7-t^2-t-1", 7).unwrap();
        assert_eq!(p, direct);
    }

    #[test]
    fn errors_report_offsets() {
        let e = parse_poly::<Rational>("t^2 + ", ()).unwrap_err();
        assert_eq!(e.offset, 6);
        assert!(parse_poly::<Rational>("(t^2+1)/(t+1)", ()).is_err());
        assert!(parse_poly::<Rational>("t)", ()).is_err());
    }
}
