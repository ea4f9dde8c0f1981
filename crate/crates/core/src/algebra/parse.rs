//! Text grammar for polynomials over K.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/')? unary)*
//! unary := '-' unary | '+' unary | power
//! power := atom ('^' integer)?
//! atom  := number ('/' number)? | 'x' | 's' | '(' expr ')'
//! ```
//! `s` denotes sqrt(d); division is allowed only by constants.

use num::{BigInt, Zero};
use thiserror::Error;

use super::field::{FieldConfig, FieldElem, Rational};
use super::poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    cfg: FieldConfig,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
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

    fn expr(&mut self) -> PResult<Poly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> PResult<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let den = self.unary()?;
                    if !den.is_constant() || den.is_zero() {
                        return Err(ParseError {
                            pos: at,
                            msg: "division only by nonzero constants".into(),
                        });
                    }
                    let inv = den.coeff(0).inv().expect("nonzero");
                    acc = acc.scale(&inv);
                }
                Some(c) if c == b'(' || c == b'x' || c == b's' || c.is_ascii_digit() => {
                    acc = &acc * &self.unary()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<Poly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected a nonnegative integer exponent");
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            let e: usize = match text.parse() {
                Ok(e) if e <= 4096 => e,
                _ => {
                    return Err(ParseError { pos: start, msg: "exponent too large".into() });
                }
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> PResult<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<BigInt>().map_err(|_| ParseError { pos: start, msg: "bad integer".into() })
    }

    fn atom(&mut self) -> PResult<Poly> {
        let d = self.cfg.d();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Poly::x())
            }
            Some(b's') => {
                if d == 1 {
                    return self.err("symbol s requires a quadratic field (set d != 1)");
                }
                self.pos += 1;
                Ok(Poly::constant(self.cfg.sqrt_d()))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                // p/q binds tightly when q is a literal integer
                let save = self.pos;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                        let at = self.pos;
                        let m = self.integer()?;
                        if m.is_zero() {
                            return Err(ParseError { pos: at, msg: "zero denominator".into() });
                        }
                        return Ok(Poly::constant(
                            FieldElem::from_rational(Rational::new(n, m)).in_field(d),
                        ));
                    }
                    self.pos = save;
                }
                Ok(Poly::constant(FieldElem::from_bigint(n).in_field(d)))
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial over the field described by `cfg`.
pub fn parse_poly(text: &str, cfg: &FieldConfig) -> Result<Poly, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, cfg: *cfg };
    if p.peek().is_none() {
        return p.err("empty input");
    }
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a field element (a constant polynomial).
pub fn parse_elem(text: &str, cfg: &FieldConfig) -> Result<FieldElem, ParseError> {
    let p = parse_poly(text, cfg)?;
    if !p.is_constant() {
        return Err(ParseError { pos: 0, msg: "expected a constant".into() });
    }
    Ok(p.coeff(0).in_field(cfg.d()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implicit_products_and_powers() {
        let q = FieldConfig::rational();
        let a = parse_poly("x^2*(x-1)^3", &q).unwrap();
        let b = parse_poly("x^2 (x - 1)^3", &q).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree(), 5);
        assert_eq!(parse_poly("2x", &q).unwrap(), parse_poly("2*x", &q).unwrap());
    }

    #[test]
    fn rationals_and_s() {
        let k = FieldConfig::quadratic(2).unwrap();
        let p = parse_poly("x^2 + 1/2*s*x - 3", &k).unwrap();
        assert_eq!(p.coeff(1), k.elem(Rational::zero(), Rational::new(1.into(), 2.into())));
        assert_eq!(parse_poly("(x+s)/3", &k).unwrap().coeff(1), FieldElem::frac(1, 3));
    }

    #[test]
    fn errors_carry_positions() {
        let q = FieldConfig::rational();
        assert_eq!(parse_poly("x + s", &q).unwrap_err().pos, 4);
        assert_eq!(parse_poly("x + * 2", &q).unwrap_err().pos, 4);
        assert!(parse_poly("x / x", &q).is_err());
        assert!(parse_poly("(x+1", &q).is_err());
        assert!(parse_poly("", &q).is_err());
    }
}
