//! Textual polynomial format.
//!
//! Canonical form: terms in decreasing monomial order joined by ` + ` or
//! ` - `; each term is `num/den` followed by ` * zi^e` for every variable with
//! a nonzero exponent (1-based names `z1..zm`). The zero polynomial is `0`.
//!
//! ```text
//! -1/10 * z1^2 * z2^8 + 1/2 * z1^3 * z2^7 - 1/1 * z1^4 * z2^6
//! ```
//!
//! The parser also accepts integer coefficients, bare `zi` (exponent 1),
//! omitted coefficients and arbitrary whitespace. Printing a parsed
//! polynomial always yields the canonical form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Monomial, MultiPoly};
use crate::error::{Error, Result};

fn write_term(f: &mut fmt::Formatter<'_>, mono: &Monomial, c: &BigRational) -> fmt::Result {
    write!(f, "{}/{}", c.numer(), c.denom())?;
    for (i, &e) in mono.exponents().iter().enumerate() {
        if e > 0 {
            write!(f, " * z{}^{}", i + 1, e)?;
        }
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().rev().enumerate() {
            if k == 0 {
                write_term(f, m, c)?;
            } else if c.is_negative() {
                write!(f, " - ")?;
                write_term(f, m, &c.abs())?;
            } else {
                write!(f, " + ")?;
                write_term(f, m, c)?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    arity: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {}", self.pos))
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn rational(&mut self) -> Result<BigRational> {
        let num: BigInt = self
            .digits()?
            .parse()
            .map_err(|_| self.err("bad integer"))?;
        if self.eat(b'/') {
            let den: BigInt = self
                .digits()?
                .parse()
                .map_err(|_| self.err("bad integer"))?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    fn factor(&mut self, coeff: &mut BigRational, exps: &mut [u32]) -> Result<()> {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                let idx: usize = self.digits()?.parse().map_err(|_| self.err("bad index"))?;
                if idx == 0 || idx > self.arity {
                    return Err(self.err(&format!("variable z{idx} outside arity {}", self.arity)));
                }
                let e: u32 = if self.eat(b'^') {
                    self.digits()?
                        .parse()
                        .map_err(|_| self.err("bad exponent"))?
                } else {
                    1
                };
                exps[idx - 1] += e;
                Ok(())
            }
            Some(b) if b.is_ascii_digit() => {
                *coeff *= self.rational()?;
                Ok(())
            }
            _ => Err(self.err("expected coefficient or variable")),
        }
    }

    fn term(&mut self, sign: bool) -> Result<(Monomial, BigRational)> {
        let mut coeff = BigRational::one();
        let mut exps = vec![0u32; self.arity];
        self.factor(&mut coeff, &mut exps)?;
        while self.eat(b'*') {
            self.factor(&mut coeff, &mut exps)?;
        }
        if sign {
            coeff = -coeff;
        }
        Ok((Monomial::new(exps), coeff))
    }

    fn poly(&mut self) -> Result<MultiPoly> {
        let mut terms = Vec::new();
        let mut neg = self.eat(b'-');
        loop {
            terms.push(self.term(neg)?);
            if self.eat(b'+') {
                neg = false;
            } else if self.eat(b'-') {
                neg = true;
            } else {
                break;
            }
        }
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(MultiPoly::from_terms(self.arity, terms))
    }
}

impl MultiPoly {
    /// Parse the textual format into a polynomial in `arity` variables.
    pub fn parse(text: &str, arity: usize) -> Result<MultiPoly> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            arity,
        };
        p.poly()
    }

    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}
