//! Text syntax for scalars.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exp)?
//! atom   := INT | SLOT | '(' expr ')' | '[' affine ']'
//! exp    := INT | '-' INT | '(' rational ')'
//! affine := ['-'] aterm (('+' | '-') aterm)*
//! aterm  := rational ['*' PARAM] | PARAM
//! ```
//!
//! `SLOT` is one of `q x y z v t` and denotes `q`, `q^{δ₁−δ₂}`,
//! `q^{δ₁+δ₂}`, `q^u`, `q^v`, `q^{δ₂−δ₃}`; exponents may be halves.
//! `PARAM` is one of `d d1 d2 d3 u v`, where `d` is `d1 - d2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::affine::{AffineExpr, ParamSymbol};
use super::bracket::{Bracket, BracketProduct};
use super::field::Scalar;
use super::halfint::HalfInt;
use super::poly::{ONE_MONO, SLOT_NAMES};
use crate::error::ParseError;

#[derive(Clone, Debug)]
enum Ast {
    Num(BigRational),
    Slot(usize),
    Bracket(AffineExpr),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, BigRational),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Scalar { pos: self.pos, msg: msg.into() })
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

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            if self.pos == start && self.src[self.pos].is_ascii_digit() {
                return None;
            }
            self.pos += 1;
        }
        (start != self.pos).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if self.eat(b'-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = if self.eat(b'(') {
                let r = self.rational()?;
                self.expect(b')')?;
                r
            } else if self.eat(b'-') {
                -BigRational::from_integer(self.int()?)
            } else {
                BigRational::from_integer(self.int()?)
            };
            return Ok(Ast::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.affine()?;
                self.expect(b']')?;
                Ok(Ast::Bracket(a))
            }
            Some(c) if c.is_ascii_digit() => Ok(Ast::Num(BigRational::from_integer(self.int()?))),
            Some(_) => {
                let save = self.pos;
                match self.ident() {
                    Some(id) => match SLOT_NAMES.iter().position(|s| *s == id) {
                        Some(slot) => Ok(Ast::Slot(slot)),
                        None => {
                            self.pos = save;
                            self.err(format!("unknown generator '{id}'"))
                        }
                    },
                    None => self.err("unexpected character"),
                }
            }
            None => self.err("unexpected end of input"),
        }
    }

    /// `['-'] INT ['/' INT]`
    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let neg = self.eat(b'-');
        let n = self.int()?;
        let d = if self.eat(b'/') { self.int()? } else { BigInt::one() };
        if d.is_zero() {
            return self.err("zero denominator");
        }
        let r = BigRational::new(n, d);
        Ok(if neg { -r } else { r })
    }

    fn affine(&mut self) -> Result<AffineExpr, ParseError> {
        let mut out = AffineExpr::ZERO;
        let mut first = true;
        loop {
            let neg = if self.eat(b'-') {
                true
            } else if first || self.eat(b'+') {
                false
            } else {
                return Ok(out);
            };
            first = false;
            let term = self.affine_term()?;
            out = if neg { out - term } else { out + term };
        }
    }

    fn affine_term(&mut self) -> Result<AffineExpr, ParseError> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                let twice = r * BigRational::from_integer(2.into());
                if !twice.is_integer() {
                    return self.err("bracket coefficients must be half-integers");
                }
                let t: i64 = twice.to_integer().try_into().or_else(|_| self.err("coefficient too large"))?;
                let h = HalfInt::from_twice(t);
                if !self.eat(b'*') {
                    return Ok(AffineExpr::constant(h));
                }
                Some(t)
            }
            _ => None,
        };
        let save = self.pos;
        let name = match self.ident() {
            Some(n) => n,
            None => return self.err("expected parameter"),
        };
        let base = match name.as_str() {
            "d" => AffineExpr::delta_diff(),
            other => match ParamSymbol::from_name(other) {
                Some(p) => AffineExpr::param(p),
                None => {
                    self.pos = save;
                    return self.err(format!("unknown parameter '{other}'"));
                }
            },
        };
        match coeff {
            None => Ok(base),
            Some(t) => match base.mul_half(t) {
                Some(e) => Ok(e),
                None => self.err("coefficient leaves the half-integer lattice"),
            },
        }
    }
}

fn parse_ast(s: &str) -> Result<Ast, ParseError> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let ast = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(ast)
}

fn lower_scalar(ast: &Ast, b: Bracket) -> Result<Scalar, ParseError> {
    let fail = |msg: &str| ParseError::Scalar { pos: 0, msg: msg.into() };
    Ok(match ast {
        Ast::Num(r) => Scalar::from_rational(r.clone()),
        Ast::Slot(s) => {
            let mut m = ONE_MONO;
            m[*s] = 2;
            Scalar::monomial(m)
        }
        Ast::Bracket(a) => super::bracket::bracket(b, a),
        Ast::Neg(x) => lower_scalar(x, b)?.neg(),
        Ast::Add(x, y) => lower_scalar(x, b)?.add(&lower_scalar(y, b)?),
        Ast::Sub(x, y) => lower_scalar(x, b)?.sub(&lower_scalar(y, b)?),
        Ast::Mul(x, y) => lower_scalar(x, b)?.mul(&lower_scalar(y, b)?),
        Ast::Div(x, y) => lower_scalar(x, b)?
            .div(&lower_scalar(y, b)?)
            .ok_or_else(|| fail("division by zero"))?,
        Ast::Pow(x, e) => {
            if let Ast::Slot(s) = **x {
                let twice = e * BigRational::from_integer(2.into());
                if !twice.is_integer() {
                    return Err(fail("generator exponents must be halves"));
                }
                let mut m = ONE_MONO;
                m[s] = twice.to_integer().try_into().map_err(|_| fail("exponent too large"))?;
                return Ok(Scalar::monomial(m));
            }
            if !e.is_integer() {
                return Err(fail("fractional power of a compound expression"));
            }
            let n: i32 = e.to_integer().try_into().map_err(|_| fail("exponent too large"))?;
            lower_scalar(x, b)?.pow(n).ok_or_else(|| fail("division by zero"))?
        }
    })
}

fn lower_product(ast: &Ast) -> Result<BracketProduct, ParseError> {
    let fail = |msg: &str| ParseError::Scalar { pos: 0, msg: msg.into() };
    let pole = |_| fail("division by [0]");
    Ok(match ast {
        Ast::Num(r) => BracketProduct::constant(r.clone()),
        Ast::Bracket(a) => BracketProduct::bracket(*a),
        Ast::Neg(x) => lower_product(x)?.neg(),
        Ast::Mul(x, y) => lower_product(x)?.mul(&lower_product(y)?),
        Ast::Div(x, y) => lower_product(x)?.div(&lower_product(y)?).map_err(pole)?,
        Ast::Pow(x, e) if e.is_integer() => {
            let n: i32 = e.to_integer().try_into().map_err(|_| fail("exponent too large"))?;
            let base = lower_product(x)?;
            let base = if n < 0 { base.inv().map_err(pole)? } else { base };
            (0..n.unsigned_abs()).fold(BracketProduct::one(), |acc, _| acc.mul(&base))
        }
        _ => return Err(fail("not a product of brackets")),
    })
}

/// Parses a scalar, realizing any `[a]` with `b`.
pub fn parse_scalar_with(s: &str, b: Bracket) -> Result<Scalar, ParseError> {
    lower_scalar(&parse_ast(s)?, b)
}

/// Parses a scalar with brackets read as q-numbers.
pub fn parse_scalar(s: &str) -> Result<Scalar, ParseError> {
    parse_scalar_with(s, Bracket::Quantum)
}

/// Parses a product/quotient of rationals and brackets, e.g. `-[2]/[d-5/2]`.
pub fn parse_bracket_product(s: &str) -> Result<BracketProduct, ParseError> {
    lower_product(&parse_ast(s)?)
}

impl std::str::FromStr for Scalar {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s)
    }
}

impl std::str::FromStr for BracketProduct {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_bracket_product(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::bracket::bracket;

    #[test]
    fn canonical_round_trip() {
        let s = parse_scalar("[d]/[d-1] + q^(1/2)*x^(-3/2) - 2").unwrap();
        let back = parse_scalar(&s.to_string()).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn brackets_and_products() {
        let p = parse_bracket_product("-[2]/[d-5/2]").unwrap();
        assert_eq!(p.to_string(), "-[2]/[d-5/2]");
        let p = parse_bracket_product("[d]*[d+1]/([d-2]*[d-1])").unwrap();
        assert_eq!(p.to_string(), "[d]*[d+1]/([d-2]*[d-1])");
        let p = parse_bracket_product("[-d+1/2]").unwrap();
        assert_eq!(p.to_string(), "-[d-1/2]");
        let p = parse_bracket_product("[u - d1 + 1/2]^2").unwrap();
        assert_eq!(p.to_string(), "[d1-u-1/2]*[d1-u-1/2]");
        let p = parse_bracket_product("[1/2*d]").unwrap();
        assert_eq!(p.to_string(), "[1/2*d]");
    }

    #[test]
    fn q_two_equals_q_plus_inverse() {
        let two = parse_scalar("[2]").unwrap();
        assert_eq!(two, parse_scalar("q + q^-1").unwrap());
        assert_eq!(parse_scalar_with("[2]", Bracket::Classical).unwrap(), Scalar::from_int(2));
        assert_eq!(parse_scalar("[d+1]").unwrap(), bracket(Bracket::Quantum, &AffineExpr::delta_diff().plus(HalfInt::ONE)));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_scalar("1 +").is_err());
        assert!(parse_scalar("w").is_err());
        assert!(parse_scalar("[d").is_err());
        assert!(parse_scalar("q^(1/3)").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("[d]/[d-d]").is_err());
    }
}
