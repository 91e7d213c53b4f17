//! Parser for polynomial expressions.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := ["-"] term { ("+" | "-") term }
//! term    := factor { "*" factor }
//! factor  := primary [ "^" UINT ]
//! primary := UINT [ "/" UINT ] | IDENT | "(" expr ")"
//! ```
//!
//! Integers are unbounded; exponents must be positive machine integers.

use super::{Monomial, Poly, Rational, VarId};
use num::BigInt;
use std::fmt;

/// A syntax error, with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.position, self.message)
    }
}

impl std::error::Error for PolyParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>, PolyParseError> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' => i += 1,
            b'+' => {
                tokens.push((start, Token::Plus));
                i += 1;
            }
            b'-' => {
                tokens.push((start, Token::Minus));
                i += 1;
            }
            b'*' => {
                tokens.push((start, Token::Star));
                i += 1;
            }
            b'^' => {
                tokens.push((start, Token::Caret));
                i += 1;
            }
            b'/' => {
                tokens.push((start, Token::Slash));
                i += 1;
            }
            b'(' => {
                tokens.push((start, Token::LParen));
                i += 1;
            }
            b')' => {
                tokens.push((start, Token::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &input[start..i];
                let n: BigInt = digits.parse().expect("digits form an integer");
                tokens.push((start, Token::Int(n)));
            }
            _ if b.is_ascii_alphabetic() => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push((start, Token::Ident(input[start..i].to_string())));
            }
            _ => {
                return Err(PolyParseError {
                    position: start,
                    message: format!("unexpected character `{}`", &input[start..start + 1]),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    input_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.input_len)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> PolyParseError {
        PolyParseError {
            position: self.offset(),
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Poly, PolyParseError> {
        let mut negate = false;
        if self.peek() == Some(&Token::Minus) {
            self.advance();
            negate = true;
        }
        let mut total = self.term()?;
        if negate {
            total = total.neg();
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.advance();
                    total = total.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.advance();
                    total = total.sub(&self.term()?);
                }
                _ => return Ok(total),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyParseError> {
        let mut product = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.advance();
            product = product.mul(&self.factor()?);
        }
        Ok(product)
    }

    fn factor(&mut self) -> Result<Poly, PolyParseError> {
        let base = self.primary()?;
        if self.peek() == Some(&Token::Caret) {
            self.advance();
            let at = self.offset();
            match self.advance() {
                Some(Token::Int(n)) => {
                    let exp: u32 = n.try_into().map_err(|_| PolyParseError {
                        position: at,
                        message: "exponent too large".to_string(),
                    })?;
                    if exp == 0 {
                        return Err(PolyParseError {
                            position: at,
                            message: "exponent must be positive".to_string(),
                        });
                    }
                    Ok(base.pow(exp))
                }
                _ => Err(PolyParseError {
                    position: at,
                    message: "expected integer exponent after `^`".to_string(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Poly, PolyParseError> {
        let at = self.offset();
        match self.advance() {
            Some(Token::Int(n)) => {
                // Optional denominator, written `p/q`.
                if self.peek() == Some(&Token::Slash) {
                    self.advance();
                    let at_den = self.offset();
                    match self.advance() {
                        Some(Token::Int(d)) => {
                            if d == BigInt::from(0) {
                                return Err(PolyParseError {
                                    position: at_den,
                                    message: "zero denominator".to_string(),
                                });
                            }
                            Ok(Poly::constant(Rational::new(n, d)))
                        }
                        _ => Err(PolyParseError {
                            position: at_den,
                            message: "expected integer denominator after `/`".to_string(),
                        }),
                    }
                } else {
                    Ok(Poly::constant(Rational::from_integer(n)))
                }
            }
            Some(Token::Ident(name)) => {
                let v = VarId::new(&name).map_err(|e| PolyParseError {
                    position: at,
                    message: e.to_string(),
                })?;
                Ok(Poly::from_terms([(Monomial::var(v), Rational::new(
                    BigInt::from(1),
                    BigInt::from(1),
                ))]))
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.advance() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(PolyParseError {
                        position: self.offset(),
                        message: "expected `)`".to_string(),
                    }),
                }
            }
            Some(other) => Err(PolyParseError {
                position: at,
                message: format!("unexpected token `{other:?}`"),
            }),
            None => Err(PolyParseError {
                position: at,
                message: "unexpected end of input".to_string(),
            }),
        }
    }
}

pub(super) fn parse_poly(input: &str) -> Result<Poly, PolyParseError> {
    let tokens = tokenize(input)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        input_len: input.len(),
    };
    let poly = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.error("trailing input after expression"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::super::{frac, rat, Poly};

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn parses_constants() {
        assert_eq!(p("5").as_constant().unwrap(), rat(5));
        assert_eq!(p("-5").as_constant().unwrap(), rat(-5));
        assert_eq!(p("2/3").as_constant().unwrap(), frac(2, 3));
        assert_eq!(p("4/6").as_constant().unwrap(), frac(2, 3));
    }

    #[test]
    fn parses_products_and_powers() {
        assert_eq!(p("2*a^2*b").to_string(), "2*a^2*b");
        assert_eq!(p("a*a").to_string(), "a^2");
        assert_eq!(p("(a+b)^2").to_string(), "a^2 + 2*a*b + b^2");
    }

    #[test]
    fn parses_mixed_expression() {
        assert_eq!(p("2*a^2*b - 1/3*c + 5").to_string(), "2*a^2*b - 1/3*c + 5");
    }

    #[test]
    fn leading_minus() {
        assert_eq!(p("-a^2"), Poly::zero().sub(&p("a^2")));
        assert_eq!(p("-(a+b)"), p("-a - b"));
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(p(" a +  b "), p("a+b"));
    }

    #[test]
    fn rejects_garbage() {
        assert!("".parse::<Poly>().is_err());
        assert!("a +".parse::<Poly>().is_err());
        assert!("(a".parse::<Poly>().is_err());
        assert!("a b".parse::<Poly>().is_err());
        assert!("1/0".parse::<Poly>().is_err());
        assert!("a^0".parse::<Poly>().is_err());
        assert!("a^-1".parse::<Poly>().is_err());
        assert!("$".parse::<Poly>().is_err());
    }

    #[test]
    fn error_positions_point_at_fault() {
        let err = "a + $".parse::<Poly>().unwrap_err();
        assert_eq!(err.position, 4);
    }
}
