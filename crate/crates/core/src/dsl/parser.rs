use thiserror::Error;

use super::{BinOp, Expr, Func};
use crate::jet::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected one of {expected:?}")]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
    },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(C64),
    I,
    Z,
    Func(Func),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

const ATOM_START: &[&str] = &["number", "i", "z", "function", "("];
const AFTER_ATOM: &[&str] = &["+", "-", "*", "/", "^", ")", "end of input"];

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.pos - start
    }

    /// Returns the token and the byte offset where it starts.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(&b) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        let single = match b {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((t, start));
        }
        if b.is_ascii_digit() || b == b'.' {
            return self.number(start);
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            return match word {
                "i" => Ok((Tok::I, start)),
                "z" => Ok((Tok::Z, start)),
                _ => match Func::from_name(word) {
                    Some(f) => Ok((Tok::Func(f), start)),
                    None => Err(ParseError::UnknownFunction {
                        name: word.to_string(),
                        offset: start,
                    }),
                },
            };
        }
        Err(ParseError::Syntax {
            offset: start,
            expected: ATOM_START.to_vec(),
        })
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize), ParseError> {
        let int_digits = self.digits();
        let mut frac_digits = 0;
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac_digits = self.digits();
        }
        if int_digits + frac_digits == 0 {
            return Err(ParseError::Syntax {
                offset: start,
                expected: vec!["digit"],
            });
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
            offset: start,
            expected: vec!["number"],
        })?;
        // imaginary suffix: `4i`, but not `4in`
        if self.src.get(self.pos) == Some(&b'i') {
            let next = self.src.get(self.pos + 1);
            if !next.is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
                self.pos += 1;
                return Ok((Tok::Num(C64::new(0.0, value)), start));
            }
        }
        Ok((Tok::Num(C64::new(value, 0.0)), start))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, at) = self.lexer.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn fail<T>(&self, expected: &[&'static str]) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.at,
            expected: expected.to_vec(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            lhs = Expr::binary(op, lhs, self.factor()?);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.tok == Tok::Minus {
            self.bump()?;
            return Ok(Expr::Neg(Box::new(self.power()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.tok == Tok::Caret {
            self.bump()?;
            return Ok(Expr::binary(BinOp::Pow, base, self.factor()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let e = match self.tok.clone() {
            Tok::Num(c) => Expr::Const(c),
            Tok::I => Expr::Const(C64::new(0.0, 1.0)),
            Tok::Z => Expr::Var,
            Tok::Func(f) => {
                self.bump()?;
                if self.tok != Tok::LParen {
                    return self.fail(&["("]);
                }
                self.bump()?;
                let arg = self.expr()?;
                if self.tok != Tok::RParen {
                    return self.fail(&[")"]);
                }
                Expr::Call(f, Box::new(arg))
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                if self.tok != Tok::RParen {
                    return self.fail(&[")"]);
                }
                inner
            }
            _ => return self.fail(ATOM_START),
        };
        self.bump()?;
        Ok(e)
    }
}

/// Parses a formula in `z`.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        lexer: Lexer {
            src: src.as_bytes(),
            pos: 0,
        },
        tok: Tok::End,
        at: 0,
    };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.fail(AFTER_ATOM);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn num(x: f64) -> Expr {
        Expr::real(x)
    }

    #[test]
    fn root_of_cayley_map() {
        let e = parse("((1+z)/(1-z))^0.5").unwrap();
        let base = Expr::binary(
            BinOp::Div,
            Expr::binary(BinOp::Add, num(1.0), Expr::Var),
            Expr::binary(BinOp::Sub, num(1.0), Expr::Var),
        );
        assert_eq!(e, Expr::binary(BinOp::Pow, base, num(0.5)));
    }

    #[test]
    fn power_binds_before_division() {
        let e = parse("z/(1-z)^2").unwrap();
        let Expr::Binary(BinOp::Div, lhs, rhs) = e else {
            panic!("not a quotient")
        };
        assert_eq!(*lhs, Expr::Var);
        assert!(matches!(*rhs, Expr::Binary(BinOp::Pow, _, _)));
    }

    #[test]
    fn power_binds_tighter_than_unary_minus_and_is_right_associative() {
        assert_eq!(
            parse("-z^2").unwrap(),
            Expr::Neg(Box::new(Expr::binary(BinOp::Pow, Expr::Var, num(2.0))))
        );
        assert_eq!(
            parse("2^3^2").unwrap(),
            Expr::binary(
                BinOp::Pow,
                num(2.0),
                Expr::binary(BinOp::Pow, num(3.0), num(2.0))
            )
        );
        assert_eq!(
            parse("2^-1").unwrap(),
            Expr::binary(BinOp::Pow, num(2.0), Expr::Neg(Box::new(num(1.0))))
        );
    }

    #[test]
    fn complex_literals() {
        assert_eq!(
            parse("3+4i").unwrap(),
            Expr::binary(BinOp::Add, num(3.0), Expr::Const(C64::new(0.0, 4.0)))
        );
        assert_eq!(parse("i").unwrap(), Expr::Const(C64::new(0.0, 1.0)));
    }

    #[test]
    fn dangling_operator_reports_offset() {
        match parse("1+") {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        assert!(matches!(
            parse("2z"),
            Err(ParseError::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse("--z"),
            Err(ParseError::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse(""),
            Err(ParseError::Syntax { offset: 0, .. })
        ));
        assert!(matches!(
            parse("(z"),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
    }

    #[test]
    fn unknown_identifiers() {
        assert_eq!(
            parse("1+sin(z)"),
            Err(ParseError::UnknownFunction {
                name: "sin".into(),
                offset: 2
            })
        );
        assert!(matches!(
            parse("x"),
            Err(ParseError::UnknownFunction { .. })
        ));
        assert!(matches!(
            parse("exp z"),
            Err(ParseError::Syntax { offset: 4, .. })
        ));
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            Just(Expr::Var),
            (0.0f64..100.0).prop_map(Expr::real),
            (0.0f64..10.0).prop_map(|y| Expr::Const(C64::new(0.0, y))),
        ];
        leaf.prop_recursive(5, 48, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (inner.clone(), inner.clone(), 0usize..5).prop_map(|(l, r, k)| {
                    let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow][k];
                    Expr::binary(op, l, r)
                }),
                (inner, 0usize..4).prop_map(|(e, k)| {
                    Expr::Call(
                        [Func::Exp, Func::Log, Func::Sqrt, Func::Tan][k],
                        Box::new(e),
                    )
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn parse_print_round_trip(e in arb_expr()) {
            prop_assert_eq!(parse(&e.to_string()).unwrap(), e);
        }

        #[test]
        fn arbitrary_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
            let src = String::from_utf8_lossy(&bytes);
            let _ = parse(&src);
        }

        #[test]
        fn operator_soup_never_panics(src in "[-+*/^()zi0-9. e]{0,40}") {
            let _ = parse(&src);
        }
    }
}
