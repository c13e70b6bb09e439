//! A small formula language for analytic functions of `z`.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := ('-')? power
//! power  := atom ('^' factor)?
//! atom   := number | 'i' | 'z' | ident '(' expr ')' | '(' expr ')'
//! ident  := 'exp' | 'log' | 'sqrt' | 'tan'
//! ```
//!
//! A number immediately followed by `i` is an imaginary literal (`4i`), so
//! `3+4i` spells a complex constant. There is no implicit multiplication.

mod parser;

use std::fmt;

use crate::jet::{Jet3, JetError, C64};

pub use parser::{parse, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Tan,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Tan => "tan",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "tan" => Func::Tan,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(C64),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn real(x: f64) -> Self {
        Expr::Const(C64::new(x, 0.0))
    }

    /// True when the subtree does not mention `z`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.is_constant(),
            Expr::Binary(_, l, r) => l.is_constant() && r.is_constant(),
        }
    }

    /// Full order-3 jet of the expression at `z0`.
    pub fn eval_jet(&self, z0: C64) -> Result<Jet3, JetError> {
        Ok(match self {
            Expr::Const(c) => Jet3::constant(*c),
            Expr::Var => Jet3::variable(z0),
            Expr::Neg(e) => -e.eval_jet(z0)?,
            Expr::Binary(op, l, r) => {
                let a = l.eval_jet(z0)?;
                let b = r.eval_jet(z0)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a.try_div(b)?,
                    BinOp::Pow if r.is_constant() => a.powc(b.v)?,
                    BinOp::Pow => (b * a.ln()?).exp(),
                }
            }
            Expr::Call(f, e) => {
                let a = e.eval_jet(z0)?;
                match f {
                    Func::Exp => a.exp(),
                    Func::Log => a.ln()?,
                    Func::Sqrt => a.sqrt()?,
                    Func::Tan => a.tan(),
                }
            }
        })
    }

    /// Plain complex evaluation with the same branch conventions as
    /// [`Expr::eval_jet`].
    pub fn eval(&self, z0: C64) -> Result<C64, JetError> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var => z0,
            Expr::Neg(e) => -e.eval(z0)?,
            Expr::Binary(op, l, r) => {
                let a = l.eval(z0)?;
                let b = r.eval(z0)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == C64::new(0.0, 0.0) {
                            return Err(JetError::DegenerateJet);
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        if r.is_constant()
                            && b.im == 0.0
                            && b.re.fract() == 0.0
                            && b.re.abs() <= i32::MAX as f64
                        {
                            let n = b.re as i32;
                            if n < 0 && a == C64::new(0.0, 0.0) {
                                return Err(JetError::DegenerateJet);
                            }
                            a.powi(n)
                        } else {
                            cut(a)?;
                            (b * a.ln()).exp()
                        }
                    }
                }
            }
            Expr::Call(f, e) => {
                let a = e.eval(z0)?;
                match f {
                    Func::Exp => a.exp(),
                    Func::Log => {
                        cut(a)?;
                        a.ln()
                    }
                    Func::Sqrt => {
                        cut(a)?;
                        a.sqrt()
                    }
                    Func::Tan => a.tan(),
                }
            }
        })
    }
}

fn cut(v: C64) -> Result<(), JetError> {
    if v.im == 0.0 && v.re <= 0.0 {
        Err(JetError::BranchCut(v))
    } else {
        Ok(())
    }
}

pub fn eval_jet(e: &Expr, z0: C64) -> Result<Jet3, JetError> {
    e.eval_jet(z0)
}

/// Fully parenthesized rendering; `parse` reads it back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                if c.im == 0.0 && c.re.is_sign_positive() {
                    write!(f, "{:?}", c.re)
                } else if c.re == 0.0 && c.im.is_sign_positive() {
                    write!(f, "{:?}i", c.im)
                } else {
                    write!(f, "({:?}+{:?}i)", c.re, c.im)
                }
            }
            Expr::Var => f.write_str("z"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => {
                let sym = match op {
                    BinOp::Add => '+',
                    BinOp::Sub => '-',
                    BinOp::Mul => '*',
                    BinOp::Div => '/',
                    BinOp::Pow => '^',
                };
                write!(f, "({l}{sym}{r})")
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_jet() {
        let e = parse("z").unwrap();
        assert_eq!(
            e.eval_jet(c(0.3, 0.0)).unwrap(),
            Jet3::variable(c(0.3, 0.0))
        );
    }

    #[test]
    fn koebe_jet_at_origin() {
        // z + 2z^2 + 3z^3 + ... => f''(0) = 4, f'''(0) = 18
        let j = parse("z/(1-z)^2").unwrap().eval_jet(c(0.0, 0.0)).unwrap();
        assert_eq!(
            j,
            Jet3::new(c(0.0, 0.0), c(1.0, 0.0), c(4.0, 0.0), c(18.0, 0.0))
        );
    }

    #[test]
    fn squared_cayley_first_derivative() {
        let j = parse("((1+z)/(1-z))^2")
            .unwrap()
            .eval_jet(c(0.0, 0.0))
            .unwrap();
        assert!((j.d1 - c(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn value_slot_matches_scalar_evaluation() {
        let sources = [
            "((1+z)/(1-z))^0.5",
            "exp(2*z)-z^3",
            "log(1+z/2)*sqrt(2-z)",
            "tan(z/3)/(1+i*z)",
            "(1-z)^(1+2i)",
            "z^z",
        ];
        for src in sources {
            let e = parse(src).unwrap();
            for z0 in [c(0.2, 0.1), c(-0.4, 0.5), c(0.6, -0.3)] {
                let j = e.eval_jet(z0).unwrap();
                let s = e.eval(z0).unwrap();
                assert!(
                    (j.v - s).norm() <= 1e-14 * s.norm().max(1.0),
                    "{src} at {z0}"
                );
            }
        }
    }

    #[test]
    fn negative_base_with_integral_exponent() {
        let e = parse("z^2").unwrap();
        assert_eq!(e.eval(c(-0.5, 0.0)).unwrap(), c(0.25, 0.0));
        assert_eq!(e.eval_jet(c(-0.5, 0.0)).unwrap().d1, c(-1.0, 0.0));
        assert!(matches!(
            parse("z^0.5").unwrap().eval(c(-0.5, 0.0)),
            Err(JetError::BranchCut(_))
        ));
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "((1+z)/(1-z))^0.5",
            "-z^2",
            "2^-1",
            "3+4i",
            "exp(-z)*tan(z)",
            "1e-3*z",
        ] {
            let e = parse(src).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{src} -> {e}");
        }
    }
}
