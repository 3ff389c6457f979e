//! A small expression language over a single real variable `u`.
//!
//! Expressions are parsed from text, evaluated with explicit domain
//! checks, and differentiated symbolically to any order. Nodes are shared
//! through [`Arc`] so derivative trees reuse the subtrees they were built
//! from, and every expression is `Send + Sync`.

mod diff;
mod parse;

use std::fmt;
use std::sync::Arc;

pub use diff::differentiate;
pub use parse::{parse_expression, ParseError, ParseErrorKind};

/// Named mathematical constants accepted by the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConst {
    Pi,
    E,
}

impl NamedConst {
    pub fn value(self) -> f64 {
        match self {
            NamedConst::Pi => std::f64::consts::PI,
            NamedConst::E => std::f64::consts::E,
        }
    }

    fn name(self) -> &'static str {
        match self {
            NamedConst::Pi => "pi",
            NamedConst::E => "e",
        }
    }
}

/// Unary functions of the expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Asin,
    Acos,
    Atan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 13] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Asin,
        Func::Acos,
        Func::Atan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Asin => "asin",
            Func::Acos => "acos",
            Func::Atan => "atan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }

    fn apply(self, x: f64) -> Result<f64, EvalError> {
        let domain = |ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(EvalError::Domain {
                    op: self.name(),
                    arg: x,
                })
            }
        };
        let y = match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Asin => {
                domain((-1.0..=1.0).contains(&x))?;
                x.asin()
            }
            Func::Acos => {
                domain((-1.0..=1.0).contains(&x))?;
                x.acos()
            }
            Func::Atan => x.atan(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.tanh(),
            Func::Exp => x.exp(),
            Func::Log => {
                domain(x > 0.0)?;
                x.ln()
            }
            Func::Sqrt => {
                domain(x >= 0.0)?;
                x.sqrt()
            }
            Func::Abs => x.abs(),
        };
        finite(self.name(), x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn apply(self, a: f64, b: f64) -> Result<f64, EvalError> {
        let y = match self {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            BinOp::Div => {
                if b == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                a / b
            }
            BinOp::Pow => a.powf(b),
        };
        finite(self.symbol(), a, y)
    }
}

fn finite(op: &'static str, arg: f64, y: f64) -> Result<f64, EvalError> {
    if y.is_finite() {
        Ok(y)
    } else {
        Err(EvalError::Domain { op, arg })
    }
}

/// Evaluation failure at a particular point.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("domain error in `{op}` (argument {arg})")]
    Domain { op: &'static str, arg: f64 },
    #[error("division by zero")]
    DivisionByZero,
}

/// Expression tree over the variable `u`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Named(NamedConst),
    Var,
    Neg(Arc<Expr>),
    Call(Func, Arc<Expr>),
    Binary(BinOp, Arc<Expr>, Arc<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn eval(&self, u: f64) -> Result<f64, EvalError> {
        match self {
            Expr::Const(c) => Ok(*c),
            Expr::Named(n) => Ok(n.value()),
            Expr::Var => Ok(u),
            Expr::Neg(a) => Ok(-a.eval(u)?),
            Expr::Call(f, a) => f.apply(a.eval(u)?),
            Expr::Binary(op, a, b) => op.apply(a.eval(u)?, b.eval(u)?),
        }
    }

    /// True when the expression does not mention `u`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Named(_) => true,
            Expr::Var => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_constant(),
            Expr::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Number of nodes in the tree, counting shared subtrees once per use.
    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Named(_) | Expr::Var => 1,
            Expr::Neg(a) | Expr::Call(_, a) => 1 + a.node_count(),
            Expr::Binary(_, a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    // Smart constructors used by the differentiator. They fold constants
    // and drop additive zeros and multiplicative ones.

    pub(crate) fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => Arc::unwrap_or_clone(inner),
            other => Expr::Neg(Arc::new(other)),
        }
    }

    pub(crate) fn call(f: Func, a: Expr) -> Expr {
        if let Some(c) = a.as_const() {
            if let Ok(v) = f.apply(c) {
                return Expr::Const(v);
            }
        }
        Expr::Call(f, Arc::new(a))
    }

    pub(crate) fn binary(op: BinOp, a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if let Ok(v) = op.apply(x, y) {
                return Expr::Const(v);
            }
        }
        let (ca, cb) = (a.as_const(), b.as_const());
        match op {
            BinOp::Add if ca == Some(0.0) => b,
            BinOp::Add | BinOp::Sub if cb == Some(0.0) => a,
            BinOp::Sub if ca == Some(0.0) => Expr::neg(b),
            BinOp::Mul if ca == Some(0.0) || cb == Some(0.0) => Expr::Const(0.0),
            BinOp::Mul if ca == Some(1.0) => b,
            BinOp::Mul | BinOp::Div if cb == Some(1.0) => a,
            BinOp::Mul if ca == Some(-1.0) => Expr::neg(b),
            BinOp::Mul if cb == Some(-1.0) => Expr::neg(a),
            BinOp::Div if ca == Some(0.0) => Expr::Const(0.0),
            BinOp::Pow if cb == Some(1.0) => a,
            BinOp::Pow if cb == Some(0.0) => Expr::Const(1.0),
            _ => Expr::Binary(op, Arc::new(a), Arc::new(b)),
        }
    }

    pub(crate) fn add(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinOp::Add, a, b)
    }
    pub(crate) fn sub(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinOp::Sub, a, b)
    }
    pub(crate) fn mul(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinOp::Mul, a, b)
    }
    pub(crate) fn div(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinOp::Div, a, b)
    }
    pub(crate) fn pow(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinOp::Pow, a, b)
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized form. Parsing the printed text and printing
    /// again reproduces it exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => {
                write!(f, "(-{:?})", -c)
            }
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Named(n) => f.write_str(n.name()),
            Expr::Var => f.write_str("u"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expression(s)
    }
}
