//! Symbolic expressions in the variables `x`, `t`, `tau` and the momentum
//! `p1`, with named parameters.
//!
//! Trees are immutable values. [`simplify`] maps a tree to a canonical sum of
//! monomials; it is exact on Laurent polynomials in the atoms (variables,
//! parameters, transcendental functions and powers of sums) but does not
//! cancel common factors between a sum and a power of a sum. Zero tests that
//! need more fall back to exact lowering or to sampling, and report which
//! method decided (see [`zero_test`]).
//!
//! Fractional powers are merged as for positive reals: `(x^2)^(1/2) = x`.

mod diff;
mod eval;
mod lower;
mod parse;
mod render;
mod simplify;
mod zero;

use std::ops;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::Q;

pub use diff::{derivative_raw, differentiate, total_derivative};
pub(crate) use simplify::{from_sum, to_sum};
pub use eval::{eval_numeric, substitute, Bindings};
pub use lower::{lower_to_ratfunc, RewriteRules, RuleKind};
pub use parse::parse;
pub use simplify::simplify;
pub use zero::{equivalent, zero_test, ZeroMethod, ZeroVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Var {
    X,
    T,
    Tau,
    /// Momentum conjugate to `x`; written `p1`.
    P1,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::T => "t",
            Var::Tau => "tau",
            Var::P1 => "p1",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        match s {
            "x" => Some(Var::X),
            "t" => Some(Var::T),
            "tau" => Some(Var::Tau),
            "p1" => Some(Var::P1),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sinh,
    Cosh,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        match s {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "sinh" => Some(Func::Sinh),
            "cosh" => Some(Func::Cosh),
            _ => None,
        }
    }

    pub fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Exp => v.exp(),
            Func::Sinh => v.sinh(),
            Func::Cosh => v.cosh(),
        }
    }
}

/// Expression tree. `Add` and `Mul` are n-ary; transcendental arguments are
/// affine in a single variable, which [`Expr::func`] enforces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Const(Q),
    Var(Var),
    Param(String),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Neg(Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Q),
    Func(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unbound symbol {0}")]
    UnboundSymbol(String),
    #[error("division by zero while evaluating {0}")]
    PoleEvaluation(String),
    #[error("not a rational function after rewriting: {subtree}")]
    NotRational { subtree: String },
    #[error("cyclic bindings through {0}")]
    CyclicBindings(String),
}

impl Expr {
    pub fn c(v: Q) -> Expr {
        Expr::Const(v)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(Q::from_integer(n.into()))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    pub fn x() -> Expr {
        Expr::Var(Var::X)
    }

    pub fn t() -> Expr {
        Expr::Var(Var::T)
    }

    pub fn tau() -> Expr {
        Expr::Var(Var::Tau)
    }

    pub fn p1() -> Expr {
        Expr::Var(Var::P1)
    }

    pub fn param(name: &str) -> Expr {
        Expr::Param(name.to_string())
    }

    pub fn add(terms: Vec<Expr>) -> Expr {
        match terms.len() {
            0 => Expr::zero(),
            1 => terms.into_iter().next().unwrap(),
            _ => Expr::Add(terms),
        }
    }

    pub fn mul(factors: Vec<Expr>) -> Expr {
        match factors.len() {
            0 => Expr::one(),
            1 => factors.into_iter().next().unwrap(),
            _ => Expr::Mul(factors),
        }
    }

    pub fn pow(self, e: Q) -> Expr {
        Expr::Pow(Box::new(self), e)
    }

    pub fn powi(self, n: i64) -> Expr {
        self.pow(Q::from_integer(n.into()))
    }

    pub fn sqrt(self) -> Expr {
        self.pow(Q::new(1.into(), 2.into()))
    }

    /// Builds `kind(arg)`, rejecting arguments that are not affine in a
    /// single variable.
    pub fn func(kind: Func, arg: Expr) -> Result<Expr, SymError> {
        if !arg.is_affine() {
            return Err(SymError::Domain(format!(
                "argument of {} must be affine in one variable, got {}",
                kind.name(),
                arg
            )));
        }
        Ok(Expr::Func(kind, Box::new(arg)))
    }

    /// `kind(arg)` for arguments known to be affine.
    pub fn func_unchecked(kind: Func, arg: Expr) -> Expr {
        debug_assert!(arg.is_affine());
        Expr::Func(kind, Box::new(arg))
    }

    pub fn cos(arg: Expr) -> Result<Expr, SymError> {
        Expr::func(Func::Cos, arg)
    }

    pub fn as_const(&self) -> Option<&Q> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_const_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    /// Polynomial degree in the variables jointly, or `None` when the tree is
    /// not polynomial in them. Parameters count as constants.
    pub fn var_degree(&self) -> Option<u64> {
        match self {
            Expr::Const(_) | Expr::Param(_) => Some(0),
            Expr::Var(_) => Some(1),
            Expr::Add(ts) => ts.iter().try_fold(0, |m, t| t.var_degree().map(|d| m.max(d))),
            Expr::Mul(fs) => fs.iter().try_fold(0, |s, f| f.var_degree().map(|d| s + d)),
            Expr::Neg(a) => a.var_degree(),
            Expr::Div(a, b) => match b.var_degree()? {
                0 => a.var_degree(),
                _ => None,
            },
            Expr::Pow(b, e) => match b.var_degree()? {
                0 => Some(0),
                d if e.is_integer() && *e >= Q::zero() => {
                    Some(d * u64::try_from(e.to_integer()).ok()?)
                }
                _ => None,
            },
            Expr::Func(_, a) => match a.var_degree()? {
                0 => Some(0),
                _ => None,
            },
        }
    }

    pub fn is_affine(&self) -> bool {
        self.var_degree().is_some_and(|d| d <= 1) && self.vars().len() <= 1
    }

    /// Variables occurring in the tree.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Var(v) = e {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
        });
        out.sort();
        out
    }

    /// Parameter names occurring in the tree, sorted.
    pub fn params(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Param(p) = e {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        });
        out.sort();
        out
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.vars().contains(&v)
    }

    fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().for_each(|x| x.visit(f)),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Func(_, a) => a.visit(f),
            Expr::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Expr::Const(_) | Expr::Var(_) | Expr::Param(_) => {}
        }
    }

    /// First subtree satisfying `pred`, in pre-order.
    pub(crate) fn find(&self, pred: &impl Fn(&Expr) -> bool) -> Option<&Expr> {
        if pred(self) {
            return Some(self);
        }
        match self {
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().find_map(|x| x.find(pred)),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Func(_, a) => a.find(pred),
            Expr::Div(a, b) => a.find(pred).or_else(|| b.find(pred)),
            Expr::Const(_) | Expr::Var(_) | Expr::Param(_) => None,
        }
    }
}

impl From<Q> for Expr {
    fn from(v: Q) -> Self {
        Expr::Const(v)
    }
}

impl From<i64> for Expr {
    fn from(v: i64) -> Self {
        Expr::int(v)
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(vec![self, rhs])
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Add(vec![self, -rhs])
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(vec![self, rhs])
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub(crate) fn is_nonneg_int(e: &Q) -> bool {
    e.is_integer() && *e >= Q::zero()
}
