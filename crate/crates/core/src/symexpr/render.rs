use std::fmt;

use num_traits::Signed;

use super::Expr;
use crate::algebra::format_q;

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 5;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(_) => SUM,
        Expr::Mul(_) | Expr::Div(..) => PRODUCT,
        Expr::Neg(_) => UNARY,
        Expr::Pow(..) => 4,
        Expr::Const(c) if !c.is_integer() => PRODUCT,
        Expr::Const(c) if c.is_negative() => UNARY,
        Expr::Const(_) | Expr::Var(_) | Expr::Param(_) | Expr::Func(..) => ATOM,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, ctx: u8) -> fmt::Result {
    if prec(e) < ctx {
        f.write_str("(")?;
        write_bare(f, e)?;
        f.write_str(")")
    } else {
        write_bare(f, e)
    }
}

fn write_bare(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e {
        Expr::Const(c) => f.write_str(&format_q(c)),
        Expr::Var(v) => f.write_str(v.name()),
        Expr::Param(p) => f.write_str(p),
        Expr::Add(ts) => {
            for (i, t) in ts.iter().enumerate() {
                match t {
                    _ if i == 0 => write_at(f, t, PRODUCT)?,
                    Expr::Neg(a) => {
                        f.write_str(" - ")?;
                        write_at(f, a, PRODUCT)?;
                    }
                    Expr::Const(c) if c.is_negative() => {
                        f.write_str(" - ")?;
                        f.write_str(&format_q(&-c))?;
                    }
                    _ => {
                        f.write_str(" + ")?;
                        write_at(f, t, PRODUCT)?;
                    }
                }
            }
            Ok(())
        }
        Expr::Mul(fs) => {
            for (i, x) in fs.iter().enumerate() {
                if i > 0 {
                    f.write_str("*")?;
                }
                write_at(f, x, UNARY)?;
            }
            Ok(())
        }
        Expr::Div(a, b) => {
            write_at(f, a, PRODUCT)?;
            f.write_str("/")?;
            write_at(f, b, UNARY)
        }
        Expr::Neg(a) => {
            f.write_str("-")?;
            write_at(f, a, UNARY)
        }
        Expr::Pow(b, e) => {
            write_at(f, b, ATOM)?;
            if e.is_integer() && !e.is_negative() {
                write!(f, "^{}", format_q(e))
            } else {
                write!(f, "^({})", format_q(e))
            }
        }
        Expr::Func(k, a) => {
            write!(f, "{}(", k.name())?;
            write_at(f, a, SUM)?;
            f.write_str(")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, SUM)
    }
}
