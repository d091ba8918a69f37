use num_traits::{Signed, Zero};

use super::{Expr, Func, SymError, Var};
use crate::algebra::{parse_q, rational_root, Q};

/// Parses the expression grammar: binary `+ - * / ^` (with `^`
/// right-associative), unary `-`, the functions `sin cos exp sinh cosh
/// sqrt`, the variables `x t tau p1`, and any other identifier as a
/// parameter. Numbers are integers or finite decimals; `p/q` is an ordinary
/// division that constant folding turns into a rational.
pub fn parse(input: &str) -> Result<Expr, SymError> {
    let mut p = Parser { src: input, pos: 0 };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> SymError {
        SymError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, SymError> {
        let mut terms = vec![self.product()?];
        loop {
            if self.eat('+') {
                terms.push(self.product()?);
            } else if self.eat('-') {
                terms.push(fold_neg(self.product()?));
            } else {
                break;
            }
        }
        Ok(fold_add(terms))
    }

    fn product(&mut self) -> Result<Expr, SymError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = fold_mul(vec![acc, rhs]);
            } else if self.eat('/') {
                let rhs = self.unary()?;
                acc = fold_div(acc, rhs);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, SymError> {
        if self.eat('-') {
            return Ok(fold_neg(self.unary()?));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, SymError> {
        let base = self.primary()?;
        if self.eat('^') {
            let at = self.pos;
            let ex = self.unary()?;
            let Expr::Const(e) = ex else {
                return Err(SymError::Syntax {
                    pos: at,
                    msg: "exponent must be a rational constant".into(),
                });
            };
            return Ok(fold_pow(base, e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, SymError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.ident(),
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr, SymError> {
        let start = self.pos;
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_digit() || c == '.' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = &self.src[start..self.pos];
        parse_q(text).map(Expr::Const).map_err(|_| SymError::Syntax {
            pos: start,
            msg: format!("bad number {text:?}"),
        })
    }

    fn ident(&mut self) -> Result<Expr, SymError> {
        let start = self.pos;
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let name = &self.src[start..self.pos];
        if self.peek() == Some('(') {
            self.pos += 1;
            let arg = self.sum()?;
            if !self.eat(')') {
                return Err(self.err("expected ')'"));
            }
            if name == "sqrt" {
                return Ok(fold_pow(arg, Q::new(1.into(), 2.into())));
            }
            let Some(f) = Func::from_name(name) else {
                return Err(SymError::Syntax {
                    pos: start,
                    msg: format!("unknown function {name:?}"),
                });
            };
            return Expr::func(f, arg);
        }
        Ok(match Var::from_name(name) {
            Some(v) => Expr::Var(v),
            None => Expr::Param(name.to_string()),
        })
    }
}

fn fold_neg(e: Expr) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(-c),
        e => Expr::Neg(Box::new(e)),
    }
}

fn fold_add(terms: Vec<Expr>) -> Expr {
    if terms.len() == 1 {
        return terms.into_iter().next().unwrap();
    }
    if terms.iter().all(|t| matches!(t, Expr::Const(_))) {
        return Expr::Const(terms.iter().filter_map(Expr::as_const).sum());
    }
    let mut flat = Vec::with_capacity(terms.len());
    for t in terms {
        match t {
            Expr::Add(inner) => flat.extend(inner),
            t => flat.push(t),
        }
    }
    Expr::Add(flat)
}

fn fold_mul(factors: Vec<Expr>) -> Expr {
    if factors.iter().all(|t| matches!(t, Expr::Const(_))) {
        return Expr::Const(factors.iter().filter_map(Expr::as_const).product());
    }
    let mut flat = Vec::with_capacity(factors.len());
    for f in factors {
        match f {
            Expr::Mul(inner) => flat.extend(inner),
            f => flat.push(f),
        }
    }
    Expr::Mul(flat)
}

fn fold_div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) if !y.is_zero() => Expr::Const(x / y),
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

/// Exact `c^e` when it is rational.
pub(crate) fn const_pow(c: &Q, e: &Q) -> Option<Q> {
    if c.is_zero() {
        return (e.is_positive()).then(Q::zero);
    }
    let n: i32 = e.numer().try_into().ok()?;
    let d: u32 = e.denom().try_into().ok()?;
    let base = if n < 0 { c.recip() } else { c.clone() };
    let p = num_traits::pow(base, n.unsigned_abs() as usize);
    rational_root(&p, d)
}

fn fold_pow(base: Expr, e: Q) -> Expr {
    if let Expr::Const(c) = &base {
        if let Some(v) = const_pow(c, &e) {
            return Expr::Const(v);
        }
    }
    Expr::Pow(Box::new(base), e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    #[test]
    fn painleve_right_side() {
        let e = parse("2*x^3 + t*x + alpha").unwrap();
        assert_eq!(
            e,
            Expr::Add(vec![
                Expr::Mul(vec![Expr::int(2), Expr::x().powi(3)]),
                Expr::Mul(vec![Expr::t(), Expr::x()]),
                Expr::param("alpha"),
            ])
        );
    }

    #[test]
    fn inverse_cubic_right_side() {
        let e = parse("-(1/(4*x^3)) - t/x^2 + alpha").unwrap();
        let Expr::Add(ts) = &e else { panic!("{e:?}") };
        assert_eq!(ts.len(), 3);
        assert_eq!(
            ts[0],
            -(Expr::one() / Expr::Mul(vec![Expr::int(4), Expr::x().powi(3)]))
        );
    }

    #[test]
    fn non_affine_argument() {
        assert!(matches!(parse("sin(x*t)"), Err(SymError::Domain(_))));
        assert!(matches!(parse("cos(t^2)"), Err(SymError::Domain(_))));
        assert!(parse("cos(eps*t + 1/2)").is_ok());
    }

    #[test]
    fn constants_fold() {
        assert_eq!(parse("3/6").unwrap(), Expr::Const(q(1, 2)));
        assert_eq!(parse("-2^2").unwrap(), Expr::Const(qi(-4)));
        assert_eq!(parse("(1/4)^(-3/2)").unwrap(), Expr::Const(qi(8)));
        assert_eq!(parse("0.25").unwrap(), Expr::Const(q(1, 4)));
        assert_eq!(parse("sqrt(t)").unwrap(), Expr::t().sqrt());
        assert_eq!(parse("2^3^2").unwrap(), Expr::Const(qi(512)));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse("x +"), Err(SymError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("x^t"), Err(SymError::Syntax { .. })));
        assert!(matches!(parse("foo(x)"), Err(SymError::Syntax { .. })));
        assert!(matches!(parse("(x"), Err(SymError::Syntax { .. })));
        assert!(matches!(parse("x $"), Err(SymError::Syntax { .. })));
    }
}
