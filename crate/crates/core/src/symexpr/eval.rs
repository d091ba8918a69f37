use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{Expr, SymError, Var};
use crate::algebra::Q;

/// Simultaneous substitution map from parameter or variable names to
/// expressions.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Bindings {
    map: BTreeMap<String, Expr>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, e: Expr) -> Self {
        self.insert(name, e);
        self
    }

    pub fn with_q(self, name: &str, v: Q) -> Self {
        self.with(name, Expr::Const(v))
    }

    pub fn insert(&mut self, name: &str, e: Expr) {
        self.map.insert(name.to_string(), e);
    }

    pub fn get(&self, name: &str) -> Option<&Expr> {
        self.map.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Expr)> {
        self.map.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Bindings `b` then `self`, applied as one substitution.
    pub fn merged(&self, other: &Bindings) -> Bindings {
        let mut map = self.map.clone();
        map.extend(other.map.iter().map(|(k, v)| (k.clone(), v.clone())));
        Bindings { map }
    }

    fn symbols(e: &Expr) -> Vec<String> {
        let mut out: Vec<String> = e.params();
        out.extend(e.vars().into_iter().map(|v| v.name().to_string()));
        out
    }

    /// Rejects chains `a -> ... -> a`. Identity bindings `a := a` are allowed.
    pub fn check_acyclic(&self) -> Result<(), SymError> {
        fn visit(
            b: &Bindings,
            n: &str,
            stack: &mut Vec<String>,
            done: &mut BTreeSet<String>,
        ) -> Result<(), SymError> {
            if done.contains(n) {
                return Ok(());
            }
            if stack.iter().any(|s| s == n) {
                return Err(SymError::CyclicBindings(n.to_string()));
            }
            if let Some(e) = b.map.get(n) {
                if !matches!(e, Expr::Param(p) if p == n)
                    && !matches!(e, Expr::Var(v) if v.name() == n)
                {
                    stack.push(n.to_string());
                    for s in Bindings::symbols(e) {
                        visit(b, &s, stack, done)?;
                    }
                    stack.pop();
                }
            }
            done.insert(n.to_string());
            Ok(())
        }
        let mut done = BTreeSet::new();
        for n in self.map.keys() {
            visit(self, n, &mut Vec::new(), &mut done)?;
        }
        Ok(())
    }
}

/// Replaces every bound parameter and variable simultaneously.
pub fn substitute(e: &Expr, b: &Bindings) -> Result<Expr, SymError> {
    b.check_acyclic()?;
    subst(e, b)
}

fn subst(e: &Expr, b: &Bindings) -> Result<Expr, SymError> {
    Ok(match e {
        Expr::Const(_) => e.clone(),
        Expr::Var(v) => b.get(v.name()).cloned().unwrap_or_else(|| e.clone()),
        Expr::Param(p) => b.get(p).cloned().unwrap_or_else(|| e.clone()),
        Expr::Add(ts) => Expr::Add(ts.iter().map(|t| subst(t, b)).collect::<Result<_, _>>()?),
        Expr::Mul(fs) => Expr::Mul(fs.iter().map(|f| subst(f, b)).collect::<Result<_, _>>()?),
        Expr::Neg(a) => -subst(a, b)?,
        Expr::Div(x, y) => subst(x, b)? / subst(y, b)?,
        Expr::Pow(x, p) => subst(x, b)?.pow(p.clone()),
        Expr::Func(k, a) => Expr::func(*k, subst(a, b)?)?,
    })
}

/// Evaluates in doubles. Variables are looked up in `point` first, then in
/// `b`; parameters in `b`.
pub fn eval_numeric(e: &Expr, b: &Bindings, point: &[(Var, f64)]) -> Result<f64, SymError> {
    b.check_acyclic()?;
    let v = eval(e, b, point)?;
    if v.is_nan() {
        return Err(SymError::Domain(format!("{e} is not real at {point:?}")));
    }
    Ok(v)
}

fn eval(e: &Expr, b: &Bindings, point: &[(Var, f64)]) -> Result<f64, SymError> {
    Ok(match e {
        Expr::Const(c) => c.to_f64().unwrap_or(f64::NAN),
        Expr::Var(v) => match point.iter().find(|(w, _)| w == v) {
            Some((_, x)) => *x,
            None => match b.get(v.name()) {
                Some(x) if x != e => eval(x, b, point)?,
                _ => return Err(SymError::UnboundSymbol(v.name().to_string())),
            },
        },
        Expr::Param(p) => match b.get(p) {
            Some(x) if x != e => eval(x, b, point)?,
            _ => return Err(SymError::UnboundSymbol(p.clone())),
        },
        Expr::Add(ts) => ts.iter().map(|t| eval(t, b, point)).sum::<Result<f64, _>>()?,
        Expr::Mul(fs) => fs
            .iter()
            .map(|f| eval(f, b, point))
            .product::<Result<f64, _>>()?,
        Expr::Neg(a) => -eval(a, b, point)?,
        Expr::Div(x, y) => {
            let d = eval(y, b, point)?;
            if d == 0.0 {
                return Err(SymError::PoleEvaluation(e.to_string()));
            }
            eval(x, b, point)? / d
        }
        Expr::Pow(x, p) => {
            let base = eval(x, b, point)?;
            pow_f64(base, p).ok_or_else(|| {
                if base == 0.0 {
                    SymError::PoleEvaluation(e.to_string())
                } else {
                    SymError::Domain(format!("{e} is not real at {point:?}"))
                }
            })?
        }
        Expr::Func(k, a) => k.apply(eval(a, b, point)?),
    })
}

fn pow_f64(base: f64, p: &Q) -> Option<f64> {
    if base == 0.0 && p.is_negative() {
        return None;
    }
    if p.is_integer() {
        let n = p.to_integer().to_i32()?;
        return Some(base.powi(n));
    }
    let pf = p.to_f64()?;
    if base < 0.0 {
        if p.denom().is_odd() {
            let mag = (-base).powf(pf);
            return Some(if p.numer().is_odd() { -mag } else { mag });
        }
        return None;
    }
    if p.denom() == &2.into() && !p.numer().is_zero() {
        // sqrt is correctly rounded, powf is not
        let n = p.numer().to_i32()?;
        return Some(base.sqrt().powi(n));
    }
    Some(base.powf(pf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qi;
    use crate::symexpr::{parse, simplify};

    #[test]
    fn painleve_solution_substitution() {
        let k = parse("6*x^2 + t").unwrap();
        let b = Bindings::new().with("x", parse("-1/t").unwrap());
        let s = substitute(&k, &b).unwrap();
        assert_eq!(simplify(&s), simplify(&parse("6/t^2 + t").unwrap()));
    }

    #[test]
    fn identity_binding() {
        let e = parse("x^2 + alpha*t").unwrap();
        let b = Bindings::new().with("x", Expr::x()).with("alpha", Expr::param("alpha"));
        assert_eq!(substitute(&e, &b).unwrap(), e);
    }

    #[test]
    fn cycles_rejected() {
        let b = Bindings::new()
            .with("a", Expr::param("b"))
            .with("b", Expr::param("a") + Expr::one());
        assert!(matches!(b.check_acyclic(), Err(SymError::CyclicBindings(_))));
        let b = Bindings::new().with("a", Expr::param("a") + Expr::one());
        assert!(b.check_acyclic().is_err());
    }

    #[test]
    fn numeric_values() {
        let e = parse("(x+1)/(x-1)").unwrap();
        let b = Bindings::new();
        assert_eq!(eval_numeric(&e, &b, &[(Var::X, 3.0)]).unwrap(), 2.0);
        assert_eq!(eval_numeric(&Expr::t(), &b, &[(Var::T, 4.0)]).unwrap(), 4.0);
        assert!(matches!(
            eval_numeric(&parse("1/x").unwrap(), &b, &[(Var::X, 0.0)]),
            Err(SymError::PoleEvaluation(_))
        ));
        assert!(matches!(
            eval_numeric(&parse("alpha*x").unwrap(), &b, &[(Var::X, 1.0)]),
            Err(SymError::UnboundSymbol(_))
        ));
        let chained = Bindings::new().with("a", parse("2*b").unwrap()).with_q("b", qi(3));
        assert_eq!(eval_numeric(&parse("a + x").unwrap(), &chained, &[(Var::X, 1.0)]).unwrap(), 7.0);
    }

    #[test]
    fn substitution_keeps_arguments_affine() {
        let e = parse("cos(t)").unwrap();
        let b = Bindings::new().with("t", parse("x^2").unwrap());
        assert!(matches!(substitute(&e, &b), Err(SymError::Domain(_))));
    }
}
