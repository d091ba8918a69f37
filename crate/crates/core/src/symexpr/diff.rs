use num_traits::One;

use super::simplify::simplify;
use super::{Expr, Func, Var};

/// Derivative by the structural rules, without simplification.
pub fn derivative_raw(e: &Expr, v: Var) -> Expr {
    match e {
        Expr::Const(_) | Expr::Param(_) => Expr::zero(),
        Expr::Var(w) => Expr::int(i64::from(*w == v)),
        Expr::Add(ts) => Expr::Add(ts.iter().map(|t| derivative_raw(t, v)).collect()),
        Expr::Mul(fs) => Expr::Add(
            (0..fs.len())
                .map(|i| {
                    let mut g = fs.clone();
                    g[i] = derivative_raw(&fs[i], v);
                    Expr::Mul(g)
                })
                .collect(),
        ),
        Expr::Neg(a) => -derivative_raw(a, v),
        Expr::Div(a, b) => {
            let num = Expr::Add(vec![
                Expr::Mul(vec![derivative_raw(a, v), (**b).clone()]),
                -Expr::Mul(vec![(**a).clone(), derivative_raw(b, v)]),
            ]);
            num / (**b).clone().powi(2)
        }
        Expr::Pow(b, p) => Expr::Mul(vec![
            Expr::Const(p.clone()),
            (**b).clone().pow(p - crate::algebra::Q::one()),
            derivative_raw(b, v),
        ]),
        Expr::Func(k, a) => {
            let inner = derivative_raw(a, v);
            let arg = (**a).clone();
            let outer = match k {
                Func::Sin => Expr::func_unchecked(Func::Cos, arg),
                Func::Cos => -Expr::func_unchecked(Func::Sin, arg),
                Func::Exp => Expr::func_unchecked(Func::Exp, arg),
                Func::Sinh => Expr::func_unchecked(Func::Cosh, arg),
                Func::Cosh => Expr::func_unchecked(Func::Sinh, arg),
            };
            Expr::Mul(vec![outer, inner])
        }
    }
}

/// Exact derivative, simplified.
pub fn differentiate(e: &Expr, v: Var) -> Expr {
    simplify(&derivative_raw(e, v))
}

/// Derivative in `t` along a vector field: `de/dt = e_t + sum e_v * v_dot`.
/// Variables without an entry in `field` are treated as constants.
pub fn total_derivative(e: &Expr, field: &[(Var, Expr)]) -> Expr {
    let mut terms = vec![derivative_raw(e, Var::T)];
    for (v, vdot) in field {
        if *v != Var::T && e.depends_on(*v) {
            terms.push(derivative_raw(e, *v) * vdot.clone());
        }
    }
    simplify(&Expr::add(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{eval_numeric, parse, simplify, substitute, Bindings};

    fn d(src: &str, v: Var) -> Expr {
        differentiate(&parse(src).unwrap(), v)
    }

    #[test]
    fn total_derivative_along_flow() {
        // x' = p1, p1' = -x: d/dt (x^2 + p1^2) = 0
        let e = parse("x^2 + p1^2 + t").unwrap();
        let field = [(Var::X, Expr::p1()), (Var::P1, -Expr::x())];
        assert_eq!(total_derivative(&e, &field), Expr::one());
    }

    #[test]
    fn painleve_coefficient() {
        assert_eq!(d("2*x^3 + t*x + alpha", Var::X), simplify(&parse("6*x^2 + t").unwrap()));
        assert_eq!(d("x^2", Var::X), simplify(&parse("2*x").unwrap()));
    }

    #[test]
    fn true_anomaly_coefficient_at_zero() {
        let f = parse("-(e*cos(t) + (1/4 + x^2)^(-3/2))/(1 + e*cos(t))*x").unwrap();
        let fx = differentiate(&f, Var::X);
        let at0 = simplify(&substitute(&fx, &Bindings::new().with("x", Expr::zero())).unwrap());
        let expected = simplify(&parse("-(e*cos(t) + 8)/(1 + e*cos(t))").unwrap());
        assert_eq!(at0, expected);
        // finite differences at a few points, e = 1/2
        let b = Bindings::new().with_q("e", crate::algebra::q(1, 2));
        for (x0, t0) in [(0.3, 0.7), (-0.8, 2.1), (1.3, -1.0), (0.05, 3.0), (2.0, 0.2)] {
            let h = 1e-5;
            let at = |x: f64| eval_numeric(&f, &b, &[(Var::X, x), (Var::T, t0)]).unwrap();
            let fd = (at(x0 + h) - at(x0 - h)) / (2.0 * h);
            let ex = eval_numeric(&fx, &b, &[(Var::X, x0), (Var::T, t0)]).unwrap();
            assert!((fd - ex).abs() <= 1e-8 * ex.abs().max(1.0), "{fd} vs {ex}");
        }
    }

    #[test]
    fn transcendental_chain_rule() {
        assert_eq!(d("sin(2*t)", Var::T), simplify(&parse("2*cos(2*t)").unwrap()));
        assert_eq!(d("exp(-eps*t)", Var::T), simplify(&parse("-eps*exp(-eps*t)").unwrap()));
        assert_eq!(d("cosh(t)", Var::T), simplify(&parse("sinh(t)").unwrap()));
    }
}
