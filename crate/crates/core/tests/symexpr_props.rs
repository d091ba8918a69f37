use nahs_core::algebra::{q, Q};
use nahs_core::symexpr::{
    derivative_raw, eval_numeric, lower_to_ratfunc, parse, simplify, Bindings, Expr, Func,
    RewriteRules, RuleKind, Var,
};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-5i64..=5, 1i64..=3).prop_map(|(n, d)| Expr::c(q(n, d))),
        Just(Expr::x()),
        Just(Expr::t()),
        Just(Expr::param("a")),
    ]
}

fn func_node() -> impl Strategy<Value = Expr> {
    (
        prop_oneof![Just(Func::Sin), Just(Func::Cos), Just(Func::Exp)],
        1i64..=3,
        -2i64..=2,
    )
        .prop_map(|(k, c1, c0)| Expr::func_unchecked(k, Expr::int(c1) * Expr::t() + Expr::int(c0)))
}

/// Random trees of depth at most 5.
fn tree() -> impl Strategy<Value = Expr> {
    prop_oneof![leaf(), func_node()].prop_recursive(4, 32, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::Add),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::Mul),
            inner.clone().prop_map(|e| -e),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / b),
            (inner, prop_oneof![Just(q(2, 1)), Just(q(3, 1)), Just(q(-1, 1)), Just(q(1, 2))])
                .prop_map(|(b, p)| b.pow(p)),
        ]
    })
}

fn env() -> Bindings {
    Bindings::new().with_q("a", q(3, 7))
}

fn at(e: &Expr, x: f64, t: f64) -> Option<f64> {
    eval_numeric(e, &env(), &[(Var::X, x), (Var::T, t)])
        .ok()
        .filter(|v| v.is_finite() && v.abs() < 1e6)
}

/// Five-point central difference in `x`.
fn fd_x(e: &Expr, x: f64, t: f64) -> Option<f64> {
    let h = 1e-3;
    let f = |k: f64| at(e, x + k * h, t);
    Some((-f(2.0)? + 8.0 * f(1.0)? - 8.0 * f(-1.0)? + f(-2.0)?) / (12.0 * h))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parse_render_roundtrip(e in tree()) {
        let first = parse(&e.to_string());
        prop_assume!(first.is_ok());
        let first = first.unwrap();
        let again = parse(&first.to_string()).unwrap();
        prop_assert_eq!(&again, &first, "rendered {}", first);
    }

    #[test]
    fn derivative_is_linear(a in tree(), b in tree()) {
        let lhs = simplify(&derivative_raw(&(a.clone() + b.clone()), Var::X));
        let rhs = simplify(&(derivative_raw(&a, Var::X) + derivative_raw(&b, Var::X)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_rule(a in tree(), b in tree()) {
        let lhs = simplify(&derivative_raw(&(a.clone() * b.clone()), Var::X));
        let rhs = simplify(
            &(derivative_raw(&a, Var::X) * b.clone() + a.clone() * derivative_raw(&b, Var::X)),
        );
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_matches_finite_differences(
        e in tree(),
        x in 0.4f64..2.0,
        t in 0.4f64..2.0,
    ) {
        let d = derivative_raw(&e, Var::X);
        if let (Some(exact), Some(approx)) = (at(&d, x, t), fd_x(&e, x, t)) {
            prop_assume!(exact.abs() < 1e4);
            prop_assert!(close(exact, approx, 1e-6), "{}: {} vs {}", e, exact, approx);
        }
    }

    #[test]
    fn lowering_agrees_with_evaluation(
        coeffs in prop::collection::vec((-4i64..=4, 1i64..=3, 0usize..=3, 0usize..=1), 1..=4),
        den_shift in 2i64..=5,
    ) {
        // sum of c * cos(t)^i * sin(t)^(2j), over (cos(t) + den_shift)
        let mut terms = Vec::new();
        for (n, d, i, j) in coeffs {
            let c = Expr::cos(Expr::t()).unwrap().powi(i as i64);
            let s = Expr::func_unchecked(Func::Sin, Expr::t()).powi(2 * j as i64);
            terms.push(Expr::c(q(n, d)) * c * s);
        }
        let f = Expr::add(terms) / (Expr::cos(Expr::t()).unwrap() + Expr::int(den_shift));
        let rules = RewriteRules::new(RuleKind::Cos { eps: Q::from_integer(1.into()) });
        let r = lower_to_ratfunc(&f, &rules).unwrap();
        for k in 0..10 {
            let t0 = 0.1 + 0.29 * k as f64;
            let lhs = eval_numeric(&f, &Bindings::new(), &[(Var::T, t0)]).unwrap();
            let rhs = r.eval_f64(rules.tau_at(t0));
            prop_assert!(close(lhs, rhs, 1e-10), "{} at {}: {} vs {}", f, t0, lhs, rhs);
        }
    }
}
