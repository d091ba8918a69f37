use serde::Serialize;

use super::TransformError;
use crate::symexpr::{simplify, total_derivative, zero_test, Bindings, Expr, Var};

/// `xi'' = damping * xi' + stiffness * xi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarSecondOrder {
    pub damping: Expr,
    pub stiffness: Expr,
}

/// Eliminates `xi_2` from `xi_1' = a xi_1 + b xi_2`, `xi_2' = c xi_1 + d xi_2`
/// via `xi_2 = (xi_1' - a xi_1) / b`, giving
/// `xi'' - (a + d + b'/b) xi' - (a' + b c - a d - a b'/b) xi = 0`.
///
/// Time derivatives are total derivatives along `field` (pairs `(v, v')`);
/// pass an empty field when the entries are functions of `t` alone.
pub fn system_to_scalar(
    a: &Expr,
    b: &Expr,
    c: &Expr,
    d: &Expr,
    field: &[(Var, Expr)],
) -> Result<ScalarSecondOrder, TransformError> {
    if zero_test(b, &Bindings::new()).is_zero {
        return Err(TransformError::ZeroB);
    }
    let dt = |e: &Expr| total_derivative(e, field);
    let bdot_over_b = simplify(&(dt(b) / b.clone()));
    let damping = simplify(&Expr::add(vec![a.clone(), d.clone(), bdot_over_b.clone()]));
    let stiffness = simplify(&Expr::add(vec![
        dt(a),
        b.clone() * c.clone(),
        -(a.clone() * d.clone()),
        -(a.clone() * bdot_over_b),
    ]));
    Ok(ScalarSecondOrder { damping, stiffness })
}
