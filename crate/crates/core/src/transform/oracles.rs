use super::{AlgSolde, ChangeOfVariables, ReducedOde, TransformError};
use crate::ode::{integrate, Control, Options};
use crate::symexpr::{eval_numeric, Bindings, Expr, Var};

fn numeric<E: std::fmt::Display>(e: E) -> TransformError {
    TransformError::Numeric(e.to_string())
}

/// Numerical check of the first-derivative removal on `[tau0, tau1]`.
///
/// Integrates `xi'' + P xi' + Q xi = 0`, the multiplier `m' = -P m / 2` and
/// `zeta'' = r zeta` together from matched data (`zeta = xi / m`), for two
/// initial conditions, and returns the largest relative deviation
/// `|zeta - xi/m| / max(|zeta|, 1e-3)` over all accepted steps. A sign error
/// in `r` makes this O(1).
pub fn substitution_residual(
    s: &AlgSolde,
    red: &ReducedOde,
    tau0: f64,
    tau1: f64,
) -> Result<f64, TransformError> {
    let opts = Options::with_tol(1e-13);
    let mut worst: f64 = 0.0;
    for (x0, v0) in [(1.0, 0.3), (-0.2, 1.0)] {
        let p0 = s.p.eval_f64(tau0);
        let y0 = [x0, v0, 1.0, x0, v0 + p0 * x0 / 2.0];
        let rhs = |tau: f64, y: &[f64; 5]| -> Result<[f64; 5], String> {
            let (p, q, r) = (s.p.eval_f64(tau), s.q.eval_f64(tau), red.r.eval_f64(tau));
            if !(p.is_finite() && q.is_finite() && r.is_finite()) {
                return Err(format!("singular point at tau = {tau}"));
            }
            Ok([y[1], -p * y[1] - q * y[0], -p * y[2] / 2.0, y[4], r * y[3]])
        };
        integrate(rhs, tau0, y0, tau1, &opts, |st| {
            let y = st.y1;
            let dev = (y[3] - y[0] / y[2]).abs() / y[3].abs().max(1e-3);
            worst = worst.max(dev);
            Control::Continue
        })
        .map_err(numeric)?;
    }
    Ok(worst)
}

/// Numerical check that `xi(t) = u(tau(t))` maps solutions of
/// `xi'' = k(t) xi` to solutions of the algebraic form, on `[t0, t1]`
/// (where `tau` must be monotone). Three initial conditions are compared at
/// four times; returns the largest relative deviation of `xi`.
pub fn algebrization_residual(
    k: &Expr,
    b: &Bindings,
    ch: &ChangeOfVariables,
    s: &AlgSolde,
    t0: f64,
    t1: f64,
) -> Result<f64, TransformError> {
    let opts = Options::with_tol(1e-13);
    let kt = |t: f64| eval_numeric(k, b, &[(Var::T, t)]);
    let time = |t: f64, y: &[f64; 2]| -> Result<[f64; 2], String> {
        let kv = kt(t).map_err(|e| e.to_string())?;
        Ok([y[1], kv * y[0]])
    };
    let alg = |tau: f64, y: &[f64; 2]| -> Result<[f64; 2], String> {
        let (p, q) = (s.p.eval_f64(tau), s.q.eval_f64(tau));
        if !(p.is_finite() && q.is_finite()) {
            return Err(format!("singular point at tau = {tau}"));
        }
        Ok([y[1], -p * y[1] - q * y[0]])
    };
    let tau0 = ch.tau_at(t0);
    let td0 = ch.tau_dot_at(t0)?;
    let mut worst: f64 = 0.0;
    for ic in [[1.0, 0.0], [0.0, 1.0], [0.6, -0.8]] {
        for j in 1..=4 {
            let tj = t0 + (t1 - t0) * j as f64 / 4.0;
            let (_, xt, _) = integrate(time, t0, ic, tj, &opts, |_| Control::Continue).map_err(numeric)?;
            let u0 = [ic[0], ic[1] / td0];
            let (_, ut, _) = integrate(alg, tau0, u0, ch.tau_at(tj), &opts, |_| Control::Continue)
                .map_err(numeric)?;
            worst = worst.max((xt[0] - ut[0]).abs() / xt[0].abs().max(1e-3));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};
    use crate::symexpr::{parse, substitute};
    use crate::transform::{algebrize, remove_first_derivative};

    #[test]
    fn reduction_oracle_separates_signs() {
        let k = substitute(
            &parse("(e*cos(t) + 8)/(e*cos(t) + 1)").unwrap(),
            &Bindings::new().with_q("e", q(1, 2)),
        )
        .unwrap();
        let s = algebrize(&k, &ChangeOfVariables::cosine(qi(1))).unwrap();
        let (red, _) = remove_first_derivative(&s);
        assert!(substitution_residual(&s, &red, -0.4, 0.6).unwrap() < 1e-10);
        let wrong = ReducedOde { r: -&red.r };
        assert!(substitution_residual(&s, &wrong, -0.4, 0.6).unwrap() > 1e-3);
    }

    #[test]
    fn algebrization_oracle() {
        let k = parse("-12*cos(t) - 8").unwrap();
        let ch = ChangeOfVariables::cosine(qi(1));
        let s = algebrize(&k, &ch).unwrap();
        let res = algebrization_residual(&k, &Bindings::new(), &ch, &s, 0.3, 2.6).unwrap();
        assert!(res < 1e-8, "{res}");
        let ch = ChangeOfVariables::sqrt();
        let k = parse("3/(4*t^2) + 2/sqrt(t)").unwrap();
        let s = algebrize(&k, &ch).unwrap();
        let res = algebrization_residual(&k, &Bindings::new(), &ch, &s, 0.5, 2.0).unwrap();
        assert!(res < 1e-8, "{res}");
    }
}
