use super::{AlgSolde, TransformError};
use crate::algebra::{q, qi, Poly, RatFunc, Q};
use crate::symexpr::{
    differentiate, eval_numeric, lower_to_ratfunc, Bindings, Expr, Func, RewriteRules, RuleKind,
    Var,
};

/// A Hamiltonian change of the independent variable `tau = tau(t)`: `tau`
/// solves `tau'^2 / 2 + V(tau) = 0`, so `alpha = tau'^2 = -2 V` is a
/// rational function of `tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangeOfVariables {
    pub name: String,
    pub tau_of_t: Expr,
    pub alpha: RatFunc,
    pub vhat: RatFunc,
    pub rules: RewriteRules,
}

fn poly(c: &[Q]) -> RatFunc {
    RatFunc::from_poly(Poly::from_coeffs(c.to_vec()))
}

impl ChangeOfVariables {
    fn build(name: &str, tau_of_t: Expr, alpha: RatFunc, kind: RuleKind) -> Self {
        ChangeOfVariables {
            name: name.to_string(),
            tau_of_t,
            vhat: alpha.scale(&q(-1, 2)),
            alpha,
            rules: RewriteRules::new(kind),
        }
    }

    fn scaled_t(eps: &Q) -> Expr {
        Expr::c(eps.clone()) * Expr::t()
    }

    /// `tau = cos(eps t)`, `alpha = eps^2 (1 - tau^2)`.
    pub fn cosine(eps: Q) -> Self {
        let e2 = &eps * &eps;
        Self::build(
            "cos",
            Expr::func_unchecked(Func::Cos, Self::scaled_t(&eps)),
            poly(&[e2.clone(), qi(0), -e2]),
            RuleKind::Cos { eps },
        )
    }

    /// `tau = sin(eps t)`, `alpha = eps^2 (1 - tau^2)`.
    pub fn sine(eps: Q) -> Self {
        let e2 = &eps * &eps;
        Self::build(
            "sin",
            Expr::func_unchecked(Func::Sin, Self::scaled_t(&eps)),
            poly(&[e2.clone(), qi(0), -e2]),
            RuleKind::Sin { eps },
        )
    }

    /// `tau = sinh(eps t)`, `alpha = eps^2 (1 + tau^2)`.
    pub fn sinh(eps: Q) -> Self {
        let e2 = &eps * &eps;
        Self::build(
            "sinh",
            Expr::func_unchecked(Func::Sinh, Self::scaled_t(&eps)),
            poly(&[e2.clone(), qi(0), e2]),
            RuleKind::Sinh { eps },
        )
    }

    /// `tau = cosh(eps t)`, `alpha = eps^2 (tau^2 - 1)`.
    pub fn cosh(eps: Q) -> Self {
        let e2 = &eps * &eps;
        Self::build(
            "cosh",
            Expr::func_unchecked(Func::Cosh, Self::scaled_t(&eps)),
            poly(&[-e2.clone(), qi(0), e2]),
            RuleKind::Cosh { eps },
        )
    }

    /// `tau = exp(lambda t)`, `alpha = lambda^2 tau^2`.
    pub fn exponential(lambda: Q) -> Self {
        let l2 = &lambda * &lambda;
        Self::build(
            "exp",
            Expr::func_unchecked(Func::Exp, Self::scaled_t(&lambda)),
            poly(&[qi(0), qi(0), l2]),
            RuleKind::Exp { lambda },
        )
    }

    /// `tau = eps t`, `alpha = eps^2`.
    pub fn affine(eps: Q) -> Self {
        let e2 = &eps * &eps;
        Self::build("affine", Self::scaled_t(&eps), RatFunc::constant(e2), RuleKind::Affine { eps })
    }

    /// `tau = sqrt(t)`, `alpha = 1 / (4 tau^2)`.
    pub fn sqrt() -> Self {
        let alpha = RatFunc::new(Poly::one(), Poly::monomial(qi(4), 2)).expect("nonzero");
        Self::build("sqrt", Expr::t().sqrt(), alpha, RuleKind::Power { l: 2 })
    }

    /// Registry lookup. `scale` is `eps` for the trigonometric, hyperbolic
    /// and affine changes and `lambda` for the exponential one; it is
    /// ignored by `sqrt`.
    pub fn by_name(name: &str, scale: Q) -> Result<Self, TransformError> {
        Ok(match name {
            "cos" | "cosine" => Self::cosine(scale),
            "sin" | "sine" => Self::sine(scale),
            "sinh" => Self::sinh(scale),
            "cosh" => Self::cosh(scale),
            "exp" | "exponential" => Self::exponential(scale),
            "affine" => Self::affine(scale),
            "sqrt" => Self::sqrt(),
            _ => return Err(TransformError::UnknownChange(name.to_string())),
        })
    }

    pub const NAMES: [&'static str; 7] = ["cos", "sin", "sinh", "cosh", "exp", "affine", "sqrt"];

    /// `tau(t)` in doubles.
    pub fn tau_at(&self, t: f64) -> f64 {
        self.rules.tau_at(t)
    }

    /// `dtau/dt` in doubles.
    pub fn tau_dot_at(&self, t: f64) -> Result<f64, TransformError> {
        let d = differentiate(&self.tau_of_t, Var::T);
        Ok(eval_numeric(&d, &Bindings::new(), &[(Var::T, t)])?)
    }
}

/// True iff `alpha + 2 V` is constant and `alpha(tau(t)) = tau'(t)^2` at ten
/// sample times to relative `1e-10`. (`alpha'/alpha` is rational by
/// construction.)
pub fn check_hamiltonian_change(ch: &ChangeOfVariables) -> bool {
    let energy = &ch.alpha + &ch.vhat.scale(&qi(2));
    if !energy.derivative().is_zero() {
        return false;
    }
    ch.rules.sample_points(10).into_iter().all(|t| {
        let Ok(td) = ch.tau_dot_at(t) else {
            return false;
        };
        let a = ch.alpha.eval_f64(ch.tau_at(t));
        let b = td * td;
        a.is_finite() && (a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1e-300)
    })
}

/// `xi'' = k(t) xi` in the variable `tau`: `xi'' + (alpha'/(2 alpha)) xi'
/// - (f / alpha) xi = 0` where `f` is `k` rewritten by the change's table.
pub fn algebrize(k: &Expr, ch: &ChangeOfVariables) -> Result<AlgSolde, TransformError> {
    let f = lower_to_ratfunc(k, &ch.rules).map_err(TransformError::NotAlgebrizable)?;
    let p = ch.alpha.derivative().checked_div(&ch.alpha.scale(&qi(2)))?;
    let q = -&f.checked_div(&ch.alpha)?;
    Ok(AlgSolde { p, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{parse, substitute};

    fn rf(num: &[Q], den: &[Q]) -> RatFunc {
        RatFunc::new(Poly::from_coeffs(num.to_vec()), Poly::from_coeffs(den.to_vec())).unwrap()
    }

    #[test]
    fn registry_changes_are_hamiltonian() {
        for name in ChangeOfVariables::NAMES {
            for s in [qi(1), q(1, 2), qi(-2)] {
                let ch = ChangeOfVariables::by_name(name, s.clone()).unwrap();
                assert!(check_hamiltonian_change(&ch), "{name} {s}");
            }
        }
        assert!(ChangeOfVariables::by_name("tan", qi(1)).is_err());
    }

    #[test]
    fn wrong_alpha_is_rejected() {
        let mut ch = ChangeOfVariables::cosine(qi(1));
        ch.alpha = poly(&[qi(1), qi(0), qi(1)]);
        ch.vhat = ch.alpha.scale(&q(-1, 2));
        assert!(!check_hamiltonian_change(&ch));
    }

    #[test]
    fn true_anomaly_nve() {
        let k = parse("(e*cos(t) + 8)/(e*cos(t) + 1)").unwrap();
        let k = substitute(&k, &Bindings::new().with_q("e", q(1, 2))).unwrap();
        let s = algebrize(&k, &ChangeOfVariables::cosine(qi(1))).unwrap();
        // -tau/(1 - tau^2) and -(tau/2 + 8)/((tau/2 + 1)(1 - tau^2))
        assert_eq!(s.p, rf(&[qi(0), qi(-1)], &[qi(1), qi(0), qi(-1)]));
        let den = &Poly::from_coeffs(vec![qi(1), q(1, 2)]) * &Poly::from_coeffs(vec![qi(1), qi(0), qi(-1)]);
        let expected = RatFunc::new(Poly::from_coeffs(vec![qi(-8), q(-1, 2)]), den).unwrap();
        assert_eq!(s.q, expected);
    }

    #[test]
    fn approximate_model_nve() {
        let k = parse("-24*(1/2)*cos(t) - 8").unwrap();
        let s = algebrize(&k, &ChangeOfVariables::cosine(qi(1))).unwrap();
        assert_eq!(s.q, rf(&[qi(8), qi(12)], &[qi(1), qi(0), qi(-1)]));
    }

    #[test]
    fn square_root_change() {
        let k = parse("3/(4*t^2) + 2/sqrt(t)").unwrap();
        let s = algebrize(&k, &ChangeOfVariables::sqrt()).unwrap();
        assert_eq!(s.p, rf(&[qi(-1)], &[qi(0), qi(1)]));
        assert_eq!(s.q, rf(&[qi(-3), qi(0), qi(0), qi(-8)], &[qi(0), qi(0), qi(1)]));
    }

    #[test]
    fn exponential_hill() {
        // k e^(-eps t) with tau = e^(-eps t): P = 1/tau, Q = -k/(eps^2 tau)
        let k = parse("exp(-t)").unwrap();
        let s = algebrize(&k, &ChangeOfVariables::exponential(qi(-1))).unwrap();
        assert_eq!(s.p, rf(&[qi(1)], &[qi(0), qi(1)]));
        assert_eq!(s.q, rf(&[qi(-1)], &[qi(0), qi(1)]));
        assert!(matches!(
            algebrize(&parse("t*exp(-t)").unwrap(), &ChangeOfVariables::exponential(qi(-1))),
            Err(TransformError::NotAlgebrizable(_))
        ));
    }
}
