//! Hamiltonian framings of `x'' = f(x, t)` with `q1 = x`, `q2 = t` and the
//! autonomous completion `H + p2`, integral curves through a particular
//! solution, and the normal variational equation `xi'' = k(t) xi`.
//!
//! Expressions use `x` for `q1`, `t` for `q2` and `p1` for the momentum.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::Q;
use crate::symexpr::{
    differentiate, eval_numeric, from_sum, simplify, substitute, to_sum, total_derivative,
    zero_test, Bindings, Expr, SymError, Var, ZeroMethod,
};
use crate::transform::{system_to_scalar, TransformError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VariationalError {
    #[error("no antiderivative in x for the term {term}")]
    NotIntegrable { term: String },
    #[error("{what} must depend only on {var}, got {expr}")]
    WrongDependence {
        what: &'static str,
        var: &'static str,
        expr: String,
    },
    #[error("{xhat} is not a solution; residual {residual}")]
    NotASolution { xhat: String, residual: String },
    #[error("the normal variational equation has a first-derivative term {0}")]
    NotNormal(String),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// `x'' = f(x, t)` with parameter values and an optional particular
/// solution `x = xhat(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeProblem {
    pub f: Expr,
    pub params: Bindings,
    pub particular_solution: Option<Expr>,
}

/// One of the three Hamiltonian constructions.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "variant")]
pub enum Framing {
    /// `H = p1^2/2 - F(q1, q2)` with `F_x = f`.
    Theorem1 { f: Expr, potential: Expr },
    /// `H = p1^2/2 - (g + a)^2/2 - alpha q1` for `x'' = g_x (g + a) + alpha`.
    Corollary2 { g: Expr, a: Expr, alpha: Expr },
    /// `H = p1^2/2 - (g + a) p1 - (alpha + a_t) q1`, same equation.
    Theorem2 { g: Expr, a: Expr, alpha: Expr },
}

/// `H(q1, q2, p1)`; the completion `H + p2` is implicit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletedHamiltonian {
    pub h: Expr,
}

/// `Gamma(t) = (q1(t), t, p1(t), p2(t))` with `p2 = -H` along the curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralCurve {
    pub q1: Expr,
    pub p1: Expr,
    pub p2: Expr,
}

/// `xi'' = k(t) xi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSolde {
    pub k: Expr,
}

/// Outcome of checking `xhat'' = f(xhat, t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionCheck {
    pub holds: bool,
    pub residual: Expr,
    pub method: ZeroMethod,
    /// Largest relative residual over ten sample times, if evaluable.
    pub max_numeric_residual: Option<f64>,
}

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

fn only_depends_on(e: &Expr, v: Var) -> bool {
    e.vars().iter().all(|w| *w == v)
}

/// Antiderivative in `x` of `f`, term by term, for terms `c(t) x^n` with
/// `n != -1`.
fn antiderivative_x(f: &Expr) -> Result<Expr, VariationalError> {
    let x = Expr::x();
    let mut terms = Vec::new();
    for (mono, c) in to_sum(f) {
        let mut n = Q::zero();
        let mut rest = mono.clone();
        if let Some(e) = rest.remove(&x) {
            n = e;
        }
        let shown = || from_sum(&std::iter::once((mono.clone(), c.clone())).collect());
        if rest.keys().any(|a| a.depends_on(Var::X)) || n == -Q::one() {
            return Err(VariationalError::NotIntegrable {
                term: shown().to_string(),
            });
        }
        let n1 = &n + Q::one();
        rest.insert(x.clone(), n1.clone());
        terms.push(from_sum(&std::iter::once((rest, c / n1)).collect()));
    }
    Ok(simplify(&Expr::add(terms)))
}

/// Numeric parameter values used when an exact check falls back to sampling
/// and some parameters are still symbolic.
fn generic_bindings(e: &Expr, b: &Bindings) -> Bindings {
    let mut out = b.clone();
    for (i, p) in e.params().iter().enumerate() {
        if b.get(p).is_none() {
            out.insert(p, Expr::c(Q::new((3 + 2 * i as i64).into(), 7.into())));
        }
    }
    out
}

pub fn build_framing_thm1(f: &Expr) -> Result<Framing, VariationalError> {
    let potential = antiderivative_x(f)?;
    debug_assert!(zero_test(&(differentiate(&potential, Var::X) - f.clone()), &Bindings::new()).is_zero);
    Ok(Framing::Theorem1 {
        f: f.clone(),
        potential,
    })
}

/// Theorem-1 framing with a given potential, for models whose `F` lies
/// outside the power-rule table. `f = F_x`.
pub fn framing_from_potential(potential: &Expr) -> Framing {
    Framing::Theorem1 {
        f: differentiate(potential, Var::X),
        potential: potential.clone(),
    }
}

fn check_g_a(g: &Expr, a: &Expr) -> Result<(), VariationalError> {
    if !only_depends_on(g, Var::X) {
        return Err(VariationalError::WrongDependence {
            what: "g",
            var: "x",
            expr: g.to_string(),
        });
    }
    if !only_depends_on(a, Var::T) {
        return Err(VariationalError::WrongDependence {
            what: "a",
            var: "t",
            expr: a.to_string(),
        });
    }
    Ok(())
}

pub fn build_framing_cor2(g: &Expr, a: &Expr, alpha: &Expr) -> Result<Framing, VariationalError> {
    check_g_a(g, a)?;
    Ok(Framing::Corollary2 {
        g: g.clone(),
        a: a.clone(),
        alpha: alpha.clone(),
    })
}

pub fn build_framing_thm2(g: &Expr, a: &Expr, alpha: &Expr) -> Result<Framing, VariationalError> {
    check_g_a(g, a)?;
    Ok(Framing::Theorem2 {
        g: g.clone(),
        a: a.clone(),
        alpha: alpha.clone(),
    })
}

impl Framing {
    pub fn name(&self) -> &'static str {
        match self {
            Framing::Theorem1 { .. } => "theorem1",
            Framing::Corollary2 { .. } => "corollary2",
            Framing::Theorem2 { .. } => "theorem2",
        }
    }

    pub fn hamiltonian(&self) -> CompletedHamiltonian {
        let kinetic = Expr::c(half()) * Expr::p1().powi(2);
        let h = match self {
            Framing::Theorem1 { potential, .. } => kinetic - potential.clone(),
            Framing::Corollary2 { g, a, alpha } => Expr::add(vec![
                kinetic,
                -(Expr::c(half()) * (g.clone() + a.clone()).powi(2)),
                -(alpha.clone() * Expr::x()),
            ]),
            Framing::Theorem2 { g, a, alpha } => Expr::add(vec![
                kinetic,
                -((g.clone() + a.clone()) * Expr::p1()),
                -((alpha.clone() + differentiate(a, Var::T)) * Expr::x()),
            ]),
        };
        CompletedHamiltonian { h: simplify(&h) }
    }

    /// The right side `f(x, t)` of the equation this framing encodes.
    pub fn induced_f(&self) -> Expr {
        match self {
            Framing::Theorem1 { f, .. } => f.clone(),
            Framing::Corollary2 { g, a, alpha } | Framing::Theorem2 { g, a, alpha } => simplify(
                &(differentiate(g, Var::X) * (g.clone() + a.clone()) + alpha.clone()),
            ),
        }
    }
}

impl CompletedHamiltonian {
    /// `(q1', p1', p2')` of `H + p2`; `q2' = 1`.
    pub fn field(&self) -> (Expr, Expr, Expr) {
        (
            differentiate(&self.h, Var::P1),
            simplify(&-differentiate(&self.h, Var::X)),
            simplify(&-differentiate(&self.h, Var::T)),
        )
    }

    /// Whether Hamilton's equations give `x'' = f(x, t)`: the total time
    /// derivative of `H_p1` along the flow must equal `f` identically in
    /// `(x, p1, t)`.
    pub fn reproduces(&self, f: &Expr, b: &Bindings) -> bool {
        let (xdot, pdot, _) = self.field();
        let xddot = total_derivative(&xdot, &[(Var::X, xdot.clone()), (Var::P1, pdot)]);
        let diff = xddot - f.clone();
        zero_test(&diff, &generic_bindings(&diff, b)).is_zero
    }
}

/// Checks `xhat'' - f(xhat, t) = 0`, exactly where possible, and in every
/// case numerically at ten sample times (relative `1e-10`).
pub fn verify_particular_solution(f: &Expr, xhat: &Expr, b: &Bindings) -> SolutionCheck {
    let along = Bindings::new().with("x", xhat.clone());
    let fx = substitute(f, &along).and_then(|e| substitute(&e, b));
    let lhs = differentiate(&differentiate(xhat, Var::T), Var::T);
    let Ok(fx) = fx else {
        return SolutionCheck {
            holds: false,
            residual: Expr::zero(),
            method: ZeroMethod::Structural,
            max_numeric_residual: None,
        };
    };
    let residual = simplify(&(lhs.clone() - fx.clone()));
    let verdict = zero_test(&residual, b);
    let mut worst: Option<f64> = None;
    let mut ok = true;
    for i in 0..10 {
        let t = 0.35 + 0.2 * i as f64;
        let (Ok(l), Ok(r)) = (
            eval_numeric(&lhs, b, &[(Var::T, t)]),
            eval_numeric(&fx, b, &[(Var::T, t)]),
        ) else {
            continue;
        };
        let rel = (l - r).abs() / l.abs().max(r.abs()).max(1.0);
        worst = Some(worst.map_or(rel, |w: f64| w.max(rel)));
        ok &= rel <= 1e-10;
    }
    SolutionCheck {
        holds: verdict.is_zero && ok && worst.is_some(),
        residual,
        method: verdict.method,
        max_numeric_residual: worst,
    }
}

fn require_solution(fr: &Framing, xhat: &Expr, b: &Bindings) -> Result<(), VariationalError> {
    let chk = verify_particular_solution(&fr.induced_f(), xhat, b);
    if chk.holds {
        Ok(())
    } else {
        Err(VariationalError::NotASolution {
            xhat: xhat.to_string(),
            residual: chk.residual.to_string(),
        })
    }
}

fn at_curve(e: &Expr, xhat: &Expr, p1: Option<&Expr>, b: &Bindings) -> Result<Expr, VariationalError> {
    let mut along = Bindings::new().with("x", xhat.clone());
    if let Some(p) = p1 {
        along.insert("p1", p.clone());
    }
    let e = substitute(e, &along)?;
    Ok(simplify(&substitute(&e, b)?))
}

/// Momentum along the curve: the inverse of `x' = H_p1` at `x = xhat`.
fn momentum(fr: &Framing, xhat: &Expr, b: &Bindings) -> Result<Expr, VariationalError> {
    let xdot = differentiate(xhat, Var::T);
    Ok(match fr {
        Framing::Theorem1 { .. } | Framing::Corollary2 { .. } => xdot,
        Framing::Theorem2 { g, a, .. } => {
            at_curve(&(xdot + g.clone() + a.clone()), xhat, None, b)?
        }
    })
}

/// The normal variational equation along `x = xhat`, after verifying that
/// `xhat` solves the framing's equation.
///
/// Theorem 1 uses `k = f_x`, Corollary 2 uses `k = g_x^2 + g_xx (g + a)`,
/// and Theorem 2 eliminates the 2x2 block of the variational system,
/// `[[-g_x, 1], [p1 g_xx, g_x]]` along the curve, to one equation.
pub fn nve(fr: &Framing, xhat: &Expr, b: &Bindings) -> Result<TimeSolde, VariationalError> {
    require_solution(fr, xhat, b)?;
    let k = match fr {
        Framing::Theorem1 { f, .. } => at_curve(&differentiate(f, Var::X), xhat, None, b)?,
        Framing::Corollary2 { g, a, .. } => {
            let gx = differentiate(g, Var::X);
            let gxx = differentiate(&gx, Var::X);
            at_curve(&(gx.powi(2) + gxx * (g.clone() + a.clone())), xhat, None, b)?
        }
        Framing::Theorem2 { g, .. } => {
            let p1 = momentum(fr, xhat, b)?;
            let gx = differentiate(g, Var::X);
            let gxx = differentiate(&gx, Var::X);
            let entry = |e: Expr| at_curve(&e, xhat, Some(&p1), b);
            let s = system_to_scalar(
                &entry(-gx.clone())?,
                &Expr::one(),
                &entry(Expr::p1() * gxx)?,
                &entry(gx)?,
                &[],
            )?;
            if !zero_test(&s.damping, b).is_zero {
                return Err(VariationalError::NotNormal(s.damping.to_string()));
            }
            s.stiffness
        }
    };
    Ok(TimeSolde { k })
}

pub fn integral_curve(fr: &Framing, xhat: &Expr, b: &Bindings) -> Result<IntegralCurve, VariationalError> {
    require_solution(fr, xhat, b)?;
    let p1 = momentum(fr, xhat, b)?;
    let h = fr.hamiltonian().h;
    let p2 = at_curve(&-h, xhat, Some(&p1), b)?;
    Ok(IntegralCurve {
        q1: simplify(xhat),
        p1,
        p2,
    })
}

impl IntegralCurve {
    /// Residuals of Hamilton's equations of `H + p2` along the curve are
    /// zero (`q1' = H_p1`, `p1' = -H_x`, `p2' = -H_t`).
    pub fn satisfies(&self, ham: &CompletedHamiltonian, b: &Bindings) -> bool {
        let (xdot, pdot, p2dot) = ham.field();
        let along = Bindings::new()
            .with("x", self.q1.clone())
            .with("p1", self.p1.clone());
        [
            (&self.q1, xdot),
            (&self.p1, pdot),
            (&self.p2, p2dot),
        ]
        .into_iter()
        .all(|(comp, rhs)| {
            let Ok(rhs) = substitute(&rhs, &along).and_then(|e| substitute(&e, b)) else {
                return false;
            };
            let diff = differentiate(comp, Var::T) - rhs;
            zero_test(&diff, &generic_bindings(&diff, b)).is_zero
        })
    }
}
