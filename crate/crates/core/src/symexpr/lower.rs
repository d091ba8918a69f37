use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::eval::{eval_numeric, Bindings};
use super::simplify::{to_sum, Mono};
use super::{Expr, Func, SymError, Var};
use crate::algebra::{format_q, RatFunc, Q};

/// Rewrite table attached to a change of variables `tau = tau(t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleKind {
    /// `tau = cos(eps t)`: `cos(m eps t)` and `sin(m eps t)` are rewritten
    /// through `sin^2 = 1 - tau^2`; an odd total power of `sin` is rejected.
    Cos { eps: Q },
    /// `tau = sin(eps t)`, with `cos^2 = 1 - tau^2`.
    Sin { eps: Q },
    /// `tau = sinh(eps t)`, with `cosh^2 = 1 + tau^2`.
    Sinh { eps: Q },
    /// `tau = cosh(eps t)`, with `sinh^2 = tau^2 - 1`.
    Cosh { eps: Q },
    /// `tau = exp(lambda t)`: `exp(m lambda t) = tau^m`, and `sinh`, `cosh`
    /// of multiples of `lambda t` expand into powers of `tau`.
    Exp { lambda: Q },
    /// `tau = eps t`.
    Affine { eps: Q },
    /// `t = tau^l`, so `tau = t^(1/l)`.
    Power { l: u32 },
    /// The given variable is already the independent variable.
    Identity(Var),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRules {
    pub kind: RuleKind,
}

impl RewriteRules {
    pub fn new(kind: RuleKind) -> Self {
        RewriteRules { kind }
    }

    /// The variable the rules eliminate.
    pub fn source(&self) -> Var {
        match self.kind {
            RuleKind::Identity(v) => v,
            _ => Var::T,
        }
    }

    /// `tau(t)` in doubles.
    pub fn tau_at(&self, t: f64) -> f64 {
        let f = |q: &Q| q.to_f64().unwrap_or(f64::NAN);
        match &self.kind {
            RuleKind::Cos { eps } => (f(eps) * t).cos(),
            RuleKind::Sin { eps } => (f(eps) * t).sin(),
            RuleKind::Sinh { eps } => (f(eps) * t).sinh(),
            RuleKind::Cosh { eps } => (f(eps) * t).cosh(),
            RuleKind::Exp { lambda } => (f(lambda) * t).exp(),
            RuleKind::Affine { eps } => f(eps) * t,
            RuleKind::Power { l } => t.powf(1.0 / *l as f64),
            RuleKind::Identity(_) => t,
        }
    }

    /// Deterministic sample values of the source variable, inside the
    /// domain where `tau(t)` is a local diffeomorphism.
    pub fn sample_points(&self, n: usize) -> Vec<f64> {
        let scale = match &self.kind {
            RuleKind::Cos { eps }
            | RuleKind::Sin { eps }
            | RuleKind::Sinh { eps }
            | RuleKind::Cosh { eps }
            | RuleKind::Affine { eps } => 1.0 / eps.abs().to_f64().unwrap_or(1.0),
            RuleKind::Exp { lambda } => 1.0 / lambda.abs().to_f64().unwrap_or(1.0),
            RuleKind::Power { .. } | RuleKind::Identity(_) => 1.0,
        };
        let limit = match &self.kind {
            // keep sin(eps t) monotone on (-pi/2, pi/2) and cos on (0, pi)
            RuleKind::Sin { .. } => 1.4,
            RuleKind::Cos { .. } => 3.0,
            _ => 2.9,
        };
        (0..n)
            .map(|i| {
                let u = 0.1 + (limit - 0.1) * ((i as f64 + 0.5) / n as f64);
                // irrational offset keeps samples off rational poles
                (u + 0.013_579_f64.sqrt() * 0.01) * scale
            })
            .collect()
    }
}

/// Element `a + b w` of `Q(tau)[w] / (w^2 - g)`, where `w` is the partner
/// function of the rule (e.g. `sin(eps t)` for the cosine change).
#[derive(Clone, Debug)]
struct Ext {
    a: RatFunc,
    b: RatFunc,
}

struct Lowerer<'r> {
    rules: &'r RewriteRules,
    /// `w^2` in terms of `tau`; zero for rules without a partner.
    g: RatFunc,
    /// First function atom that contributed a `w` component.
    witness: Option<String>,
}

fn not_rational(e: impl std::fmt::Display) -> SymError {
    SymError::NotRational {
        subtree: e.to_string(),
    }
}

fn tau() -> RatFunc {
    RatFunc::x()
}

fn small_int(p: &Q) -> Option<i32> {
    if p.is_integer() {
        p.to_integer().to_i32()
    } else {
        None
    }
}

impl Ext {
    fn plain(a: RatFunc) -> Self {
        Ext { a, b: RatFunc::zero() }
    }

    fn w() -> Self {
        Ext {
            a: RatFunc::zero(),
            b: RatFunc::one(),
        }
    }

    fn add(&self, o: &Ext) -> Ext {
        Ext {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    fn neg(&self) -> Ext {
        Ext {
            a: -&self.a,
            b: -&self.b,
        }
    }

    fn mul(&self, o: &Ext, g: &RatFunc) -> Ext {
        let bb = &self.b * &o.b;
        Ext {
            a: &(&self.a * &o.a) + &(&bb * g),
            b: &(&self.a * &o.b) + &(&self.b * &o.a),
        }
    }

    fn inv(&self, g: &RatFunc) -> Option<Ext> {
        let norm = &(&self.a * &self.a) - &(&(&self.b * &self.b) * g);
        let ninv = norm.inv().ok()?;
        Some(Ext {
            a: &self.a * &ninv,
            b: -&(&self.b * &ninv),
        })
    }

    fn powi(&self, n: i32, g: &RatFunc) -> Option<Ext> {
        let base = if n < 0 { self.inv(g)? } else { self.clone() };
        let mut acc = Ext::plain(RatFunc::one());
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base, g);
        }
        Some(acc)
    }
}

impl<'r> Lowerer<'r> {
    fn new(rules: &'r RewriteRules) -> Self {
        let t2 = &tau() * &tau();
        let g = match rules.kind {
            RuleKind::Cos { .. } | RuleKind::Sin { .. } => &RatFunc::one() - &t2,
            RuleKind::Sinh { .. } => &RatFunc::one() + &t2,
            RuleKind::Cosh { .. } => &t2 - &RatFunc::one(),
            _ => RatFunc::zero(),
        };
        Lowerer {
            rules,
            g,
            witness: None,
        }
    }

    fn expr(&mut self, e: &Expr) -> Result<Ext, SymError> {
        let mut acc = Ext::plain(RatFunc::zero());
        for (m, c) in to_sum(e) {
            let term = self.mono(&m)?;
            let scaled = Ext {
                a: term.a.scale(&c),
                b: term.b.scale(&c),
            };
            acc = acc.add(&scaled);
        }
        Ok(acc)
    }

    fn mono(&mut self, m: &Mono) -> Result<Ext, SymError> {
        let mut acc = Ext::plain(RatFunc::one());
        for (atom, p) in m {
            let f = self.atom_power(atom, p)?;
            acc = acc.mul(&f, &self.g);
        }
        Ok(acc)
    }

    fn atom_power(&mut self, atom: &Expr, p: &Q) -> Result<Ext, SymError> {
        let shown = || Expr::Pow(Box::new(atom.clone()), p.clone());
        let div0 = || SymError::Domain(format!("division by zero after rewriting {}", shown()));
        match atom {
            Expr::Var(v) => {
                if let (RuleKind::Power { l }, Var::T) = (&self.rules.kind, v) {
                    let n = p * Q::from_integer((*l).into());
                    let n = small_int(&n).ok_or_else(|| not_rational(shown()))?;
                    return tau().pow(n).map(Ext::plain).map_err(|_| div0());
                }
                let n = small_int(p).ok_or_else(|| not_rational(shown()))?;
                let base = self.var_image(*v).ok_or_else(|| not_rational(atom))?;
                base.pow(n).map(Ext::plain).map_err(|_| div0())
            }
            Expr::Param(name) => Err(SymError::UnboundSymbol(name.clone())),
            Expr::Const(_) => Err(not_rational(shown())),
            Expr::Func(k, arg) => {
                let n = small_int(p).ok_or_else(|| not_rational(shown()))?;
                let base = self.func(*k, arg, atom)?;
                if !base.b.is_zero() && n.is_odd() && self.witness.is_none() {
                    self.witness = Some(shown().to_string());
                }
                base.powi(n, &self.g).ok_or_else(div0)
            }
            _ => {
                let n = small_int(p).ok_or_else(|| not_rational(shown()))?;
                let base = self.expr(atom)?;
                base.powi(n, &self.g).ok_or_else(div0)
            }
        }
    }

    fn var_image(&self, v: Var) -> Option<RatFunc> {
        match (&self.rules.kind, v) {
            (RuleKind::Identity(w), _) if *w == v => Some(tau()),
            (RuleKind::Affine { eps }, Var::T) => Some(tau().scale(&eps.recip())),
            _ => None,
        }
    }

    /// `(c1, c0)` with `arg = c1 * t + c0`.
    fn affine_parts(arg: &Expr) -> Result<(Q, Q), SymError> {
        let mut c1 = Q::zero();
        let mut c0 = Q::zero();
        for (m, c) in to_sum(arg) {
            if m.is_empty() {
                c0 = c;
            } else if m.len() == 1 && m.get(&Expr::t()).is_some_and(|e| e.is_one()) {
                c1 = c;
            } else {
                return Err(not_rational(arg));
            }
        }
        Ok((c1, c0))
    }

    fn func(&mut self, k: Func, arg: &Expr, atom: &Expr) -> Result<Ext, SymError> {
        let (c1, c0) = Self::affine_parts(arg).map_err(|_| not_rational(atom))?;
        if !c0.is_zero() {
            return Err(not_rational(atom));
        }
        let multiple = |unit: &Q| -> Result<i64, SymError> {
            let m = &c1 / unit;
            if m.is_integer() {
                m.to_integer().to_i64().ok_or_else(|| not_rational(atom))
            } else {
                Err(not_rational(atom))
            }
        };
        let trig = |hyper: bool, tau_is_even: bool, m: i64, g: &RatFunc| -> (Ext, Ext) {
            // (even, odd) function of m theta: (cos, sin) or (cosh, sinh)
            let (e1, o1) = if tau_is_even {
                (Ext::plain(tau()), Ext::w())
            } else {
                (Ext::w(), Ext::plain(tau()))
            };
            let sign = if hyper { Q::one() } else { -Q::one() };
            let mut c = Ext::plain(RatFunc::one());
            let mut s = Ext::plain(RatFunc::zero());
            for _ in 0..m.unsigned_abs() {
                let nc = c.mul(&e1, g).add(&{
                    let t = s.mul(&o1, g);
                    Ext { a: t.a.scale(&sign), b: t.b.scale(&sign) }
                });
                let ns = s.mul(&e1, g).add(&c.mul(&o1, g));
                c = nc;
                s = ns;
            }
            if m < 0 {
                s = s.neg();
            }
            (c, s)
        };
        let g = self.g.clone();
        match (&self.rules.kind, k) {
            (RuleKind::Cos { eps }, Func::Cos | Func::Sin)
            | (RuleKind::Sin { eps }, Func::Cos | Func::Sin) => {
                let m = multiple(eps)?;
                let tau_is_cos = matches!(self.rules.kind, RuleKind::Cos { .. });
                let (c, s) = trig(false, tau_is_cos, m, &g);
                Ok(if k == Func::Cos { c } else { s })
            }
            (RuleKind::Cosh { eps } | RuleKind::Sinh { eps }, Func::Cosh | Func::Sinh | Func::Exp) => {
                let m = multiple(eps)?;
                let tau_is_cosh = matches!(self.rules.kind, RuleKind::Cosh { .. });
                let (c, s) = trig(true, tau_is_cosh, m, &g);
                Ok(match k {
                    Func::Cosh => c,
                    Func::Sinh => s,
                    _ => c.add(&s),
                })
            }
            (RuleKind::Exp { lambda }, Func::Exp | Func::Sinh | Func::Cosh) => {
                let m = multiple(lambda)?;
                let m = i32::try_from(m).map_err(|_| not_rational(atom))?;
                let up = tau().pow(m).expect("tau^m");
                let down = tau().pow(-m).expect("tau^-m");
                let half = Q::new(1.into(), 2.into());
                Ok(Ext::plain(match k {
                    Func::Exp => up,
                    Func::Sinh => (&up - &down).scale(&half),
                    _ => (&up + &down).scale(&half),
                }))
            }
            _ => Err(not_rational(atom)),
        }
    }
}

/// Lowers `f` to a rational function of `tau` under `rules`, then checks the
/// result numerically against `f` at five sample points.
///
/// The tree is first brought to the canonical sum form, so powers of sums
/// with fractional exponents must simplify away (e.g. `t^(1/2)` under
/// `t = tau^2`); anything left over is reported as [`SymError::NotRational`]
/// with the offending subtree.
pub fn lower_to_ratfunc(f: &Expr, rules: &RewriteRules) -> Result<RatFunc, SymError> {
    let mut lw = Lowerer::new(rules);
    let ext = lw.expr(f)?;
    if !ext.b.is_zero() {
        let w = lw.witness.clone().unwrap_or_else(|| f.to_string());
        return Err(not_rational(w));
    }
    let r = ext.a;
    spot_check(f, &r, rules)?;
    Ok(r)
}

fn spot_check(f: &Expr, r: &RatFunc, rules: &RewriteRules) -> Result<(), SymError> {
    let b = Bindings::new();
    let src = rules.source();
    for t0 in rules.sample_points(5) {
        let tau0 = rules.tau_at(t0);
        let den = r.den().eval_f64(tau0);
        if den.abs() < 1e-9 {
            continue;
        }
        let Ok(lhs) = eval_numeric(f, &b, &[(src, t0)]) else {
            continue;
        };
        let rhs = r.eval_f64(tau0);
        if (lhs - rhs).abs() > 1e-10 * lhs.abs().max(rhs.abs()).max(1.0) {
            return Err(SymError::Domain(format!(
                "lowering self-check failed at {}={t0}: {lhs} vs {rhs}",
                src.name()
            )));
        }
    }
    Ok(())
}

impl std::fmt::Display for RewriteRules {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let fq = format_q;
        match &self.kind {
            RuleKind::Cos { eps } => write!(f, "tau = cos({} t); sin^2 -> 1 - tau^2", fq(eps)),
            RuleKind::Sin { eps } => write!(f, "tau = sin({} t); cos^2 -> 1 - tau^2", fq(eps)),
            RuleKind::Sinh { eps } => write!(f, "tau = sinh({} t); cosh^2 -> 1 + tau^2", fq(eps)),
            RuleKind::Cosh { eps } => write!(f, "tau = cosh({} t); sinh^2 -> tau^2 - 1", fq(eps)),
            RuleKind::Exp { lambda } => write!(f, "tau = exp({} t); exp(m {} t) -> tau^m", fq(lambda), fq(lambda)),
            RuleKind::Affine { eps } => write!(f, "tau = {} t", fq(eps)),
            RuleKind::Power { l } => write!(f, "t -> tau^{l}"),
            RuleKind::Identity(v) => write!(f, "{} -> tau", v.name()),
        }
    }
}
