use num_integer::Integer;
use serde::Serialize;

use super::eval::{eval_numeric, substitute, Bindings};
use super::lower::{lower_to_ratfunc, RewriteRules, RuleKind};
use super::simplify::{from_sum, simplify, to_sum};
use super::{Expr, Var};

/// How a zero test was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZeroMethod {
    /// The canonical form is the constant 0, or a nonzero rational function.
    Structural,
    /// Exact lowering to a rational function after `v = tau^L`.
    ExactLowering,
    /// Floating-point evaluation at deterministic sample points.
    NumericSampling { points: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ZeroVerdict {
    pub is_zero: bool,
    pub method: ZeroMethod,
}

const SAMPLES: usize = 12;

/// Decides `e == 0`. Parameters must be bound (by `b`) for the numeric
/// fallback; the exact stages do not need them.
///
/// Stages, in order: canonical simplification; for expressions in one
/// variable without transcendental functions, exact lowering with
/// `v = tau^L` where `L` clears every exponent denominator; otherwise
/// sampling at positive points with relative tolerance `1e-9`.
pub fn zero_test(e: &Expr, b: &Bindings) -> ZeroVerdict {
    let e = match substitute(e, b) {
        Ok(e) => simplify(&e),
        Err(_) => simplify(e),
    };
    if e.is_const_zero() {
        return ZeroVerdict {
            is_zero: true,
            method: ZeroMethod::Structural,
        };
    }
    if let Some(v) = lowering_candidate(&e) {
        if let Some(z) = exact_by_lowering(&e, v) {
            return ZeroVerdict {
                is_zero: z,
                method: ZeroMethod::ExactLowering,
            };
        }
    }
    numeric(&e, b)
}

/// `a == b` in the sense of [`zero_test`] on `a - b`.
pub fn equivalent(a: &Expr, b: &Expr, bindings: &Bindings) -> ZeroVerdict {
    zero_test(&(a.clone() - b.clone()), bindings)
}

fn lowering_candidate(e: &Expr) -> Option<Var> {
    let vars = e.vars();
    if vars.len() > 1 || !e.params().is_empty() {
        return None;
    }
    if e.find(&|n| matches!(n, Expr::Func(..))).is_some() {
        return None;
    }
    Some(vars.first().copied().unwrap_or(Var::Tau))
}

fn exact_by_lowering(e: &Expr, v: Var) -> Option<bool> {
    let mut denoms = num_bigint::BigInt::from(1);
    collect_denoms(e, &mut denoms);
    let l: u32 = denoms.try_into().ok()?;
    let sub = Bindings::new().with(v.name(), Expr::tau().powi(l as i64));
    let moved = simplify(&substitute(e, &sub).ok()?);
    let r = lower_to_ratfunc(&moved, &RewriteRules::new(RuleKind::Identity(Var::Tau))).ok()?;
    Some(r.is_zero())
}

fn collect_denoms(e: &Expr, acc: &mut num_bigint::BigInt) {
    match e {
        Expr::Pow(b, p) => {
            *acc = acc.lcm(p.denom());
            collect_denoms(b, acc);
        }
        Expr::Add(xs) | Expr::Mul(xs) => xs.iter().for_each(|x| collect_denoms(x, acc)),
        Expr::Neg(a) | Expr::Func(_, a) => collect_denoms(a, acc),
        Expr::Div(a, b) => {
            collect_denoms(a, acc);
            collect_denoms(b, acc);
        }
        Expr::Const(_) | Expr::Var(_) | Expr::Param(_) => {}
    }
}

/// Deterministic low-discrepancy sample in `(0.3, 2.3)` for variable slot
/// `slot` and index `i`.
pub(crate) fn sample_value(slot: usize, i: usize) -> f64 {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    const PLASTIC: f64 = 0.754_877_666_246_692_7;
    let u = (i as f64 * GOLDEN + slot as f64 * PLASTIC + 0.137).fract();
    0.3 + 2.0 * u
}

fn numeric(e: &Expr, b: &Bindings) -> ZeroVerdict {
    let vars = e.vars();
    let terms: Vec<Expr> = to_sum(e)
        .into_iter()
        .map(|(m, c)| from_sum(&std::iter::once((m, c)).collect()))
        .collect();
    let mut used = 0;
    let mut all_small = true;
    for i in 0..SAMPLES * 3 {
        if used == SAMPLES {
            break;
        }
        let point: Vec<(Var, f64)> = vars
            .iter()
            .enumerate()
            .map(|(slot, v)| (*v, sample_value(slot, i)))
            .collect();
        let Ok(val) = eval_numeric(e, b, &point) else {
            continue;
        };
        let scale: f64 = terms
            .iter()
            .filter_map(|t| eval_numeric(t, b, &point).ok())
            .map(f64::abs)
            .sum::<f64>()
            .max(1.0);
        if !val.is_finite() || !scale.is_finite() {
            continue;
        }
        used += 1;
        if val.abs() > 1e-9 * scale {
            all_small = false;
            break;
        }
    }
    ZeroVerdict {
        is_zero: all_small && used > 0,
        method: ZeroMethod::NumericSampling { points: used },
    }
}

impl ZeroVerdict {
    pub fn exact(&self) -> bool {
        !matches!(self.method, ZeroMethod::NumericSampling { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qi;
    use crate::symexpr::parse;

    fn z(src: &str) -> ZeroVerdict {
        zero_test(&parse(src).unwrap(), &Bindings::new())
    }

    #[test]
    fn structural() {
        assert_eq!(
            z("(x+1)^2 - x^2 - 2*x - 1"),
            ZeroVerdict { is_zero: true, method: ZeroMethod::Structural }
        );
    }

    #[test]
    fn lowering_cancels_sums() {
        let v = z("(t^2 - 1)/(t - 1) - t - 1");
        assert_eq!(v, ZeroVerdict { is_zero: true, method: ZeroMethod::ExactLowering });
        let v = z("sqrt(t)/(t + sqrt(t)) - 1/(sqrt(t) + 1)");
        assert!(v.is_zero && v.exact());
        let v = z("1/(sqrt(t) - 1) + 1/(sqrt(t) + 1) - 2*sqrt(t)/(t - 1)");
        assert_eq!(v, ZeroVerdict { is_zero: true, method: ZeroMethod::ExactLowering });
        assert!(!z("1/(t+1) - 1/t").is_zero);
    }

    #[test]
    fn sampling_fallback() {
        let v = zero_test(
            &parse("cos(t)^2 + sin(t)^2 - 1 + a*x - a*x").unwrap(),
            &Bindings::new().with_q("a", qi(3)),
        );
        assert!(v.is_zero);
        let v = z("cos(t)*x/(x+cos(t)) - x + x^2/(x + cos(t))");
        assert!(v.is_zero);
        assert!(matches!(v.method, ZeroMethod::NumericSampling { points: 12 }));
        assert!(!z("cos(t)*x - sin(t)*x").is_zero);
    }
}
