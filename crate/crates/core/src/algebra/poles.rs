use num_traits::Zero;
use serde::Serialize;

use super::factor::rational_roots;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::rational::Q;
use super::AlgebraError;

/// Truncated Laurent series `sum_k coeffs[k] * h^(valuation + k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Laurent {
    pub valuation: i64,
    pub coeffs: Vec<Q>,
}

impl Laurent {
    /// Coefficient of `h^exp`, zero outside the stored window below it.
    pub fn coeff(&self, exp: i64) -> Q {
        let k = exp - self.valuation;
        if k < 0 {
            return Q::zero();
        }
        self.coeffs.get(k as usize).cloned().unwrap_or_else(Q::zero)
    }
}

/// A finite pole `location` of order `order` with principal part
/// `[c_{-order}, ..., c_{-1}]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleData {
    #[serde(serialize_with = "super::serde_q::one")]
    pub location: Q,
    pub order: usize,
    #[serde(serialize_with = "super::serde_q::vec")]
    pub principal_part: Vec<Q>,
}

fn low_order_zeros(p: &Poly) -> usize {
    p.coeffs().iter().take_while(|c| c.is_zero()).count()
}

/// Power series division `a / b` to `n` terms; `b[0]` must be nonzero.
fn series_div(a: &[Q], b: &[Q], n: usize) -> Vec<Q> {
    let b0 = b[0].clone();
    let mut out: Vec<Q> = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = a.get(k).cloned().unwrap_or_else(Q::zero);
        for j in 1..=k.min(b.len().saturating_sub(1)) {
            s -= &b[j] * &out[k - j];
        }
        out.push(s / &b0);
    }
    out
}

fn laurent_of_quotient(num: &Poly, den: &Poly, base_val: i64, n_terms: usize) -> Laurent {
    let vn = low_order_zeros(num);
    let vd = low_order_zeros(den);
    let a = &num.coeffs()[vn..];
    let b = &den.coeffs()[vd..];
    Laurent {
        valuation: base_val + vn as i64 - vd as i64,
        coeffs: series_div(a, b, n_terms),
    }
}

/// Laurent expansion of `r` at the finite point `c` in powers of `x - c`.
/// The zero function yields an empty series.
pub fn laurent_at(r: &RatFunc, c: &Q, n_terms: usize) -> Laurent {
    if r.is_zero() {
        return Laurent {
            valuation: 0,
            coeffs: vec![Q::zero(); n_terms],
        };
    }
    laurent_of_quotient(&r.num().shift(c), &r.den().shift(c), 0, n_terms)
}

/// Expansion of `r` at infinity in powers of `w = 1/x`. The valuation equals
/// the order at infinity, `deg den - deg num`.
pub fn laurent_at_infinity(r: &RatFunc, n_terms: usize) -> Laurent {
    if r.is_zero() {
        return Laurent {
            valuation: 0,
            coeffs: vec![Q::zero(); n_terms],
        };
    }
    let base = r.den().deg_i() - r.num().deg_i();
    laurent_of_quotient(&r.num().reversed(), &r.den().reversed(), base, n_terms)
}

/// Order of vanishing of `r` at `c` (negative at poles).
pub fn valuation_at(r: &RatFunc, c: &Q) -> i64 {
    r.num().root_multiplicity(c) as i64 - r.den().root_multiplicity(c) as i64
}

pub fn order_at_infinity(r: &RatFunc) -> Result<i64, AlgebraError> {
    if r.is_zero() {
        return Err(AlgebraError::ZeroFunction);
    }
    Ok(r.den().deg_i() - r.num().deg_i())
}

/// All finite poles of `r` with their principal parts, sorted by location.
pub fn pole_data(r: &RatFunc) -> Result<Vec<PoleData>, AlgebraError> {
    if r.den().is_constant() {
        return Ok(Vec::new());
    }
    let rd = rational_roots(r.den())?;
    if !rd.cofactor.is_constant() {
        return Err(AlgebraError::IrrationalPole {
            factor: rd.cofactor.monic().display_in("x"),
        });
    }
    Ok(rd
        .roots
        .into_iter()
        .map(|(c, m)| {
            let l = laurent_at(r, &c, m);
            debug_assert_eq!(l.valuation, -(m as i64));
            PoleData {
                location: c,
                order: m,
                principal_part: l.coeffs,
            }
        })
        .collect())
}
