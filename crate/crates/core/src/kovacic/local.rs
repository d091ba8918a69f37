//! Local data at the poles of `r` and at infinity.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ext::SurdRatFunc;
use crate::algebra::{laurent_at_infinity, Poly, RatFunc, Surd, Q};

/// `s_0, s_1, ...` with `sqrt(1 + sum_{j>=1} u_j h^j) = sum s_j h^j`.
fn sqrt_series(u: &[Q], n: usize) -> Vec<Q> {
    let half = Q::new(1.into(), 2.into());
    let mut s = vec![Q::one()];
    for j in 1..n {
        let mut acc = u.get(j).cloned().unwrap_or_else(Q::zero);
        for i in 1..j {
            acc -= &s[i] * &s[j - i];
        }
        s.push(acc * &half);
    }
    s
}

/// `sum_{i+j=m, 0<=i,j<=top} s_i s_j`
fn convolution_at(s: &[Q], m: usize, top: usize) -> Q {
    let mut acc = Q::zero();
    for i in 0..=m.min(top) {
        let j = m - i;
        if j <= top {
            acc += &s[i] * &s[j];
        }
    }
    acc
}

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

/// `1/2 +- 1/2 sqrt(1 + 4b)`
pub(crate) fn order_two_exponents(b: &Q) -> [Surd; 2] {
    let disc = Q::one() + Q::from_integer(4.into()) * b;
    let root = Surd::sqrt_of(&disc).expect("small discriminant").scale(&half());
    let mid = Surd::rational(half());
    [&mid + &root, &mid - &root]
}

/// `sqrt(1 + 4b)`
pub(crate) fn order_two_root(b: &Q) -> Surd {
    let disc = Q::one() + Q::from_integer(4.into()) * b;
    Surd::sqrt_of(&disc).expect("small discriminant")
}

/// One sign choice at one point: the contribution to `omega` and the
/// exponent `alpha`.
#[derive(Debug, Clone)]
pub(crate) struct Choice {
    pub omega_part: SurdRatFunc,
    pub alpha: Surd,
}

fn push_unique(out: &mut Vec<Choice>, c: Choice) {
    if !out.iter().any(|o| o.omega_part == c.omega_part && o.alpha == c.alpha) {
        out.push(c);
    }
}

/// Case-1 choices at a finite pole `c` of order `order` with principal part
/// `pp = [c_{-order}, ..., c_{-1}]`.
pub(crate) fn case1_at_pole(c: &Q, order: usize, pp: &[Q]) -> Vec<Choice> {
    let simple = |alpha: Surd| Choice {
        omega_part: SurdRatFunc::surd_times(&alpha, &RatFunc::pole_term(Q::one(), c, 1)),
        alpha,
    };
    let mut out = Vec::new();
    match order {
        1 => out.push(simple(Surd::rational(Q::one()))),
        2 => {
            for a in order_two_exponents(&pp[0]) {
                push_unique(&mut out, simple(a));
            }
        }
        _ => {
            let nu = order / 2;
            let r0 = &pp[0];
            let u: Vec<Q> = pp.iter().map(|v| v / r0).collect();
            let s = sqrt_series(&u, nu - 1);
            let a = Surd::sqrt_of(r0).expect("small coefficient");
            let mut body = RatFunc::zero();
            for (j, sj) in s.iter().enumerate() {
                body = &body + &RatFunc::pole_term(sj.clone(), c, (nu - j) as u32);
            }
            let sqrt_part = SurdRatFunc::surd_times(&a, &body);
            let b = &pp[nu - 1] - r0 * convolution_at(&s, nu - 1, nu - 2);
            let b_over_a = a.inv_monomial().expect("single-term root").scale(&b);
            let nu_q = Surd::rational(Q::from_integer(nu.into()));
            for sign in [1i64, -1] {
                let sgn = Q::from_integer(sign.into());
                let alpha = (&b_over_a.scale(&sgn) + &nu_q).scale(&half());
                let omega_part = sqrt_part.scale(&sgn).add(&SurdRatFunc::surd_times(
                    &alpha,
                    &RatFunc::pole_term(Q::one(), c, 1),
                ));
                push_unique(&mut out, Choice { omega_part, alpha });
            }
        }
    }
    out
}

/// Case-1 choices at infinity; `order` is `None` for `r = 0`.
pub(crate) fn case1_at_infinity(r: &RatFunc, order: Option<i64>) -> Vec<Choice> {
    let constant = |alpha: Q| Choice {
        omega_part: SurdRatFunc::zero(),
        alpha: Surd::rational(alpha),
    };
    match order {
        None => vec![constant(Q::zero()), constant(Q::one())],
        Some(o) if o > 2 => vec![constant(Q::zero()), constant(Q::one())],
        Some(2) => {
            let b = laurent_at_infinity(r, 1).coeff(2);
            let mut out = Vec::new();
            for alpha in order_two_exponents(&b) {
                push_unique(
                    &mut out,
                    Choice {
                        omega_part: SurdRatFunc::zero(),
                        alpha,
                    },
                );
            }
            out
        }
        Some(o) => {
            let nu = (-o / 2) as usize;
            let l = laurent_at_infinity(r, nu + 2);
            let c0 = l.coeffs[0].clone();
            let u: Vec<Q> = l.coeffs.iter().map(|v| v / &c0).collect();
            let s = sqrt_series(&u, nu + 1);
            let a = Surd::sqrt_of(&c0).expect("small coefficient");
            let mut body = Poly::zero();
            for (j, sj) in s.iter().enumerate() {
                body = &body + &Poly::monomial(sj.clone(), nu - j);
            }
            let sqrt_part = SurdRatFunc::surd_times(&a, &RatFunc::from_poly(body));
            let b = &l.coeffs[nu + 1] - &c0 * convolution_at(&s, nu + 1, nu);
            let b_over_a = a.inv_monomial().expect("single-term root").scale(&b);
            let nu_q = Surd::rational(Q::from_integer(nu.into()));
            let mut out = Vec::new();
            for sign in [1i64, -1] {
                let sgn = Q::from_integer(sign.into());
                let alpha = (&b_over_a.scale(&sgn) - &nu_q).scale(&half());
                push_unique(
                    &mut out,
                    Choice {
                        omega_part: sqrt_part.scale(&sgn),
                        alpha,
                    },
                );
            }
            out
        }
    }
}

/// Integers among `base + k * step * root` for `k` in `-kmax..=kmax`,
/// ascending and without repeats.
pub(crate) fn integer_family(base: i64, step: &Q, root: &Surd, kmax: i64) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::new();
    for k in -kmax..=kmax {
        let v = &Surd::rational(Q::from_integer(base.into()))
            + &root.scale(&(step * Q::from_integer(k.into())));
        if let Some(q) = v.as_rational() {
            if q.is_integer() {
                out.push(q.to_integer());
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
