use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::parse::const_pow;
use super::{is_nonneg_int, Expr, Func};
use crate::algebra::{squarefree_decompose, Q};

/// Atom to exponent.
pub(crate) type Mono = BTreeMap<Expr, Q>;
/// Monomial to coefficient.
pub(crate) type Sum = BTreeMap<Mono, Q>;

/// Canonical form: a sum of `coefficient * prod atom^exponent` with
/// nonnegative integer powers of sums expanded, like atoms merged, and sums
/// under other powers scaled to a unit first coefficient.
pub fn simplify(e: &Expr) -> Expr {
    from_sum(&to_sum(e))
}

pub(crate) fn constant(c: Q) -> Sum {
    let mut s = Sum::new();
    if !c.is_zero() {
        s.insert(Mono::new(), c);
    }
    s
}

fn atom(e: Expr) -> Sum {
    let mut m = Mono::new();
    m.insert(e, Q::one());
    let mut s = Sum::new();
    s.insert(m, Q::one());
    s
}

pub(crate) fn to_sum(e: &Expr) -> Sum {
    match e {
        Expr::Const(c) => constant(c.clone()),
        Expr::Var(_) | Expr::Param(_) => atom(e.clone()),
        Expr::Add(ts) => {
            let mut acc = Sum::new();
            for t in ts {
                for (m, c) in to_sum(t) {
                    add_into(&mut acc, m, c);
                }
            }
            acc
        }
        Expr::Mul(fs) => fs
            .iter()
            .fold(constant(Q::one()), |acc, f| mul_sums(&acc, &to_sum(f))),
        Expr::Neg(a) => scale(&to_sum(a), &-Q::one()),
        Expr::Div(a, b) => mul_sums(&to_sum(a), &pow_sum(&to_sum(b), &-Q::one())),
        Expr::Pow(b, p) => pow_sum(&to_sum(b), p),
        Expr::Func(k, arg) => {
            let a = simplify(arg);
            match a.as_const() {
                Some(c) if c.is_zero() => match k {
                    Func::Sin | Func::Sinh => Sum::new(),
                    Func::Cos | Func::Cosh | Func::Exp => constant(Q::one()),
                },
                _ => atom(Expr::Func(*k, Box::new(a))),
            }
        }
    }
}

fn scale(s: &Sum, k: &Q) -> Sum {
    if k.is_zero() {
        return Sum::new();
    }
    s.iter().map(|(m, c)| (m.clone(), c * k)).collect()
}

fn mul_mono(a: &Mono, b: &Mono) -> Mono {
    let mut out = a.clone();
    for (k, e) in b {
        *out.entry(k.clone()).or_insert_with(Q::zero) += e;
    }
    out
}

pub(crate) fn mul_sums(a: &Sum, b: &Sum) -> Sum {
    let mut out = Sum::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            add_into(&mut out, mul_mono(ma, mb), ca * cb);
        }
    }
    out
}

/// Adds `c * mono` to `acc`, folding constant atoms with integer exponents
/// into the coefficient and expanding sums raised to nonnegative integers.
fn add_into(acc: &mut Sum, mono: Mono, c: Q) {
    if c.is_zero() {
        return;
    }
    let mut c = c;
    let mut clean = Mono::new();
    let mut expand: Option<(Expr, Q)> = None;
    for (a, e) in mono {
        if e.is_zero() {
            continue;
        }
        match &a {
            Expr::Const(base) => {
                let (coef, rest) = split_const_power(base, &e);
                c *= coef;
                if let Some((b, r)) = rest {
                    *clean.entry(Expr::Const(b)).or_insert_with(Q::zero) += r;
                }
            }
            Expr::Add(_) if is_nonneg_int(&e) && expand.is_none() => expand = Some((a, e)),
            _ => {
                clean.insert(a, e);
            }
        }
    }
    clean.retain(|_, e| !e.is_zero());
    if let Some((a, e)) = expand {
        let base = to_sum(&a);
        let mut rest = Sum::new();
        rest.insert(clean, c);
        let n = e.to_integer().to_u32().expect("small exponent");
        let prod = mul_sums(&int_pow(&base, n), &rest);
        for (m, k) in prod {
            add_into(acc, m, k);
        }
        return;
    }
    let slot = acc.entry(clean.clone()).or_insert_with(Q::zero);
    *slot += c;
    if slot.is_zero() {
        acc.remove(&clean);
    }
}

/// `base^e = coef * rest.0^rest.1` with `rest.1` in `(0, 1)` and, for square
/// roots, `rest.0` a squarefree integer.
fn split_const_power(base: &Q, e: &Q) -> (Q, Option<(Q, Q)>) {
    if let Some(v) = const_pow(base, e) {
        return (v, None);
    }
    if base.is_negative() {
        // odd denominators take the real root; even ones stay symbolic
        if e.denom().is_odd() {
            let sign = if e.numer().is_odd() { -Q::one() } else { Q::one() };
            let (c, r) = split_const_power(&-base, e);
            return (sign * c, r);
        }
        return (Q::one(), Some((base.clone(), e.clone())));
    }
    let fl = e.floor();
    let frac = e - &fl;
    let mut coef = const_pow(base, &fl).unwrap_or_else(Q::one);
    let mut b = base.clone();
    if frac.denom() == &BigInt::from(2) {
        if let Ok((m, k)) = squarefree_decompose(base) {
            coef *= m;
            b = Q::from_integer(k);
        }
    }
    if b.is_one() {
        return (coef, None);
    }
    (coef, Some((b, frac)))
}

fn int_pow(s: &Sum, n: u32) -> Sum {
    let mut result = constant(Q::one());
    let mut base = s.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            result = mul_sums(&result, &base);
        }
        n >>= 1;
        if n > 0 {
            base = mul_sums(&base, &base);
        }
    }
    result
}

fn pow_mono(m: &Mono, p: &Q) -> Mono {
    m.iter().map(|(a, e)| (a.clone(), e * p)).collect()
}

pub(crate) fn pow_sum(s: &Sum, p: &Q) -> Sum {
    if p.is_zero() {
        return constant(Q::one());
    }
    if s.is_empty() {
        if p.is_positive() {
            return Sum::new();
        }
        let mut m = Mono::new();
        m.insert(Expr::Const(Q::zero()), p.clone());
        let mut out = Sum::new();
        out.insert(m, Q::one());
        return out;
    }
    if is_nonneg_int(p) {
        return int_pow(s, p.to_integer().to_u32().expect("small exponent"));
    }
    if s.len() == 1 {
        let (m, c) = s.iter().next().unwrap();
        let mut mono = pow_mono(m, p);
        *mono.entry(Expr::Const(c.clone())).or_insert_with(Q::zero) += p;
        let mut out = Sum::new();
        add_into(&mut out, mono, Q::one());
        return out;
    }
    // pull out the common monomial, then normalise the first coefficient
    let mut common = Mono::new();
    for k in s.keys().flat_map(|m| m.keys()) {
        if common.contains_key(k) {
            continue;
        }
        let min = s
            .keys()
            .map(|m| m.get(k).cloned().unwrap_or_else(Q::zero))
            .min()
            .unwrap();
        if !min.is_zero() {
            common.insert(k.clone(), min);
        }
    }
    let inv_common: Mono = common.iter().map(|(a, e)| (a.clone(), -e)).collect();
    let mut reduced = Sum::new();
    for (m, c) in s {
        add_into(&mut reduced, mul_mono(m, &inv_common), c.clone());
    }
    let lc = reduced.values().next().unwrap().clone();
    let lc_inv = lc.recip();
    let unit = scale(&reduced, &lc_inv);
    let base = from_sum(&unit);
    let mut mono = pow_mono(&common, p);
    *mono.entry(Expr::Const(lc)).or_insert_with(Q::zero) += p;
    *mono.entry(base).or_insert_with(Q::zero) += p;
    let mut out = Sum::new();
    add_into(&mut out, mono, Q::one());
    out
}

fn mono_expr(m: &Mono) -> Vec<Expr> {
    m.iter()
        .map(|(a, e)| {
            if e.is_one() {
                a.clone()
            } else {
                Expr::Pow(Box::new(a.clone()), e.clone())
            }
        })
        .collect()
}

pub(crate) fn from_sum(s: &Sum) -> Expr {
    let terms: Vec<Expr> = s
        .iter()
        .map(|(m, c)| {
            let mut fs = mono_expr(m);
            if fs.is_empty() {
                return Expr::Const(c.clone());
            }
            let neg = c.is_negative();
            let a = c.abs();
            if !a.is_one() {
                fs.insert(0, Expr::Const(a));
            }
            let body = Expr::mul(fs);
            if neg {
                Expr::Neg(Box::new(body))
            } else {
                body
            }
        })
        .collect();
    Expr::add(terms)
}
