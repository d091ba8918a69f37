use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

pub type Q = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p`, `p/q` or a finite decimal such as `0.25`.
pub fn parse_q(s: &str) -> Result<Q, AlgebraError> {
    let bad = || AlgebraError::BadRational(s.to_string());
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn exact_root_int(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return exact_root_int(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

pub fn rational_sqrt(v: &Q) -> Option<Q> {
    rational_root(v, 2)
}

/// Exact `k`-th root of `v` when it is rational.
pub fn rational_root(v: &Q, k: u32) -> Option<Q> {
    if k == 0 {
        return None;
    }
    let n = exact_root_int(v.numer(), k)?;
    let d = exact_root_int(v.denom(), k)?;
    Some(Q::new(n, d))
}

const TRIAL_LIMIT: u64 = 10_000_000;

/// Writes `v = m^2 * k` with `m` rational and `k` a squarefree integer
/// (negative when `v < 0`). Returns `(m, k)`; `v = 0` gives `(0, 1)`.
pub fn squarefree_decompose(v: &Q) -> Result<(Q, BigInt), AlgebraError> {
    if v.is_zero() {
        return Ok((Q::zero(), BigInt::one()));
    }
    // sqrt(n/d) = sqrt(n d) / d
    let nd = v.numer() * v.denom();
    let sign = nd.sign();
    let mut rest = nd.abs();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0u32;
        while rest.is_multiple_of(&pb) {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            square *= num_traits::pow(pb.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                free *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        let bound = BigInt::from(TRIAL_LIMIT);
        if rest > &bound * &bound {
            return Err(AlgebraError::TooLarge(rest.to_string()));
        }
        free *= rest;
    }
    if sign == Sign::Minus {
        free = -free;
    }
    let m = Q::new(square, v.denom().clone());
    Ok((m, free))
}

/// Nearest double to `v`.
pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        // huge numerator/denominator: scale through strings of digits
        let n = v.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = v.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// All positive divisors of `n`, or an error if `n` cannot be factored by trial division.
pub(crate) fn divisors(n: &BigInt) -> Result<Vec<BigInt>, AlgebraError> {
    let mut rest = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0;
        while rest.is_multiple_of(&pb) {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            factors.push((pb, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        let bound = BigInt::from(TRIAL_LIMIT);
        if rest > &bound * &bound {
            return Err(AlgebraError::TooLarge(rest.to_string()));
        }
        factors.push((rest, 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}
