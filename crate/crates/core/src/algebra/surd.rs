use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{format_q, squarefree_decompose, to_f64, Q};
use super::AlgebraError;

/// Element of the ring `Q[sqrt(k) : k squarefree]`, stored as a finite sum
/// `sum_k c_k sqrt(k)` over distinct squarefree integers `k`.
///
/// Negative `k` stand for `i sqrt(|k|)`. The square roots of distinct
/// squarefree integers are linearly independent over `Q`, so the zero test
/// and the rationality test are exact.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Surd {
    terms: BTreeMap<BigInt, Q>,
}

/// `sqrt(a) * sqrt(b) = sign * g * sqrt(m)` for squarefree `a`, `b`.
pub(crate) fn basis_product(a: &BigInt, b: &BigInt) -> (Q, BigInt) {
    let g = a.abs().gcd(&b.abs());
    let m = a * b / (&g * &g);
    let both_neg = a.is_negative() && b.is_negative();
    let c = Q::from_integer(if both_neg { -g } else { g });
    (c, m)
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn rational(v: Q) -> Self {
        Self::term(v, BigInt::one())
    }

    fn term(c: Q, k: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Surd { terms }
    }

    /// Principal square root of a rational: `sqrt(v) = m sqrt(k)`, and
    /// `i sqrt(|v|)` for `v < 0`.
    pub fn sqrt_of(v: &Q) -> Result<Self, AlgebraError> {
        let (m, k) = squarefree_decompose(v)?;
        Ok(Self::term(m, k))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&BigInt::one()).cloned(),
            _ => None,
        }
    }

    pub fn rational_part(&self) -> Q {
        self.terms.get(&BigInt::one()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Surd {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect(),
        }
    }

    /// Inverse of a single-term element `c sqrt(k)`; `None` otherwise.
    pub fn inv_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        // 1/(c sqrt k) = sqrt(k) / (c k)
        Some(Self::term((c * Q::from_integer(k.clone())).recip(), k.clone()))
    }

    /// Value as a complex number `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in &self.terms {
            let s = to_f64(&Q::from_integer(k.abs())).sqrt() * to_f64(c);
            if k.is_negative() {
                im += s;
            } else {
                re += s;
            }
        }
        (re, im)
    }

    fn accumulate(terms: &mut BTreeMap<BigInt, Q>, k: BigInt, c: Q) {
        let e = terms.entry(k.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            terms.remove(&k);
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                if k.is_one() {
                    format_q(c)
                } else if k == &BigInt::from(-1) {
                    format!("{}*i", format_q(c))
                } else if k.is_negative() {
                    format!("{}*i*sqrt({})", format_q(c), k.abs())
                } else {
                    format!("{}*sqrt({k})", format_q(c))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<'a> Add<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let mut terms = self.terms.clone();
        for (k, c) in &rhs.terms {
            Surd::accumulate(&mut terms, k.clone(), c.clone());
        }
        Surd { terms }
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        self.scale(&-Q::one())
    }
}

impl<'a> Sub<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let (s, m) = basis_product(a, b);
                Surd::accumulate(&mut terms, m, s * ca * cb);
            }
        }
        Surd { terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    #[test]
    fn square_roots() {
        let r7 = Surd::sqrt_of(&q(7, 4)).unwrap();
        assert_eq!(r7.as_rational(), None);
        assert_eq!((&r7 * &r7).as_rational(), Some(q(7, 4)));
        let i2 = Surd::sqrt_of(&qi(-4)).unwrap();
        assert_eq!((&i2 * &i2).as_rational(), Some(qi(-4)));
        assert_eq!(Surd::sqrt_of(&q(9, 4)).unwrap().as_rational(), Some(q(3, 2)));
    }

    #[test]
    fn cancellation_is_exact() {
        let a = &Surd::rational(q(1, 2)) + &Surd::sqrt_of(&q(7, 16)).unwrap();
        let b = &Surd::rational(q(1, 2)) - &Surd::sqrt_of(&q(7, 16)).unwrap();
        assert_eq!((&a + &b).as_rational(), Some(qi(1)));
        // (1/2)^2 - 7/16 = -3/16
        assert_eq!((&a * &b).as_rational(), Some(q(-3, 16)));
    }

    #[test]
    fn mixed_products() {
        let s2 = Surd::sqrt_of(&qi(2)).unwrap();
        let s6 = Surd::sqrt_of(&qi(6)).unwrap();
        let s3 = Surd::sqrt_of(&qi(3)).unwrap();
        assert_eq!(&s2 * &s6, s3.scale(&qi(2)));
        let inv = s6.inv_monomial().unwrap();
        assert_eq!((&inv * &s6).as_rational(), Some(qi(1)));
        let (re, im) = Surd::sqrt_of(&qi(-2)).unwrap().to_complex();
        assert_eq!(re, 0.0);
        assert!((im - 2f64.sqrt()).abs() < 1e-15);
    }
}
