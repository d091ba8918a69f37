use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Q;
use super::AlgebraError;

/// Quotient `num / den` of polynomials over `Q` in canonical form:
/// `gcd(num, den) = 1`, `den` monic, and `0` is stored as `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// Builds the canonical representative of `num / den`.
pub fn normalize(num: Poly, den: Poly) -> Result<RatFunc, AlgebraError> {
    if den.is_zero() {
        return Err(AlgebraError::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok(RatFunc::zero());
    }
    let g = Poly::gcd(&num, &den);
    let (num, den) = if g.is_constant() {
        (num, den)
    } else {
        (num.exact_div(&g), den.exact_div(&g))
    };
    let l = den.leading().recip();
    Ok(RatFunc {
        num: num.scale(&l),
        den: den.scale(&l),
    })
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        normalize(num, den)
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    /// `c / (x - a)^k`
    pub fn pole_term(c: Q, a: &Q, k: u32) -> Self {
        normalize(Poly::constant(c), Poly::linear_root(a).pow(k)).expect("nonzero denominator")
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Q> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.coeff(0))
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        normalize(n, &self.den * &self.den).expect("nonzero denominator")
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        normalize(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<Self, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        normalize(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn pow(&self, n: i32) -> Result<Self, AlgebraError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let k = n.unsigned_abs();
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// `self(p(x))` for a polynomial substitution.
    pub fn compose_poly(&self, p: &Poly) -> Result<Self, AlgebraError> {
        normalize(self.num.compose(p), self.den.compose(p))
    }

    /// `self(other(x))`.
    pub fn compose(&self, other: &RatFunc) -> Result<Self, AlgebraError> {
        // P(n/d) = sum a_i n^i d^(D-i) / d^D with D = max degree
        let deg = self.num.deg_i().max(self.den.deg_i()).max(0) as usize;
        let homog = |p: &Poly| -> Poly {
            let mut acc = Poly::zero();
            for (i, c) in p.coeffs().iter().enumerate() {
                let term = &(&other.num.pow(i as u32) * &other.den.pow((deg - i) as u32))
                    * &Poly::constant(c.clone());
                acc = &acc + &term;
            }
            acc
        };
        normalize(homog(&self.num), homog(&self.den))
    }

    /// Splits into polynomial part and proper remainder.
    pub fn polynomial_part(&self) -> (Poly, RatFunc) {
        let (qt, r) = self.num.divrem(&self.den);
        (
            qt,
            RatFunc {
                num: r,
                den: self.den.clone(),
            },
        )
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.den.is_one_poly() {
            return self.num.display_in(var);
        }
        format!("({})/({})", self.num.display_in(var), self.den.display_in(var))
    }
}

impl Poly {
    fn is_one_poly(&self) -> bool {
        self.coeffs().len() == 1 && self.coeffs()[0].is_one()
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self.display_in("x"))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return normalize(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        let g = Poly::gcd(&self.den, &rhs.den);
        let a = self.den.exact_div(&g);
        let b = rhs.den.exact_div(&g);
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        normalize(num, &a * &rhs.den).expect("nonzero")
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        // cross-cancel before multiplying
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let n = &self.num.exact_div(&g1) * &rhs.num.exact_div(&g2);
        let d = &self.den.exact_div(&g2) * &rhs.den.exact_div(&g1);
        normalize(n, d).expect("nonzero")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    #[test]
    fn constant_factor_normalization() {
        let r = normalize(Poly::from_ints(&[2, 2]), Poly::from_ints(&[4])).unwrap();
        assert_eq!(r.num(), &Poly::from_coeffs(vec![q(1, 2), q(1, 2)]));
        assert_eq!(r.den(), &Poly::one());
    }

    #[test]
    fn common_factor_cancellation() {
        let r = normalize(Poly::from_ints(&[-1, 0, 1]), Poly::from_ints(&[-1, 1])).unwrap();
        assert_eq!(r, RatFunc::from_poly(Poly::from_ints(&[1, 1])));
    }

    #[test]
    fn zero_case() {
        let r = normalize(Poly::zero(), Poly::from_ints(&[0, 0, 0, 1])).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.den(), &Poly::one());
    }

    #[test]
    fn zero_denominator() {
        assert_eq!(
            normalize(Poly::one(), Poly::zero()),
            Err(AlgebraError::ZeroDenominator)
        );
    }

    #[test]
    fn idempotent() {
        let r = normalize(Poly::from_ints(&[3, 0, 6]), Poly::from_ints(&[0, 9, 3])).unwrap();
        let again = normalize(r.num().clone(), r.den().clone()).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn field_ops() {
        let a = RatFunc::pole_term(qi(1), &qi(1), 1);
        let b = RatFunc::pole_term(qi(1), &qi(-1), 1);
        // 1/(x-1) - 1/(x+1) = 2/(x^2-1)
        let d = &a - &b;
        assert_eq!(d.num(), &Poly::from_ints(&[2]));
        assert_eq!(d.den(), &Poly::from_ints(&[-1, 0, 1]));
        let p = &a * &b;
        assert_eq!(p.checked_div(&b).unwrap(), a);
        assert_eq!(a.derivative(), RatFunc::pole_term(qi(-1), &qi(1), 2));
    }

    #[test]
    fn composition_with_reciprocal() {
        // r(x) = x + 1/x composed with 1/x is itself
        let r = &RatFunc::x() + &RatFunc::x().inv().unwrap();
        let inv = RatFunc::x().inv().unwrap();
        assert_eq!(r.compose(&inv).unwrap(), r);
    }
}
