use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::algebra::{basis_product, laurent_at, valuation_at, Poly, RatFunc, Surd, Q};

/// `sum_k sqrt(k) f_k(tau)` over distinct squarefree `k`; negative `k` stand
/// for `i sqrt(|k|)`. Rational functions over a multiquadratic extension of
/// `Q`, which is where case-1 Riccati solutions live in general.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SurdRatFunc {
    parts: BTreeMap<BigInt, RatFunc>,
}

impl SurdRatFunc {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ratfunc(RatFunc::one())
    }

    pub fn from_ratfunc(f: RatFunc) -> Self {
        Self::radical(BigInt::one(), f)
    }

    /// `sqrt(k) f` for squarefree `k`.
    pub fn radical(k: BigInt, f: RatFunc) -> Self {
        let mut parts = BTreeMap::new();
        if !f.is_zero() {
            parts.insert(k, f);
        }
        SurdRatFunc { parts }
    }

    /// `s * f` for a surd constant `s`.
    pub fn surd_times(s: &Surd, f: &RatFunc) -> Self {
        let mut out = Self::zero();
        for (k, c) in s.terms() {
            out.accumulate(k.clone(), f.scale(c));
        }
        out
    }

    pub fn parts(&self) -> impl Iterator<Item = (&BigInt, &RatFunc)> {
        self.parts.iter()
    }

    pub fn radicands(&self) -> BTreeSet<BigInt> {
        self.parts.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// The function itself when every irrational part vanishes.
    pub fn as_rational(&self) -> Option<RatFunc> {
        match self.parts.len() {
            0 => Some(RatFunc::zero()),
            1 => self.parts.get(&BigInt::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.parts.values().all(RatFunc::is_polynomial)
    }

    fn accumulate(&mut self, k: BigInt, f: RatFunc) {
        if f.is_zero() {
            return;
        }
        let sum = match self.parts.remove(&k) {
            Some(g) => &g + &f,
            None => f,
        };
        if !sum.is_zero() {
            self.parts.insert(k, sum);
        }
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (k, f) in &self.parts {
            out.accumulate(k.clone(), f.derivative());
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, f) in &rhs.parts {
            out.accumulate(k.clone(), f.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        SurdRatFunc {
            parts: self.parts.iter().map(|(k, f)| (k.clone(), -f)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (a, f) in &self.parts {
            for (b, g) in &rhs.parts {
                let (c, m) = basis_product(a, b);
                out.accumulate(m, (f * g).scale(&c));
            }
        }
        out
    }

    pub fn mul_rat(&self, g: &RatFunc) -> Self {
        let mut out = Self::zero();
        for (k, f) in &self.parts {
            out.accumulate(k.clone(), f * g);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.mul_rat(&RatFunc::constant(c.clone()))
    }

    /// Least common multiple of the component denominators.
    pub fn common_denominator(&self) -> Poly {
        self.parts
            .values()
            .fold(Poly::one(), |acc, f| Poly::lcm(&acc, f.den()))
    }

    /// Numerators over `den`, which must be a multiple of every component
    /// denominator.
    pub fn numerators_over(&self, den: &Poly) -> BTreeMap<BigInt, Poly> {
        self.parts
            .iter()
            .map(|(k, f)| (k.clone(), f.num() * &den.exact_div(f.den())))
            .collect()
    }

    /// Residue at the rational point `c`.
    pub fn residue_at(&self, c: &Q) -> Surd {
        let mut out = Surd::zero();
        for (k, f) in &self.parts {
            let v = valuation_at(f, c);
            if v >= 0 {
                continue;
            }
            let res = laurent_at(f, c, (-v) as usize).coeff(-1);
            let unit = Surd::sqrt_of(&Q::from_integer(k.clone())).expect("squarefree radicand");
            out = &out + &unit.scale(&res);
        }
        out
    }

    /// Polynomial part of every component.
    pub fn polynomial_part(&self) -> Self {
        let mut out = Self::zero();
        for (k, f) in &self.parts {
            out.accumulate(k.clone(), RatFunc::from_poly(f.polynomial_part().0));
        }
        out
    }

    pub fn eval_complex(&self, x: f64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, f) in &self.parts {
            let v = f.eval_f64(x);
            let (a, b) = Surd::sqrt_of(&Q::from_integer(k.clone()))
                .expect("squarefree radicand")
                .to_complex();
            re += a * v;
            im += b * v;
        }
        (re, im)
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.parts.is_empty() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .parts
            .iter()
            .map(|(k, f)| {
                let body = f.display_in(var);
                let unit = if k.is_one() {
                    return body;
                } else if k == &BigInt::from(-1) {
                    "i".to_string()
                } else if k.is_negative() {
                    format!("i*sqrt({})", k.abs())
                } else {
                    format!("sqrt({k})")
                };
                format!("{unit}*({body})")
            })
            .collect();
        terms.join(" + ")
    }
}

/// Closure of `gens` (and 1) under multiplication modulo squares: a
/// `Q`-basis of the field they generate.
pub fn field_basis(gens: &BTreeSet<BigInt>) -> Vec<BigInt> {
    let mut basis: BTreeSet<BigInt> = BTreeSet::from([BigInt::one()]);
    loop {
        let mut grown = basis.clone();
        for a in &basis {
            for g in gens {
                grown.insert(basis_product(a, g).1);
            }
        }
        if grown.len() == basis.len() {
            break;
        }
        basis = grown;
    }
    basis.into_iter().collect()
}

impl fmt::Debug for SurdRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("tau"))
    }
}

impl fmt::Display for SurdRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("tau"))
    }
}

impl serde::Serialize for SurdRatFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.display_in("tau"))
    }
}
