use std::fmt;

use serde::Serialize;

use super::{AlgSolde, TransformError};
use crate::algebra::{format_q, rational_roots, valuation_at, AlgebraError, Poly, RatFunc, Q};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Point {
    Finite(Q),
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointClass {
    Ordinary,
    RegularSingular,
    IrregularSingular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularPoint {
    pub point: Point,
    pub class: PointClass,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(c) => f.write_str(&format_q(c)),
            Point::Infinity => f.write_str("infinity"),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn valuation(r: &RatFunc, c: &Q) -> i64 {
    if r.is_zero() {
        i64::MAX
    } else {
        valuation_at(r, c)
    }
}

fn classify_zero(p: &RatFunc, q: &RatFunc) -> PointClass {
    let c = Q::from_integer(0.into());
    let (vp, vq) = (valuation(p, &c), valuation(q, &c));
    if vp >= 0 && vq >= 0 {
        PointClass::Ordinary
    } else if vp >= -1 && vq >= -2 {
        PointClass::RegularSingular
    } else {
        PointClass::IrregularSingular
    }
}

/// Fuchs criterion. At infinity the equation is pulled back by
/// `tau = 1/eta`: `xi'' + (2/eta - P(1/eta)/eta^2) xi' + Q(1/eta)/eta^4 xi = 0`,
/// classified at `eta = 0`.
pub fn classify_point(s: &AlgSolde, point: &Point) -> PointClass {
    match point {
        Point::Finite(c) => {
            let shift = Poly::from_coeffs(vec![c.clone(), Q::from_integer(1.into())]);
            let p = s.p.compose_poly(&shift).expect("shift keeps denominators nonzero");
            let q = s.q.compose_poly(&shift).expect("shift keeps denominators nonzero");
            classify_zero(&p, &q)
        }
        Point::Infinity => {
            let inv = RatFunc::x().inv().expect("x is nonzero");
            let eta2 = RatFunc::from_poly(Poly::monomial(Q::from_integer(1.into()), 2));
            let eta4 = RatFunc::from_poly(Poly::monomial(Q::from_integer(1.into()), 4));
            let two_over = inv.scale(&Q::from_integer(2.into()));
            let pt = &two_over
                - &s.p.compose(&inv).expect("composition").checked_div(&eta2).expect("eta^2 != 0");
            let qt = s.q.compose(&inv).expect("composition").checked_div(&eta4).expect("eta^4 != 0");
            classify_zero(&pt, &qt)
        }
    }
}

/// Every finite singular point and the point at infinity, in order.
pub fn singularity_table(s: &AlgSolde) -> Result<Vec<SingularPoint>, TransformError> {
    let den = &s.p.den().clone() * &s.q.den().clone();
    let roots = rational_roots(&den)?;
    if !roots.cofactor.is_constant() {
        return Err(AlgebraError::IrrationalPole {
            factor: roots.cofactor.monic().display_in("tau"),
        }
        .into());
    }
    let mut out: Vec<SingularPoint> = roots
        .roots
        .into_iter()
        .map(|(c, _)| Point::Finite(c))
        .map(|p| SingularPoint {
            class: classify_point(s, &p),
            point: p,
        })
        .filter(|sp| sp.class != PointClass::Ordinary)
        .collect();
    out.sort_by(|a, b| a.point.cmp(&b.point));
    out.push(SingularPoint {
        class: classify_point(s, &Point::Infinity),
        point: Point::Infinity,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    }

    #[test]
    fn airy_is_irregular_at_infinity() {
        let s = AlgSolde { p: RatFunc::zero(), q: rf(&[0, -1], &[1]) };
        assert_eq!(classify_point(&s, &Point::Infinity), PointClass::IrregularSingular);
        assert_eq!(classify_point(&s, &Point::Finite(qi(3))), PointClass::Ordinary);
    }

    #[test]
    fn free_equation_is_regular_at_infinity() {
        let s = AlgSolde { p: RatFunc::zero(), q: RatFunc::zero() };
        assert_eq!(classify_point(&s, &Point::Infinity), PointClass::RegularSingular);
    }

    #[test]
    fn true_anomaly_equation() {
        // algebraic form of (e cos t + 8)/(e cos t + 1) at e = 1/2
        let p = rf(&[0, -1], &[1, 0, -1]);
        let den = &Poly::from_coeffs(vec![qi(1), q(1, 2)]) * &Poly::from_ints(&[1, 0, -1]);
        let qq = RatFunc::new(Poly::from_coeffs(vec![qi(-8), q(-1, 2)]), den).unwrap();
        let s = AlgSolde { p, q: qq };
        let table = singularity_table(&s).unwrap();
        let pts: Vec<String> = table.iter().map(|sp| sp.point.to_string()).collect();
        assert_eq!(pts, ["-2", "-1", "1", "infinity"]);
        assert!(table.iter().all(|sp| sp.class == PointClass::RegularSingular));
    }

    #[test]
    fn irregular_finite_point() {
        let s = AlgSolde { p: rf(&[1], &[0, 0, 1]), q: RatFunc::zero() };
        assert_eq!(classify_point(&s, &Point::Finite(qi(0))), PointClass::IrregularSingular);
    }

    #[test]
    fn common_factor_does_not_matter() {
        let p = rf(&[0, -1], &[1, 0, -1]);
        let q1 = rf(&[3, 1], &[1, 0, -1]);
        let s = AlgSolde { p: p.clone(), q: q1.clone() };
        let g = Poly::from_ints(&[2, 0, 5, 1]);
        let p2 = RatFunc::new(&p.num().clone() * &g, &p.den().clone() * &g).unwrap();
        let q2 = RatFunc::new(&q1.num().clone() * &g, &q1.den().clone() * &g).unwrap();
        let s2 = AlgSolde { p: p2, q: q2 };
        assert_eq!(classify_point(&s, &Point::Infinity), classify_point(&s2, &Point::Infinity));
    }
}
