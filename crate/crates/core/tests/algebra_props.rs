use nahs_core::algebra::{normalize, pole_data, qi, squarefree_factorize, Poly, RatFunc, Q};
use proptest::prelude::*;

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-9i64..=9, 1..=max_deg + 1).prop_map(|c| Poly::from_ints(&c))
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    poly_strategy(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

/// Products of linear factors with small integer or half-integer roots.
fn split_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-4i64..=4, 1i64..=2, 1u32..=3), 0..=3).prop_map(|fs| {
        fs.into_iter().fold(Poly::one(), |acc, (n, d, m)| {
            &acc * &Poly::linear_root(&Q::new(n.into(), d.into())).pow(m)
        })
    })
}

proptest! {
    #[test]
    fn normalize_cancels_common_factor(p in poly_strategy(6), q in nonzero_poly(6), g in nonzero_poly(3)) {
        let a = normalize(&p * &g, &q * &g).unwrap();
        let b = normalize(p, q).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(normalize(a.num().clone(), a.den().clone()).unwrap(), a);
    }

    #[test]
    fn squarefree_reconstruction(p in nonzero_poly(4), s in nonzero_poly(2)) {
        let input = &p * &s.pow(2);
        let factors = squarefree_factorize(&input);
        let prod = factors.iter().fold(Poly::one(), |acc, (g, m)| &acc * &g.pow(*m as u32));
        prop_assert_eq!(prod.scale(&input.leading()), input);
        for (i, (a, _)) in factors.iter().enumerate() {
            prop_assert!(Poly::gcd(a, &a.derivative()).is_constant());
            for (b, _) in &factors[i + 1..] {
                prop_assert!(Poly::gcd(a, b).is_constant());
            }
        }
    }

    #[test]
    fn principal_parts_recombine(n in poly_strategy(5), d in split_poly()) {
        let r = normalize(n, d).unwrap();
        let poles = pole_data(&r).unwrap();
        let total: usize = poles.iter().map(|p| p.order).sum();
        prop_assert_eq!(total as i64, r.den().deg_i());
        let mut sum = RatFunc::zero();
        for p in &poles {
            prop_assert!(p.principal_part[0] != qi(0));
            for (i, c) in p.principal_part.iter().enumerate() {
                sum = &sum + &RatFunc::pole_term(c.clone(), &p.location, (p.order - i) as u32);
            }
        }
        let (poly_part, _) = r.polynomial_part();
        prop_assert_eq!(&sum + &RatFunc::from_poly(poly_part), r);
    }
}
