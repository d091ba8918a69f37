use nahs_core::algebra::{q, Poly, RatFunc, Q};
use nahs_core::kovacic::{kovacic, verify_solution};
use proptest::prelude::*;

const POINTS: [(i64, i64); 7] = [(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (2, 1)];

fn point() -> impl Strategy<Value = Q> {
    (0..POINTS.len()).prop_map(|i| q(POINTS[i].0, POINTS[i].1))
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 1..=max_deg + 1).prop_map(|c| Poly::from_ints(&c))
}

/// `num / prod (x - c_i)^{m_i}` with denominator degree at most 4.
fn random_r() -> impl Strategy<Value = RatFunc> {
    let poles = prop::collection::vec((point(), 1u32..=2), 0..=2);
    (small_poly(4), poles).prop_filter_map("zero numerator", |(num, poles)| {
        if num.is_zero() {
            return None;
        }
        let den = poles
            .iter()
            .fold(Poly::one(), |acc, (c, m)| &acc * &Poly::linear_root(c).pow(*m));
        RatFunc::new(num, den).ok()
    })
}

/// `r = omega' + omega^2` for `omega = u'/u + v`, `u = prod (x - c_i)^{m_i}`,
/// so `u exp(int v)` solves `zeta'' = r zeta`.
fn planted_r() -> impl Strategy<Value = RatFunc> {
    let factors = prop::collection::btree_map(0..POINTS.len(), prop_oneof![Just(-1i32), Just(1), Just(2)], 0..=2);
    (factors, small_poly(1)).prop_map(|(factors, v)| {
        let mut omega = RatFunc::from_poly(v);
        for (i, m) in factors {
            let c = q(POINTS[i].0, POINTS[i].1);
            omega = &omega + &RatFunc::pole_term(Q::from_integer(m.into()), &c, 1);
        }
        &omega.derivative() + &(&omega * &omega)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn successes_verify(r in random_r()) {
        let kr = kovacic(&r).unwrap();
        if kr.outcome.is_liouvillian() {
            prop_assert!(verify_solution(&r, &kr.outcome), "r = {r}: {:?}", kr.outcome);
        }
    }

    #[test]
    fn planted_solutions_are_found(r in planted_r()) {
        let kr = kovacic(&r).unwrap();
        prop_assert!(kr.outcome.is_liouvillian(), "r = {r}: {:?}", kr.trail);
        prop_assert!(verify_solution(&r, &kr.outcome));
    }
}
