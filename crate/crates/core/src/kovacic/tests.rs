use super::*;
use crate::symexpr::{lower_to_ratfunc, parse, RewriteRules, RuleKind, Var};

fn rf(src: &str) -> RatFunc {
    lower_to_ratfunc(
        &parse(src).unwrap(),
        &RewriteRules::new(RuleKind::Identity(Var::Tau)),
    )
    .unwrap()
}

fn feasible(src: &str) -> Vec<Case> {
    necessary_conditions(&rf(src)).unwrap().feasible
}

#[test]
fn conditions() {
    assert_eq!(feasible("tau"), vec![]);
    assert_eq!(
        feasible("(31*tau^2 - 34)/(4*(1 - tau^2)^2)"),
        vec![Case::Case1, Case::Case2, Case::Case3]
    );
    assert_eq!(feasible("1"), vec![Case::Case1]);
    let c = necessary_conditions(&RatFunc::zero()).unwrap();
    assert_eq!(c.order_at_infinity, None);
    assert!(matches!(
        necessary_conditions(&rf("1/(tau^2 - 2)")),
        Err(AlgebraError::IrrationalPole { .. })
    ));
}

fn case1_of(src: &str) -> (String, String) {
    match case1(&rf(src)).unwrap() {
        Some(Outcome::Case1 { omega, p, .. }) => (omega.to_string(), p.to_string()),
        other => panic!("{src}: {other:?}"),
    }
}

#[test]
fn case1_examples() {
    assert_eq!(case1_of("0"), ("0".into(), "1".into()));
    assert_eq!(case1_of("1"), ("1".into(), "1".into()));
    assert_eq!(case1_of("2/tau^2").1, "1");
    let Some(Outcome::Case1 { omega, .. }) = case1(&rf("2/tau^2")).unwrap() else { panic!() };
    assert_eq!(omega, SurdRatFunc::from_ratfunc(rf("2/tau")));
}

#[test]
fn verify_examples() {
    let case1 = |w: &str, p: &str| Outcome::Case1 {
        omega: SurdRatFunc::from_ratfunc(rf(w)),
        p: SurdRatFunc::from_ratfunc(rf(p)),
        independent_solutions: 1,
    };
    assert!(verify_solution(&rf("0"), &case1("0", "1")));
    assert!(verify_solution(&rf("1"), &case1("1", "1")));
    assert!(!verify_solution(&rf("1"), &case1("2", "1")));
    assert!(!verify_solution(&rf("1"), &Outcome::NoLiouvillian));
}

#[test]
fn no_liouvillian_instances() {
    for src in ["tau", "(32*tau^3 + 15)/(4*tau^2)"] {
        let kr = kovacic(&rf(src)).unwrap();
        assert_eq!(kr.outcome, Outcome::NoLiouvillian, "{src}");
    }
}

#[test]
fn irrational_exponents() {
    // zeta = tau^a with a irrational: r = a(a-1)/tau^2 = 1/tau^2
    let kr = kovacic(&rf("1/tau^2")).unwrap();
    let Outcome::Case1 {
        omega,
        independent_solutions,
        ..
    } = &kr.outcome
    else {
        panic!("{kr:?}")
    };
    assert!(omega.as_rational().is_none());
    assert_eq!(*independent_solutions, 2);
    assert!(verify_solution(&rf("1/tau^2"), &kr.outcome));
    // exp(+-i tau)
    let kr = kovacic(&rf("-1")).unwrap();
    assert!(verify_solution(&rf("-1"), &kr.outcome));
}

#[test]
fn weber_and_higher_poles() {
    for src in ["tau^2 + 1", "1/tau^4 - 2/tau^3", "tau^2 - 3"] {
        let kr = kovacic(&rf(src)).unwrap();
        assert_eq!(kr.outcome.case(), Some(Case::Case1), "{src}");
        assert!(verify_solution(&rf(src), &kr.outcome), "{src}");
    }
    // parabolic-cylinder equation without elementary solutions
    assert_eq!(kovacic(&rf("tau^2")).unwrap().outcome, Outcome::NoLiouvillian);
}

#[test]
fn circular_sitnikov_is_liouvillian() {
    let r = rf("(31*tau^2 - 34)/(4*(1 - tau^2)^2)");
    let kr = kovacic(&r).unwrap();
    assert!(kr.outcome.is_liouvillian(), "{:?}", kr.trail);
    assert!(verify_solution(&r, &kr.outcome));
    let v = galois_verdict(&kr, PointClass::RegularSingular, true);
    assert_eq!(v.virtually_abelian, Tristate::Yes);
    assert_eq!(v.obstruction, Obstruction::None);
}

#[test]
fn case2_example() {
    // zeta = tau^(1/4) exp(sqrt(tau)): omega = 1/(4 tau) + 1/(2 sqrt(tau))
    let r = rf("1/(4*tau) - 3/(16*tau^2)");
    let kr = kovacic(&r).unwrap();
    assert_eq!(kr.outcome.case(), Some(Case::Case2), "{:?}", kr.trail);
    assert!(verify_solution(&r, &kr.outcome));
    let v = galois_verdict(&kr, PointClass::IrregularSingular, true);
    assert_eq!(v.group_class, GroupClass::Imprimitive);
}

#[test]
fn sextic_example() {
    let r = rf("(4*tau^6 - 8*tau^5 + 12*tau^4 + 4*tau^3 + 7*tau^2 - 20*tau + 4)/(4*tau^4)");
    let kr = kovacic(&r).unwrap();
    assert!(kr.outcome.is_liouvillian(), "{:?}", kr.trail);
    assert!(verify_solution(&r, &kr.outcome));
}

#[test]
fn case3_tetrahedral() {
    let r = rf("-3/(16*tau^2) - 2/(9*(tau - 1)^2) + 3/(16*tau*(tau - 1))");
    let kr = kovacic(&r).unwrap();
    let Outcome::Case3 { n, .. } = &kr.outcome else {
        panic!("{:?}", kr)
    };
    assert_eq!(*n, 4);
    assert!(verify_solution(&r, &kr.outcome));
    let v = galois_verdict(&kr, PointClass::RegularSingular, true);
    assert_eq!(v.group_class, GroupClass::Finite);
}

#[test]
fn verdicts() {
    let airy = kovacic(&rf("tau")).unwrap();
    let v = galois_verdict(&airy, PointClass::IrregularSingular, true);
    assert_eq!(
        (v.group_class, v.virtually_abelian, v.obstruction),
        (GroupClass::SL2, Tristate::No, Obstruction::RationalFirstIntegrals)
    );
    let v = galois_verdict(&airy, PointClass::RegularSingular, true);
    assert_eq!(v.obstruction, Obstruction::MeromorphicFirstIntegrals);
    let v = galois_verdict(&airy, PointClass::Ordinary, true);
    assert_eq!(v.obstruction, Obstruction::Unknown);
    let v = galois_verdict(&airy, PointClass::IrregularSingular, false);
    assert_eq!(v.virtually_abelian, Tristate::Unknown);

    // single exponential solution exp(tau^2/2): Borel
    let kr = kovacic(&rf("tau^2 + 1")).unwrap();
    let v = galois_verdict(&kr, PointClass::IrregularSingular, true);
    assert_eq!(v.group_class, GroupClass::BorelNonabelian);
    assert_eq!(v.obstruction, Obstruction::RationalFirstIntegrals);

    // r = 0: solutions 1 and tau
    let kr = kovacic(&RatFunc::zero()).unwrap();
    let v = galois_verdict(&kr, PointClass::Ordinary, true);
    assert_eq!(v.virtually_abelian, Tristate::Yes);
}

#[test]
fn trail_is_deterministic_and_serializes() {
    let r = rf("(31*tau^2 - 34)/(4*(1 - tau^2)^2)");
    let a = kovacic(&r).unwrap();
    let b = kovacic(&r).unwrap();
    assert_eq!(a, b);
    let json = serde_json::to_string(&a).unwrap();
    assert!(json.contains("\"attempts\""));
}
