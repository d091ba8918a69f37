//! Kovacic's algorithm for `zeta'' = r zeta` with `r` in `Q(tau)`, and the
//! Morales-Ramis verdict built on its outcome.
//!
//! Every success is checked exactly before it is returned: case 1 by the
//! linear equation for `P`, cases 2 and 3 by showing that the minimal
//! polynomial of `omega = zeta'/zeta` is invariant under the Riccati
//! derivation `omega' = r - omega^2`. `NoLiouvillian` is returned only after
//! all feasible families have been tried; the search is recorded in
//! [`Trail`].

mod ext;
mod local;
mod search;

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::algebra::{order_at_infinity, pole_data, AlgebraError, Poly, RatFunc, Q};
use crate::transform::PointClass;

pub use ext::SurdRatFunc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Case {
    Case1,
    Case2,
    Case3,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleOrder {
    #[serde(serialize_with = "crate::algebra::serde_q::one")]
    pub location: Q,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseConditions {
    pub feasible: Vec<Case>,
    pub poles: Vec<PoleOrder>,
    /// `None` when `r = 0`, whose order at infinity is unbounded.
    pub order_at_infinity: Option<i64>,
}

impl CaseConditions {
    pub fn allows(&self, c: Case) -> bool {
        self.feasible.contains(&c)
    }
}

fn tau_text<S: Serializer>(f: &RatFunc, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.display_in("tau"))
}

fn tau_texts<S: Serializer>(fs: &[RatFunc], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(fs.iter().map(|f| f.display_in("tau")))
}

fn poly_text<S: Serializer>(p: &Poly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.display_in("tau"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "case")]
pub enum Outcome {
    /// `zeta = P exp(int omega)`. `independent_solutions` is 2 when the
    /// search found two solutions of this form that are not proportional.
    Case1 {
        omega: SurdRatFunc,
        p: SurdRatFunc,
        independent_solutions: usize,
    },
    /// `omega^2 - phi omega + (phi'/2 + phi^2/2 - r) = 0`; the minimal
    /// polynomial is listed from the constant coefficient up.
    Case2 {
        #[serde(serialize_with = "tau_text")]
        theta: RatFunc,
        #[serde(serialize_with = "poly_text")]
        p: Poly,
        #[serde(serialize_with = "tau_text")]
        phi: RatFunc,
        #[serde(serialize_with = "tau_texts")]
        minimal_polynomial: Vec<RatFunc>,
    },
    /// Monic degree-`n` relation for `omega`, constant coefficient first.
    Case3 {
        n: u32,
        #[serde(serialize_with = "tau_text")]
        theta: RatFunc,
        #[serde(serialize_with = "poly_text")]
        p: Poly,
        #[serde(serialize_with = "tau_texts")]
        minimal_polynomial: Vec<RatFunc>,
    },
    NoLiouvillian,
}

impl Outcome {
    pub fn is_liouvillian(&self) -> bool {
        !matches!(self, Outcome::NoLiouvillian)
    }

    pub fn case(&self) -> Option<Case> {
        match self {
            Outcome::Case1 { .. } => Some(Case::Case1),
            Outcome::Case2 { .. } => Some(Case::Case2),
            Outcome::Case3 { .. } => Some(Case::Case3),
            Outcome::NoLiouvillian => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSet {
    pub point: String,
    pub values: Vec<String>,
}

/// Search record of one case (and one `n` in case 3).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseAttempt {
    pub case: Case,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Exponents (case 1) or exponent-set elements (cases 2, 3) per point.
    pub exponents: Vec<PointSet>,
    pub families: usize,
    /// Trial degree to the number of families that produced it.
    pub trial_degrees: BTreeMap<usize, usize>,
    pub solved: bool,
}

impl CaseAttempt {
    fn new(case: Case, n: Option<u32>) -> Self {
        CaseAttempt {
            case,
            n,
            exponents: Vec::new(),
            families: 0,
            trial_degrees: BTreeMap::new(),
            solved: false,
        }
    }

    pub(crate) fn record_degree(&mut self, d: usize) {
        *self.trial_degrees.entry(d).or_insert(0) += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trail {
    pub conditions: CaseConditions,
    pub attempts: Vec<CaseAttempt>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KovacicResult {
    pub outcome: Outcome,
    pub trail: Trail,
}

pub fn necessary_conditions(r: &RatFunc) -> Result<CaseConditions, AlgebraError> {
    let poles = pole_data(r)?;
    let inf = if r.is_zero() {
        None
    } else {
        Some(order_at_infinity(r)?)
    };
    let orders: Vec<usize> = poles.iter().map(|p| p.order).collect();
    let mut feasible = Vec::new();
    if orders.iter().all(|&o| o == 1 || o % 2 == 0) && inf.is_none_or(|o| o % 2 == 0 || o > 2) {
        feasible.push(Case::Case1);
    }
    if orders.iter().any(|&o| o == 2 || (o > 2 && o % 2 == 1)) {
        feasible.push(Case::Case2);
    }
    if orders.iter().all(|&o| o <= 2) && inf.is_none_or(|o| o >= 2) {
        feasible.push(Case::Case3);
    }
    Ok(CaseConditions {
        feasible,
        poles: poles
            .iter()
            .map(|p| PoleOrder {
                location: p.location.clone(),
                order: p.order,
            })
            .collect(),
        order_at_infinity: inf,
    })
}

fn context(r: &RatFunc) -> Result<(search::Ctx, CaseConditions), AlgebraError> {
    let conditions = necessary_conditions(r)?;
    let ctx = search::Ctx {
        r: r.clone(),
        poles: pole_data(r)?,
        inf: conditions.order_at_infinity,
    };
    Ok((ctx, conditions))
}

fn run_case1(ctx: &search::Ctx, attempts: &mut Vec<CaseAttempt>) -> Option<Outcome> {
    let mut a = CaseAttempt::new(Case::Case1, None);
    let found = search::case1(ctx, &mut a);
    attempts.push(a);
    found.map(|f| Outcome::Case1 {
        omega: f.omega,
        p: f.p,
        independent_solutions: f.independent,
    })
}

fn run_case2(ctx: &search::Ctx, attempts: &mut Vec<CaseAttempt>) -> Option<Outcome> {
    let mut a = CaseAttempt::new(Case::Case2, None);
    let found = search::case2(ctx, &mut a);
    attempts.push(a);
    found
}

fn run_case3(ctx: &search::Ctx, attempts: &mut Vec<CaseAttempt>) -> Option<Outcome> {
    for n in [4, 6, 12] {
        let mut a = CaseAttempt::new(Case::Case3, Some(n));
        let found = search::case3(ctx, n, &mut a);
        attempts.push(a);
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Case 1 alone; `None` when infeasible or exhausted.
pub fn case1(r: &RatFunc) -> Result<Option<Outcome>, AlgebraError> {
    let (ctx, cond) = context(r)?;
    Ok(cond
        .allows(Case::Case1)
        .then(|| run_case1(&ctx, &mut Vec::new()))
        .flatten())
}

pub fn case2(r: &RatFunc) -> Result<Option<Outcome>, AlgebraError> {
    let (ctx, cond) = context(r)?;
    Ok(cond
        .allows(Case::Case2)
        .then(|| run_case2(&ctx, &mut Vec::new()))
        .flatten())
}

pub fn case3(r: &RatFunc) -> Result<Option<Outcome>, AlgebraError> {
    let (ctx, cond) = context(r)?;
    Ok(cond
        .allows(Case::Case3)
        .then(|| run_case3(&ctx, &mut Vec::new()))
        .flatten())
}

/// Tries the feasible cases in the order 1, 2, 3; the first verified
/// success wins.
pub fn kovacic(r: &RatFunc) -> Result<KovacicResult, AlgebraError> {
    let (ctx, conditions) = context(r)?;
    log::debug!(
        "kovacic: r = {}, feasible {:?}",
        r.display_in("tau"),
        conditions.feasible
    );
    let mut attempts = Vec::new();
    let runners: [(Case, fn(&search::Ctx, &mut Vec<CaseAttempt>) -> Option<Outcome>); 3] = [
        (Case::Case1, run_case1),
        (Case::Case2, run_case2),
        (Case::Case3, run_case3),
    ];
    let mut outcome = Outcome::NoLiouvillian;
    for (case, run) in runners {
        if !conditions.allows(case) {
            continue;
        }
        if let Some(o) = run(&ctx, &mut attempts) {
            debug_assert!(verify_solution(r, &o));
            outcome = o;
            break;
        }
    }
    for a in &attempts {
        log::debug!(
            "{:?} n={:?}: {} families, degrees {:?}, solved {}",
            a.case,
            a.n,
            a.families,
            a.trial_degrees,
            a.solved
        );
    }
    Ok(KovacicResult {
        outcome,
        trail: Trail {
            conditions,
            attempts,
        },
    })
}

/// `sum a_i w^i` invariant under `w' = r - w^2`: with `Q` monic of degree
/// `n`, `dQ/dtau + (r - w^2) dQ/dw` must be a multiple of `Q`.
pub(crate) fn verify_relation(r: &RatFunc, coeffs: &[RatFunc]) -> bool {
    let n = coeffs.len() - 1;
    if n == 0 || coeffs[n] != RatFunc::one() {
        return false;
    }
    let mut d = vec![RatFunc::zero(); n + 2];
    for (i, a) in coeffs.iter().enumerate() {
        d[i] = &d[i] + &a.derivative();
        if i > 0 {
            let ia = a.scale(&Q::from_integer(i.into()));
            d[i - 1] = &d[i - 1] + &(r * &ia);
            d[i + 1] = &d[i + 1] - &ia;
        }
    }
    for top in (n..=n + 1).rev() {
        let c = d[top].clone();
        if c.is_zero() {
            continue;
        }
        for (j, a) in coeffs.iter().enumerate() {
            let k = top - n + j;
            d[k] = &d[k] - &(&c * a);
        }
    }
    d.iter().all(RatFunc::is_zero)
}

/// Exact check of a success outcome; `false` for `NoLiouvillian`.
pub fn verify_solution(r: &RatFunc, outcome: &Outcome) -> bool {
    match outcome {
        Outcome::Case1 { omega, p, .. } => {
            !p.is_zero() && search::case1_residual(r, omega, p).is_zero()
        }
        Outcome::Case2 {
            minimal_polynomial, ..
        }
        | Outcome::Case3 {
            minimal_polynomial, ..
        } => verify_relation(r, minimal_polynomial),
        Outcome::NoLiouvillian => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupClass {
    SL2,
    BorelNonabelian,
    Diagonal,
    UnipotentOrFinite,
    Imprimitive,
    Finite,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tristate {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Obstruction {
    RationalFirstIntegrals,
    MeromorphicFirstIntegrals,
    None,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaloisVerdict {
    pub group_class: GroupClass,
    pub virtually_abelian: Tristate,
    pub obstruction: Obstruction,
    pub rationale: String,
}

/// Whether `exp(int omega)` is algebraic over the coefficient field: only
/// simple poles, each with rational residue, and no polynomial part.
fn exp_integral_is_algebraic(omega: &SurdRatFunc) -> bool {
    omega.polynomial_part().is_zero()
        && omega.parts().all(|(k, f)| {
            k == &num_bigint::BigInt::from(1)
                && pole_data(f).is_ok_and(|ps| ps.iter().all(|p| p.order == 1))
        })
}

/// Morales-Ramis verdict from the Kovacic outcome.
///
/// `infinity_class` is the class of infinity in the equation before the
/// first-derivative term was removed. `identity_component_preserved` states
/// that the equation came from the variational equation by a change of
/// variable that keeps the identity component of the Galois group (true for
/// the Hamiltonian changes used here, and for equations given directly);
/// when false nothing is concluded.
pub fn galois_verdict(
    kr: &KovacicResult,
    infinity_class: PointClass,
    identity_component_preserved: bool,
) -> GaloisVerdict {
    use GroupClass::*;
    let (group_class, abelian, why) = match &kr.outcome {
        Outcome::NoLiouvillian => (
            SL2,
            Tristate::No,
            "no Liouvillian solution: the Galois group is SL(2, C), whose identity component is not abelian",
        ),
        Outcome::Case2 { .. } => (
            Imprimitive,
            Tristate::Yes,
            "case 2: imprimitive group, identity component contained in a torus",
        ),
        Outcome::Case3 { .. } => (Finite, Tristate::Yes, "case 3: finite primitive group"),
        Outcome::Case1 {
            independent_solutions,
            ..
        } if *independent_solutions >= 2 => (
            Diagonal,
            Tristate::Yes,
            "case 1 with two independent solutions of the form P exp(int omega): diagonal group",
        ),
        Outcome::Case1 { omega, .. } if exp_integral_is_algebraic(omega) => (
            UnipotentOrFinite,
            Tristate::Yes,
            "case 1 with exp(int omega) algebraic: identity component unipotent or trivial",
        ),
        Outcome::Case1 { .. } => (
            BorelNonabelian,
            Tristate::No,
            "case 1 with a single transcendental exponential solution: non-abelian Borel group",
        ),
    };
    if !identity_component_preserved {
        return GaloisVerdict {
            group_class: Undecided,
            virtually_abelian: Tristate::Unknown,
            obstruction: Obstruction::Unknown,
            rationale: format!(
                "{why}; the change of variable is not known to preserve the identity component"
            ),
        };
    }
    let (obstruction, tail) = match (abelian, infinity_class) {
        (Tristate::No, PointClass::RegularSingular) => (
            Obstruction::MeromorphicFirstIntegrals,
            "infinity is a regular singular point: no complete set of meromorphic first integrals",
        ),
        (Tristate::No, PointClass::IrregularSingular) => (
            Obstruction::RationalFirstIntegrals,
            "infinity is an irregular singular point: no complete set of rational first integrals",
        ),
        (Tristate::No, PointClass::Ordinary) => (
            Obstruction::Unknown,
            "infinity is an ordinary point: the obstruction type is not determined",
        ),
        _ => (Obstruction::None, "no obstruction to integrability"),
    };
    GaloisVerdict {
        group_class,
        virtually_abelian: abelian,
        obstruction,
        rationale: format!("{why}; {tail}"),
    }
}

#[cfg(test)]
mod tests;
