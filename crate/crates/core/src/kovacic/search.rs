//! The three case searches. Each enumerates its finite family of exponent
//! choices, keeps the families whose trial degree is a nonnegative integer
//! and solves for the polynomial exactly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ext::{field_basis, SurdRatFunc};
use super::local::{case1_at_infinity, case1_at_pole, integer_family, order_two_root, Choice};
use super::{verify_relation, CaseAttempt, Outcome, PointSet};
use crate::algebra::{
    format_q, laurent_at_infinity, linsolve, LinSolution, PoleData, Poly, RatFunc, Q,
};

pub(crate) struct Ctx {
    pub r: RatFunc,
    pub poles: Vec<PoleData>,
    /// `None` for `r = 0`.
    pub inf: Option<i64>,
}

impl Ctx {
    fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = self.poles.iter().map(|p| format_q(&p.location)).collect();
        out.push("infinity".into());
        out
    }

    /// Coefficient of `x^-2` in the expansion at infinity (zero when the
    /// order there exceeds two).
    fn gamma_at_infinity(&self) -> Q {
        match self.inf {
            Some(2) => laurent_at_infinity(&self.r, 1).coeff(2),
            _ => Q::zero(),
        }
    }
}

/// Calls `f` on every element of the product of `sets`, in lexicographic
/// order of indices.
fn for_each_family<T>(sets: &[Vec<T>], mut f: impl FnMut(&[&T]) -> bool) {
    if sets.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; sets.len()];
    loop {
        let pick: Vec<&T> = idx.iter().zip(sets).map(|(&i, s)| &s[i]).collect();
        if !f(&pick) {
            return;
        }
        let mut k = sets.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < sets[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn monomial(i: usize) -> SurdRatFunc {
    SurdRatFunc::from_ratfunc(RatFunc::from_poly(Poly::monomial(Q::one(), i)))
}

/// Finds a monic `P` of degree `d`, with coefficients in the field spanned by
/// `basis`, such that the linear operator `op` annihilates it. The flag is
/// set when the solution is not unique.
fn solve_monic(
    op: &dyn Fn(&SurdRatFunc) -> SurdRatFunc,
    d: usize,
    basis: &[BigInt],
) -> Option<(SurdRatFunc, bool)> {
    let lead = op(&monomial(d));
    let mut unknowns: Vec<(usize, BigInt)> = Vec::new();
    let mut cols: Vec<SurdRatFunc> = Vec::new();
    for i in 0..d {
        for k in basis {
            let unit = SurdRatFunc::radical(k.clone(), RatFunc::from_poly(Poly::monomial(Q::one(), i)));
            cols.push(op(&unit));
            unknowns.push((i, k.clone()));
        }
    }
    let den = cols
        .iter()
        .chain(std::iter::once(&lead))
        .fold(Poly::one(), |acc, c| Poly::lcm(&acc, &c.common_denominator()));
    let mut rows: BTreeMap<(BigInt, usize), usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, Q)> = Vec::new();
    let mut rhs: BTreeMap<usize, Q> = BTreeMap::new();
    let row_of = |key: (BigInt, usize), rows: &mut BTreeMap<(BigInt, usize), usize>| {
        let n = rows.len();
        *rows.entry(key).or_insert(n)
    };
    for (j, col) in cols.iter().enumerate() {
        for (k, p) in col.numerators_over(&den) {
            for (pw, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    let row = row_of((k.clone(), pw), &mut rows);
                    entries.push((row, j, c.clone()));
                }
            }
        }
    }
    for (k, p) in lead.numerators_over(&den) {
        for (pw, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let row = row_of((k.clone(), pw), &mut rows);
                rhs.insert(row, -c.clone());
            }
        }
    }
    let nrows = rows.len();
    let ncols = cols.len();
    let mut a = vec![vec![Q::zero(); ncols]; nrows];
    for (i, j, c) in entries {
        a[i][j] = c;
    }
    let b: Vec<Q> = (0..nrows)
        .map(|i| rhs.get(&i).cloned().unwrap_or_else(Q::zero))
        .collect();
    let (x, free) = match linsolve(&a, &b, ncols) {
        LinSolution::Unique(x) => (x, false),
        LinSolution::Underdetermined { particular, .. } => (particular, true),
        LinSolution::NoSolution => return None,
    };
    let mut p = monomial(d);
    for ((i, k), v) in unknowns.iter().zip(x) {
        if !v.is_zero() {
            p = p.add(&SurdRatFunc::radical(
                k.clone(),
                RatFunc::from_poly(Poly::monomial(v, *i)),
            ));
        }
    }
    Some((p, free))
}

/// A nonnegative integer trial degree, if `v` is one.
fn trial_degree(v: &Q) -> Option<usize> {
    if v.is_integer() && !v.is_negative() {
        v.to_integer().to_usize()
    } else {
        None
    }
}

fn point_sets(labels: &[String], values: Vec<Vec<String>>) -> Vec<PointSet> {
    labels
        .iter()
        .zip(values)
        .map(|(point, values)| PointSet {
            point: point.clone(),
            values,
        })
        .collect()
}

pub(crate) struct Case1Found {
    pub omega: SurdRatFunc,
    pub p: SurdRatFunc,
    pub independent: usize,
}

fn case1_operator(r: &RatFunc, omega: &SurdRatFunc) -> impl Fn(&SurdRatFunc) -> SurdRatFunc {
    let two_omega = omega.scale(&Q::from_integer(2.into()));
    let c0 = omega
        .derivative()
        .add(&omega.mul(omega))
        .sub(&SurdRatFunc::from_ratfunc(r.clone()));
    move |p: &SurdRatFunc| {
        let dp = p.derivative();
        dp.derivative().add(&two_omega.mul(&dp)).add(&c0.mul(p))
    }
}

/// `p'' + 2 omega p' + (omega' + omega^2 - r) p`
pub(crate) fn case1_residual(r: &RatFunc, omega: &SurdRatFunc, p: &SurdRatFunc) -> SurdRatFunc {
    case1_operator(r, omega)(p)
}

/// Whether `p1 e^{int w1}` and `p2 e^{int w2}` are independent.
fn independent(a: &(SurdRatFunc, SurdRatFunc), b: &(SurdRatFunc, SurdRatFunc)) -> bool {
    let (w1, p1) = a;
    let (w2, p2) = b;
    let lhs = w1.sub(w2).mul(&p1.mul(p2));
    let wr = p1.derivative().mul(p2).sub(&p1.mul(&p2.derivative()));
    !lhs.add(&wr).is_zero()
}

pub(crate) fn case1(ctx: &Ctx, trail: &mut CaseAttempt) -> Option<Case1Found> {
    let mut sets: Vec<Vec<Choice>> = ctx
        .poles
        .iter()
        .map(|p| case1_at_pole(&p.location, p.order, &p.principal_part))
        .collect();
    sets.push(case1_at_infinity(&ctx.r, ctx.inf));
    trail.exponents = point_sets(
        &ctx.labels(),
        sets.iter()
            .map(|s| s.iter().map(|c| c.alpha.to_string()).collect())
            .collect(),
    );
    let mut found: Vec<(SurdRatFunc, SurdRatFunc)> = Vec::new();
    let mut free_solution = false;
    for_each_family(&sets, |pick| {
        trail.families += 1;
        let (inf, finite) = pick.split_last().expect("infinity is always present");
        let mut d = inf.alpha.clone();
        for c in finite {
            d = &d - &c.alpha;
        }
        let Some(d) = d.as_rational().as_ref().and_then(trial_degree) else {
            return true;
        };
        trail.record_degree(d);
        let omega = pick
            .iter()
            .fold(SurdRatFunc::zero(), |acc, c| acc.add(&c.omega_part));
        let basis = field_basis(&omega.radicands());
        let op = case1_operator(&ctx.r, &omega);
        if let Some((p, free)) = solve_monic(&op, d, &basis) {
            log::debug!("case 1: omega = {omega}, P = {p}");
            free_solution |= free;
            found.push((omega, p));
        }
        true
    });
    let first = found.first()?.clone();
    let distinct = free_solution || found.iter().skip(1).any(|s| independent(&first, s));
    trail.solved = true;
    Some(Case1Found {
        omega: first.0,
        p: first.1,
        independent: if distinct { 2 } else { 1 },
    })
}

fn sum_of_poles(poles: &[PoleData], e: &[&BigInt], scale: &Q) -> RatFunc {
    poles.iter().zip(e).fold(RatFunc::zero(), |acc, (p, ec)| {
        &acc + &RatFunc::pole_term(scale * Q::from_integer((*ec).clone()), &p.location, 1)
    })
}

fn rat(s: &SurdRatFunc) -> RatFunc {
    s.as_rational().expect("rational search")
}

pub(crate) fn case2(ctx: &Ctx, trail: &mut CaseAttempt) -> Option<Outcome> {
    let two = Q::from_integer(2.into());
    let mut sets: Vec<Vec<BigInt>> = ctx
        .poles
        .iter()
        .map(|p| match p.order {
            1 => vec![BigInt::from(4)],
            2 => integer_family(2, &two, &order_two_root(&p.principal_part[0]), 1),
            o => vec![BigInt::from(o)],
        })
        .collect();
    sets.push(match ctx.inf {
        None => vec![0.into(), 2.into(), 4.into()],
        Some(o) if o > 2 => vec![0.into(), 2.into(), 4.into()],
        Some(2) => integer_family(2, &two, &order_two_root(&ctx.gamma_at_infinity()), 1),
        Some(o) => vec![BigInt::from(o)],
    });
    trail.exponents = point_sets(
        &ctx.labels(),
        sets.iter().map(|s| s.iter().map(|v| v.to_string()).collect()).collect(),
    );
    let r = &ctx.r;
    let mut out = None;
    for_each_family(&sets, |pick| {
        trail.families += 1;
        let (e_inf, e_c) = pick.split_last().unwrap();
        let total: BigInt = e_c.iter().map(|v| (*v).clone()).sum();
        let d2 = Q::new((*e_inf) - total, 2.into());
        let Some(d) = trial_degree(&d2) else {
            return true;
        };
        trail.record_degree(d);
        let theta = sum_of_poles(&ctx.poles, e_c, &Q::new(1.into(), 2.into()));
        let th1 = theta.derivative();
        let th2 = th1.derivative();
        let three = Q::from_integer(3.into());
        let four = Q::from_integer(4.into());
        let c2 = theta.scale(&three);
        let c1 = &(&(&theta * &theta).scale(&three) + &th1.scale(&three)) - &r.scale(&four);
        let c0 = &(&(&th2 + &(&theta * &th1).scale(&three)) + &(&(&theta * &theta) * &theta))
            - &(&(r * &theta).scale(&four) + &r.derivative().scale(&two));
        let op = |p: &SurdRatFunc| {
            let p1 = p.derivative();
            let p2 = p1.derivative();
            p2.derivative()
                .add(&p2.mul_rat(&c2))
                .add(&p1.mul_rat(&c1))
                .add(&p.mul_rat(&c0))
        };
        let Some((p, _)) = solve_monic(&op, d, &[BigInt::one()]) else {
            return true;
        };
        let p = rat(&p);
        let phi = &theta + &p.derivative().checked_div(&p).expect("nonzero P");
        let half = Q::new(1.into(), 2.into());
        let b0 = &(&phi.derivative().scale(&half) + &(&phi * &phi).scale(&half)) - r;
        let coeffs = vec![b0, -&phi, RatFunc::one()];
        if !verify_relation(r, &coeffs) {
            log::warn!("case 2 candidate failed the Riccati check; continuing");
            return true;
        }
        log::debug!("case 2: theta = {theta}, P = {p}");
        trail.solved = true;
        out = Some(Outcome::Case2 {
            theta,
            p: p.num().clone(),
            phi,
            minimal_polynomial: coeffs,
        });
        false
    });
    out
}

fn factorial(n: u32) -> Q {
    Q::from_integer((1..=n).map(BigInt::from).product())
}

/// `P_n, ..., P_0, P_{-1}` of the case-3 recursion, indexed by `i + 1`.
fn case3_chain(
    n: u32,
    p: &SurdRatFunc,
    s: &RatFunc,
    ds: &RatFunc,
    s_theta: &RatFunc,
    s2r: &RatFunc,
) -> Vec<SurdRatFunc> {
    let n_i = n as usize;
    let mut chain = vec![SurdRatFunc::zero(); n_i + 2];
    chain[n_i + 1] = p.neg();
    for i in (0..=n).rev() {
        let pi = &chain[i as usize + 1];
        let ni = Q::from_integer((n - i).into());
        let mut next = pi
            .derivative()
            .mul_rat(s)
            .neg()
            .add(&pi.mul_rat(&(&ds.scale(&ni) - s_theta)));
        if i < n {
            let coef = ni * Q::from_integer((i + 1).into());
            next = next.sub(&chain[i as usize + 2].mul_rat(&s2r.scale(&coef)));
        }
        chain[i as usize] = next;
    }
    chain
}

pub(crate) fn case3(ctx: &Ctx, n: u32, trail: &mut CaseAttempt) -> Option<Outcome> {
    let step = Q::new(12.into(), n.into());
    let half_n = i64::from(n / 2);
    let mut sets: Vec<Vec<BigInt>> = ctx
        .poles
        .iter()
        .map(|p| match p.order {
            1 => vec![BigInt::from(12)],
            _ => integer_family(6, &step, &order_two_root(&p.principal_part[0]), half_n),
        })
        .collect();
    sets.push(integer_family(6, &step, &order_two_root(&ctx.gamma_at_infinity()), half_n));
    trail.exponents = point_sets(
        &ctx.labels(),
        sets.iter().map(|s| s.iter().map(|v| v.to_string()).collect()).collect(),
    );
    let r = &ctx.r;
    let s = ctx
        .poles
        .iter()
        .fold(Poly::one(), |acc, p| &acc * &Poly::linear_root(&p.location));
    let s = RatFunc::from_poly(s);
    let ds = s.derivative();
    let s2r = &(&s * &s) * r;
    let ratio = Q::new(n.into(), 12.into());
    let mut out = None;
    for_each_family(&sets, |pick| {
        trail.families += 1;
        let (e_inf, e_c) = pick.split_last().unwrap();
        let total: BigInt = e_c.iter().map(|v| (*v).clone()).sum();
        let dq = &ratio * Q::from_integer((*e_inf) - total);
        let Some(d) = trial_degree(&dq) else {
            return true;
        };
        trail.record_degree(d);
        let theta = sum_of_poles(&ctx.poles, e_c, &ratio);
        let s_theta = &s * &theta;
        let op = |p: &SurdRatFunc| case3_chain(n, p, &s, &ds, &s_theta, &s2r)[0].clone();
        let Some((p, _)) = solve_monic(&op, d, &[BigInt::one()]) else {
            return true;
        };
        let chain = case3_chain(n, &p, &s, &ds, &s_theta, &s2r);
        let mut coeffs: Vec<RatFunc> = (0..=n)
            .map(|i| {
                let si = s.pow(i as i32).expect("nonzero S");
                (&si * &rat(&chain[i as usize + 1])).scale(&factorial(n - i).recip())
            })
            .collect();
        let lead = coeffs[n as usize].inv().expect("nonzero leading coefficient");
        for c in coeffs.iter_mut() {
            *c = &*c * &lead;
        }
        if !verify_relation(r, &coeffs) {
            log::warn!("case 3 (n = {n}) candidate failed the Riccati check; continuing");
            return true;
        }
        log::debug!("case 3: n = {n}, theta = {theta}, P = {p}");
        trail.solved = true;
        out = Some(Outcome::Case3 {
            n,
            theta,
            p: rat(&p).num().clone(),
            minimal_polynomial: coeffs,
        });
        false
    });
    out
}
