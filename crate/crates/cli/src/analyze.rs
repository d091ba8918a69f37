//! The full pipeline: framings, solution check, variational equation,
//! algebrization, reduction, singular points, Kovacic and the verdict.

use std::collections::BTreeMap;
use std::time::Instant;

use log::{debug, info};
use nahs_core::algebra::{format_q, parse_q, to_f64, AlgebraError, RatFunc, Q};
use nahs_core::kovacic::{galois_verdict, kovacic, verify_solution, GaloisVerdict, KovacicResult};
use nahs_core::symexpr::{
    differentiate, eval_numeric, lower_to_ratfunc, parse, simplify, substitute, zero_test,
    Bindings, Expr, RewriteRules, RuleKind, Var,
};
use nahs_core::transform::{
    algebrization_residual, algebrize, check_hamiltonian_change, classify_point,
    remove_first_derivative, singularity_table, substitution_residual, AlgSolde,
    ChangeOfVariables, Point, PointClass, SingularPoint, TransformError,
};
use nahs_core::variational::{
    build_framing_cor2, build_framing_thm1, build_framing_thm2, framing_from_potential,
    integral_curve, nve, verify_particular_solution, Framing, IntegralCurve, SolutionCheck,
    VariationalError,
};
use serde::Serialize;

use crate::error::CliError;
use crate::params::Params;
use crate::registry::{self, Expected, ExpectedCase, ExampleSpec, FramingSpec, Source};
use crate::report::{Report, Status};

/// Default threshold for the numerical oracles.
pub const DEFAULT_ORACLE_TOL: f64 = 1e-8;

/// What to analyse: a registry entry (optionally with overrides) or an
/// equation given in full.
#[derive(Debug, Clone, Default)]
pub struct AnalyzeRequest {
    pub example: Option<String>,
    pub f: Option<String>,
    pub solution: Option<String>,
    pub change: Option<String>,
    /// Rational, parameter name, or `-name`.
    pub scale: Option<String>,
    pub params: Params,
    /// Oracle threshold; residuals above it are reported as warnings.
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Input {
    pub example: Option<String>,
    pub family: Option<String>,
    pub f: String,
    pub solution: String,
    pub change: String,
    pub scale: String,
    pub params: BTreeMap<String, String>,
    pub oracle_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Equal,
    /// Equal to the negative of the reference.
    Negated,
    Different,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub reference: String,
    pub agreement: Agreement,
}

#[derive(Debug, Clone, Serialize)]
pub struct FramingReport {
    pub name: &'static str,
    pub framing: Framing,
    pub hamiltonian: String,
    /// Hamilton's equations give back `x'' = f`.
    pub reproduces_f: bool,
    pub integral_curve: IntegralCurve,
    pub curve_satisfies_hamilton: bool,
    pub nve_k: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NveReport {
    /// `xi'' = k(t) xi`.
    pub k: String,
    pub framings_agree: Option<bool>,
    /// Largest relative difference between framings at 20 sample times.
    pub max_framing_difference: Option<f64>,
    pub reference: Option<Comparison>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebrizationReport {
    pub change: String,
    pub tau: String,
    pub hamiltonian_change: bool,
    pub alg_solde: AlgSolde,
    pub t_interval: [f64; 2],
    pub residual: f64,
    pub reference_p: Option<Comparison>,
    pub reference_q: Option<Comparison>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    /// `zeta'' = r zeta`.
    pub r: String,
    pub multiplier: String,
    pub tau_interval: [f64; 2],
    pub substitution_residual: f64,
    pub reference_r: Option<Comparison>,
}

/// The algebrization and reduction redone from the printed variational
/// coefficient, when it differs in sign from the derived one.
#[derive(Debug, Clone, Serialize)]
pub struct PrintedChain {
    pub k: String,
    pub alg_solde: AlgSolde,
    pub r: String,
    pub substitution_residual: f64,
    pub reference_r: Option<Comparison>,
    pub liouvillian: bool,
    pub negated_liouvillian: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KovacicReport {
    pub r: String,
    pub liouvillian: bool,
    /// Exact check of the returned solution; absent for `NoLiouvillian`.
    pub solution_verified: Option<bool>,
    pub result: KovacicResult,
    pub verdict: GaloisVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpectedCheck {
    pub source: Source,
    pub expected: Expected,
    pub negated_liouvillian: Option<bool>,
    pub reproduced: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Analysis {
    pub input: Input,
    pub solution_check: Option<SolutionCheck>,
    pub framings: Vec<FramingReport>,
    pub nve: Option<NveReport>,
    pub algebrization: Option<AlgebrizationReport>,
    pub reduction: Option<ReductionReport>,
    pub singularities: Option<Vec<SingularPoint>>,
    pub infinity_class: Option<PointClass>,
    pub kovacic: Option<KovacicReport>,
    /// The same analysis for `zeta'' = -r zeta`.
    pub sign_check: Option<KovacicReport>,
    pub printed_chain: Option<PrintedChain>,
    pub verdict: Option<GaloisVerdict>,
    pub expected: Option<ExpectedCheck>,
    pub timings_ms: BTreeMap<&'static str, f64>,
}

pub fn analyze(req: &AnalyzeRequest) -> Report<Analysis> {
    let mut rep = Report::new("analyze", Analysis::default());
    let spec = req.example.as_deref().map(registry::lookup);
    let started = Instant::now();
    if let Err(e) = run(req, &mut rep) {
        info!("analysis stopped: {e}");
        rep.fail(&e);
    }
    rep.body.timings_ms.insert("total", ms(started));
    if let Some(Some(spec)) = spec {
        check_expected(spec, &mut rep);
    }
    rep
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn input_err(what: &str) -> impl Fn(nahs_core::symexpr::SymError) -> CliError + '_ {
    move |e| CliError::Input(format!("{what}: {e}"))
}

fn variational_err(e: VariationalError) -> CliError {
    match e {
        VariationalError::Sym(_) | VariationalError::NotASolution { .. } => CliError::Input(e.to_string()),
        _ => CliError::Unsupported(e.to_string()),
    }
}

fn transform_err(e: TransformError) -> CliError {
    match e {
        TransformError::UnknownChange(_) => CliError::Input(e.to_string()),
        _ => CliError::Unsupported(e.to_string()),
    }
}

fn algebra_err(e: AlgebraError) -> CliError {
    CliError::Unsupported(e.to_string())
}

/// Scale of a change from its written form.
pub fn resolve_scale(s: &str, params: &Params) -> Result<Q, CliError> {
    if let Ok(v) = parse_q(s) {
        return Ok(v);
    }
    let (neg, name) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, s.trim()),
    };
    let v = params
        .get(name)
        .ok_or_else(|| CliError::Input(format!("scale {s:?} is neither a rational nor a bound parameter")))?;
    Ok(if neg { -v.clone() } else { v.clone() })
}

/// A reference expression in `tau`, lowered after binding parameters.
pub fn reference_ratfunc(src: &str, b: &Bindings) -> Result<RatFunc, CliError> {
    let e = parse(src).map_err(input_err("reference form"))?;
    let e = substitute(&e, b).map_err(input_err("reference form"))?;
    lower_to_ratfunc(&e, &RewriteRules::new(RuleKind::Identity(Var::Tau)))
        .map_err(|e| CliError::Input(format!("reference form {src}: {e}")))
}

fn compare_ratfunc(ours: &RatFunc, src: &str, b: &Bindings) -> Result<Comparison, CliError> {
    let theirs = reference_ratfunc(src, b)?;
    let agreement = if *ours == theirs {
        Agreement::Equal
    } else if -ours == theirs {
        Agreement::Negated
    } else {
        Agreement::Different
    };
    Ok(Comparison {
        reference: theirs.display_in("tau"),
        agreement,
    })
}

struct Resolved {
    spec: Option<&'static ExampleSpec>,
    f: Expr,
    xhat: Expr,
    change: String,
    scale: Q,
    bindings: Bindings,
}

fn resolve(req: &AnalyzeRequest, rep: &mut Report<Analysis>) -> Result<Resolved, CliError> {
    let spec = match &req.example {
        Some(id) => Some(registry::lookup(id).ok_or_else(|| {
            let ids: Vec<_> = registry::REGISTRY.iter().map(|s| s.id).collect();
            CliError::Input(format!("unknown example {id:?}; known: {}", ids.join(", ")))
        })?),
        None => None,
    };
    if spec.is_some() && req.f.is_some() {
        return Err(CliError::Input("--f cannot be combined with --example".into()));
    }
    let params = match spec {
        Some(s) => s.default_params().overridden_by(&req.params),
        None => req.params.clone(),
    };
    let f_src = match (spec, &req.f) {
        (Some(s), _) => s.f.to_string(),
        (None, Some(f)) => f.clone(),
        (None, None) => return Err(CliError::Input("either --example or --f is required".into())),
    };
    let sol_src = match (&req.solution, spec) {
        (Some(s), _) => s.clone(),
        (None, Some(s)) => s
            .solution_for(&params)
            .ok_or_else(|| {
                CliError::Input(format!(
                    "{} has no built-in particular solution for {:?}; pass --solution",
                    s.id,
                    params.to_strings()
                ))
            })?
            .to_string(),
        (None, None) => return Err(CliError::Input("--solution is required with --f".into())),
    };
    let change = match (&req.change, spec) {
        (Some(c), _) => c.clone(),
        (None, Some(s)) => s.change.to_string(),
        (None, None) => return Err(CliError::Input("--change is required with --f".into())),
    };
    let scale_src = match (&req.scale, spec) {
        (Some(c), _) => c.clone(),
        (None, Some(s)) if req.change.is_none() => s.change_scale.to_string(),
        _ => "1".to_string(),
    };
    let tol = req.tol.unwrap_or(DEFAULT_ORACLE_TOL);
    rep.body.input = Input {
        example: spec.map(|s| s.id.to_string()),
        family: spec.map(|s| s.family.to_string()),
        f: f_src.clone(),
        solution: sol_src.clone(),
        change: change.clone(),
        scale: scale_src.clone(),
        params: params.to_strings(),
        oracle_tol: tol,
    };
    let f = parse(&f_src).map_err(input_err("f"))?;
    let xhat = parse(&sol_src).map_err(input_err("solution"))?;
    let mut unbound: Vec<String> = params.unbound_in(&f);
    unbound.extend(params.unbound_in(&xhat));
    if let Some(FramingSpec::GA { .. }) = spec.map(|s| s.framing) {
        if params.get("alpha").is_none() {
            unbound.push("alpha".into());
        }
    }
    unbound.sort();
    unbound.dedup();
    if !unbound.is_empty() {
        return Err(CliError::Input(format!(
            "unbound parameter(s) {}; bind with --param name=p/q",
            unbound.join(", ")
        )));
    }
    let scale = resolve_scale(&scale_src, &params)?;
    let bindings = params.bindings();
    Ok(Resolved {
        spec,
        f,
        xhat,
        change,
        scale,
        bindings,
    })
}

fn framings_for(spec: Option<&ExampleSpec>, f: &Expr, warnings: &mut Vec<String>) -> Result<Vec<Framing>, CliError> {
    let parse_src = |s: &str| parse(s).map_err(input_err("registry entry"));
    match spec.map(|s| s.framing) {
        Some(FramingSpec::FromF) => Ok(vec![build_framing_thm1(f).map_err(variational_err)?]),
        Some(FramingSpec::Potential { potential }) => Ok(vec![framing_from_potential(&parse_src(potential)?)]),
        Some(FramingSpec::GA { g, a }) => {
            let (g, a, alpha) = (parse_src(g)?, parse_src(a)?, Expr::param("alpha"));
            Ok(vec![
                build_framing_thm1(f).map_err(variational_err)?,
                build_framing_cor2(&g, &a, &alpha).map_err(variational_err)?,
                build_framing_thm2(&g, &a, &alpha).map_err(variational_err)?,
            ])
        }
        None => match build_framing_thm1(f) {
            Ok(fr) => Ok(vec![fr]),
            Err(e) => {
                warnings.push(format!(
                    "no Hamiltonian framing ({e}); the variational equation is taken as k = f_x along the solution"
                ));
                Ok(Vec::new())
            }
        },
    }
}

/// Relative difference of two coefficients at 20 times in `[0.5, 2.4]`.
fn numeric_difference(a: &Expr, b: &Expr, binds: &Bindings) -> Option<f64> {
    let mut worst: f64 = 0.0;
    for j in 0..20 {
        let t = 0.5 + 0.1 * j as f64;
        let x = eval_numeric(a, binds, &[(Var::T, t)]).ok()?;
        let y = eval_numeric(b, binds, &[(Var::T, t)]).ok()?;
        worst = worst.max((x - y).abs() / x.abs().max(1.0));
    }
    Some(worst)
}

fn compare_expr(ours: &Expr, theirs: &Expr, b: &Bindings) -> Agreement {
    if zero_test(&(ours.clone() - theirs.clone()), b).is_zero {
        Agreement::Equal
    } else if zero_test(&(ours.clone() + theirs.clone()), b).is_zero {
        Agreement::Negated
    } else {
        Agreement::Different
    }
}

fn note_reference(warnings: &mut Vec<String>, what: &str, c: &Comparison) {
    match c.agreement {
        Agreement::Equal => {}
        Agreement::Negated => warnings.push(format!(
            "sign discrepancy: the derived {what} is the negative of the reference form {}",
            c.reference
        )),
        Agreement::Different => warnings.push(format!(
            "the derived {what} differs from the reference form {}",
            c.reference
        )),
    }
}

pub fn kovacic_report(
    r: &RatFunc,
    infinity_class: PointClass,
    preserved: bool,
) -> Result<KovacicReport, CliError> {
    let result = kovacic(r).map_err(algebra_err)?;
    let liouvillian = result.outcome.is_liouvillian();
    let solution_verified = liouvillian.then(|| verify_solution(r, &result.outcome));
    let verdict = galois_verdict(&result, infinity_class, preserved);
    Ok(KovacicReport {
        r: r.display_in("tau"),
        liouvillian,
        solution_verified,
        result,
        verdict,
    })
}

fn run(req: &AnalyzeRequest, rep: &mut Report<Analysis>) -> Result<(), CliError> {
    let clock = Instant::now();
    let Resolved {
        spec,
        f,
        xhat,
        change,
        scale,
        bindings: b,
    } = resolve(req, rep)?;
    let tol = rep.body.input.oracle_tol;
    let reference = spec.map(|s| s.reference).unwrap_or_default();

    let framings = framings_for(spec, &f, &mut rep.warnings)?;
    let check = verify_particular_solution(&f, &xhat, &b);
    let holds = check.holds;
    rep.body.solution_check = Some(check);
    if !holds {
        return Err(CliError::Input(format!("x = {xhat} does not solve x'' = {f}")));
    }
    rep.body.timings_ms.insert("setup", ms(clock));

    let clock = Instant::now();
    let mut ks = Vec::new();
    for fr in framings {
        let ham = fr.hamiltonian();
        let reproduces_f = ham.reproduces(&f, &b);
        if !reproduces_f {
            rep.warnings.push(format!("the {} framing does not reproduce x'' = f", fr.name()));
        }
        let curve = integral_curve(&fr, &xhat, &b).map_err(variational_err)?;
        let satisfies = curve.satisfies(&ham, &b);
        if !satisfies {
            rep.warnings.push(format!("the integral curve of the {} framing fails Hamilton's equations", fr.name()));
        }
        let k = nve(&fr, &xhat, &b).map_err(variational_err)?.k;
        debug!("{} framing: k = {k}", fr.name());
        rep.body.framings.push(FramingReport {
            name: fr.name(),
            hamiltonian: ham.h.to_string(),
            framing: fr,
            reproduces_f,
            integral_curve: curve,
            curve_satisfies_hamilton: satisfies,
            nve_k: k.to_string(),
        });
        ks.push(k);
    }
    let k = match ks.first() {
        Some(k) => k.clone(),
        None => {
            let along = Bindings::new().with("x", xhat.clone());
            let fx = differentiate(&f, Var::X);
            let k = substitute(&fx, &along).and_then(|e| substitute(&e, &b)).map_err(input_err("f_x"))?;
            simplify(&k)
        }
    };
    let (mut agree, mut worst) = (None, None);
    if ks.len() > 1 {
        let exact = ks[1..].iter().all(|other| zero_test(&(other.clone() - k.clone()), &b).is_zero);
        let diff = ks[1..]
            .iter()
            .map(|other| numeric_difference(&k, other, &b))
            .try_fold(0.0f64, |m, d| d.map(|d| m.max(d)));
        if !exact {
            rep.warnings.push("the framings give different variational equations".into());
        }
        agree = Some(exact);
        worst = diff;
    }
    let mut printed_k = None;
    let nve_reference = match reference.nve {
        Some(src) => {
            let e = parse(src).map_err(input_err("reference form"))?;
            let e = substitute(&e, &Bindings::new().with("x", xhat.clone()))
                .and_then(|e| substitute(&e, &b))
                .map_err(input_err("reference form"))?;
            let c = Comparison {
                reference: simplify(&e).to_string(),
                agreement: compare_expr(&k, &e, &b),
            };
            note_reference(&mut rep.warnings, "variational coefficient k(t)", &c);
            if c.agreement == Agreement::Negated {
                printed_k = Some(e);
            }
            Some(c)
        }
        None => None,
    };
    rep.body.nve = Some(NveReport {
        k: k.to_string(),
        framings_agree: agree,
        max_framing_difference: worst,
        reference: nve_reference,
    });
    rep.body.timings_ms.insert("variational", ms(clock));

    let clock = Instant::now();
    let ch = ChangeOfVariables::by_name(&change, scale.clone()).map_err(transform_err)?;
    let preserved = check_hamiltonian_change(&ch);
    if !preserved {
        rep.warnings.push(format!("the change {change} is not a Hamiltonian change of variable"));
    }
    let alg = algebrize(&k, &ch).map_err(|e| match e {
        TransformError::NotAlgebrizable(inner) => CliError::Unsupported(format!(
            "k(t) = {k} has no algebraic form under the {change} change: {inner}"
        )),
        e => transform_err(e),
    })?;
    let s = if change == "sqrt" || scale == Q::from_integer(0.into()) {
        1.0
    } else {
        to_f64(&scale).abs()
    };
    let (t0, t1) = (0.2 / s, 1.2 / s);
    let residual = algebrization_residual(&k, &b, &ch, &alg, t0, t1).map_err(transform_err)?;
    if residual > tol {
        rep.warnings.push(format!("algebrization residual {residual:e} exceeds {tol:e}"));
    }
    let reference_p = reference.p.map(|p| compare_ratfunc(&alg.p, p, &b)).transpose()?;
    let reference_q = reference.q.map(|q| compare_ratfunc(&alg.q, q, &b)).transpose()?;
    for (what, c) in [("P", &reference_p), ("Q", &reference_q)] {
        if let Some(c) = c {
            note_reference(&mut rep.warnings, what, c);
        }
    }
    let tau_of_t = describe_change(&change, &scale);
    rep.body.algebrization = Some(AlgebrizationReport {
        change: change.clone(),
        tau: tau_of_t,
        hamiltonian_change: preserved,
        alg_solde: alg.clone(),
        t_interval: [t0, t1],
        residual,
        reference_p,
        reference_q,
    });

    let (red, mult) = remove_first_derivative(&alg);
    let (a, z) = (ch.tau_at(t0), ch.tau_at(t1));
    let (lo, hi) = (a.min(z), a.max(z));
    let sub = substitution_residual(&alg, &red, lo, hi).map_err(transform_err)?;
    if sub > tol {
        rep.warnings.push(format!("substitution residual {sub:e} exceeds {tol:e}"));
    }
    let reference_r = reference.r.map(|r| compare_ratfunc(&red.r, r, &b)).transpose()?;
    if let Some(c) = &reference_r {
        note_reference(&mut rep.warnings, "reduced coefficient r", c);
        if c.agreement == Agreement::Negated {
            rep.warnings.push(format!(
                "the substitution oracle certifies the derived sign of r (residual {sub:e}); both signs are analysed"
            ));
        }
    }
    rep.body.reduction = Some(ReductionReport {
        r: red.r.display_in("tau"),
        multiplier: mult.to_string(),
        tau_interval: [lo, hi],
        substitution_residual: sub,
        reference_r: reference_r.clone(),
    });
    if let Some(kp) = printed_k {
        rep.body.printed_chain = Some(printed_chain(&kp, &ch, &b, reference.r, (lo, hi), &mut rep.warnings)?);
    }
    rep.body.timings_ms.insert("algebrization", ms(clock));

    let clock = Instant::now();
    let table = singularity_table(&alg).map_err(|e| match e {
        TransformError::Algebra(AlgebraError::IrrationalPole { .. }) => CliError::Unsupported(format!(
            "the algebraic form has poles outside Q ({e}); only rational singular points are supported"
        )),
        e => transform_err(e),
    })?;
    let inf = classify_point(&alg, &Point::Infinity);
    rep.body.singularities = Some(table);
    rep.body.infinity_class = Some(inf);

    let main = kovacic_report(&red.r, inf, preserved)?;
    rep.body.verdict = Some(main.verdict.clone());
    rep.body.kovacic = Some(main);
    let both = spec.is_some_and(|s| s.both_signs)
        || reference_r.is_some_and(|c| c.agreement == Agreement::Negated);
    if both {
        rep.body.sign_check = Some(kovacic_report(&-&red.r, inf, preserved)?);
    }
    rep.body.timings_ms.insert("kovacic", ms(clock));
    Ok(())
}

fn printed_chain(
    k: &Expr,
    ch: &ChangeOfVariables,
    b: &Bindings,
    reference_r: Option<&str>,
    (lo, hi): (f64, f64),
    warnings: &mut Vec<String>,
) -> Result<PrintedChain, CliError> {
    let alg = algebrize(k, ch).map_err(transform_err)?;
    let (red, _) = remove_first_derivative(&alg);
    let sub = substitution_residual(&alg, &red, lo, hi).map_err(transform_err)?;
    let cmp = reference_r.map(|r| compare_ratfunc(&red.r, r, b)).transpose()?;
    if let Some(c) = &cmp {
        match c.agreement {
            Agreement::Equal => {}
            Agreement::Negated => warnings.push(format!(
                "sign discrepancy: reducing the printed algebraic form gives r = {}, the negative of the printed reduced coefficient (substitution residual {sub:e})",
                red.r.display_in("tau")
            )),
            Agreement::Different => warnings.push(format!(
                "reducing the printed algebraic form gives r = {}, which differs from the printed reduced coefficient",
                red.r.display_in("tau")
            )),
        }
    }
    let liouvillian = kovacic(&red.r).map_err(algebra_err)?.outcome.is_liouvillian();
    let negated_liouvillian = kovacic(&-&red.r).map_err(algebra_err)?.outcome.is_liouvillian();
    Ok(PrintedChain {
        k: simplify(k).to_string(),
        alg_solde: alg,
        r: red.r.display_in("tau"),
        substitution_residual: sub,
        reference_r: cmp,
        liouvillian,
        negated_liouvillian,
    })
}

fn describe_change(name: &str, scale: &Q) -> String {
    let s = format_q(scale);
    match name {
        "sqrt" => "tau = sqrt(t)".into(),
        "affine" => format!("tau = {s}*t"),
        "exp" | "exponential" => format!("tau = exp({s}*t)"),
        other => format!("tau = {other}({s}*t)"),
    }
}

fn case_matches(case: &ExpectedCase, params: &BTreeMap<String, String>) -> bool {
    case.params.iter().all(|(k, v)| {
        let want = parse_q(v).ok();
        let have = params.get(*k).and_then(|s| parse_q(s).ok());
        want.is_some() && want == have
    })
}

/// Whether a report reproduces an expected case.
pub fn reproduces(case: &ExpectedCase, a: &Analysis, status: Status) -> bool {
    let main_ok = match case.verdict {
        Expected::Unsupported { .. } => status == Status::Unsupported,
        Expected::Verdict {
            liouvillian,
            group_class,
            virtually_abelian,
            obstruction,
        } => {
            status == Status::Complete
                && a.kovacic.as_ref().is_some_and(|k| k.liouvillian == liouvillian)
                && a.verdict.as_ref().is_some_and(|v| {
                    v.group_class == group_class
                        && v.virtually_abelian == virtually_abelian
                        && v.obstruction == obstruction
                })
        }
    };
    let neg_ok = match case.negated_liouvillian {
        None => true,
        Some(want) => a.sign_check.as_ref().is_some_and(|s| s.liouvillian == want),
    };
    main_ok && neg_ok
}

fn check_expected(spec: &ExampleSpec, rep: &mut Report<Analysis>) {
    let Some(case) = spec.expected.iter().find(|c| case_matches(c, &rep.body.input.params)) else {
        return;
    };
    let ok = reproduces(case, &rep.body, rep.status);
    if !ok {
        rep.warnings.push(format!("{}: the recorded verdict is not reproduced", spec.id));
    }
    rep.body.expected = Some(ExpectedCheck {
        source: case.source,
        expected: case.verdict,
        negated_liouvillian: case.negated_liouvillian,
        reproduced: ok,
    });
}

