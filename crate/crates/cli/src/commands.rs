//! The standalone subcommands: `kovacic`, `algebrize`, `sitnikov` and
//! `examples`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::time::Instant;

use nahs_core::algebra::{format_q, parse_q, RatFunc, Q};
use nahs_core::sitnikov::{
    emit_csv, emit_svg, grid, poincare_section, Formulation, SectionOptions, SectionPoint,
    SitnikovModel, State, SvgStyle,
};
use nahs_core::symexpr::{parse, substitute, Expr};
use nahs_core::transform::{
    algebrize, check_hamiltonian_change, classify_point, remove_first_derivative,
    singularity_table, AlgSolde, ChangeOfVariables, Point, PointClass, SingularPoint,
};
use serde::Serialize;

use crate::analyze::{
    analyze, kovacic_report, reference_ratfunc, resolve_scale, AnalyzeRequest, KovacicReport,
};
use crate::error::CliError;
use crate::params::Params;
use crate::registry::{ExampleSpec, REGISTRY};
use crate::report::{Report, Status};

fn bound_expr(src: &str, what: &str, params: &Params) -> Result<Expr, CliError> {
    let e = parse(src).map_err(|e| CliError::Input(format!("{what}: {e}")))?;
    let unbound = params.unbound_in(&e);
    if !unbound.is_empty() {
        return Err(CliError::Input(format!(
            "unbound parameter(s) {} in {what}; bind with --param name=p/q",
            unbound.join(", ")
        )));
    }
    substitute(&e, &params.bindings()).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct KovacicInput {
    pub r: String,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct KovacicBody {
    pub input: KovacicInput,
    /// Class of infinity for `zeta'' = r zeta` itself.
    pub infinity_class: Option<PointClass>,
    pub kovacic: Option<KovacicReport>,
}

/// Kovacic's algorithm on `zeta'' = r zeta` with `r` a rational function of
/// `tau`. The verdict treats the equation as given directly.
pub fn cmd_kovacic(r_src: &str, params: &Params) -> Report<KovacicBody> {
    let mut rep = Report::new("kovacic", KovacicBody::default());
    rep.body.input = KovacicInput {
        r: r_src.to_string(),
        params: params.to_strings(),
    };
    let run = |rep: &mut Report<KovacicBody>| -> Result<(), CliError> {
        bound_expr(r_src, "r", params)?;
        let r = reference_ratfunc(r_src, &params.bindings())?;
        let s = AlgSolde {
            p: RatFunc::zero(),
            q: -&r,
        };
        let inf = classify_point(&s, &Point::Infinity);
        rep.body.infinity_class = Some(inf);
        rep.body.kovacic = Some(kovacic_report(&r, inf, true)?);
        Ok(())
    };
    if let Err(e) = run(&mut rep) {
        rep.fail(&e);
    }
    rep
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AlgebrizeInput {
    pub k: String,
    pub change: String,
    pub scale: String,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AlgebrizeBody {
    pub input: AlgebrizeInput,
    pub hamiltonian_change: Option<bool>,
    pub alg_solde: Option<AlgSolde>,
    pub r: Option<String>,
    pub multiplier: Option<String>,
    pub singularities: Option<Vec<SingularPoint>>,
    pub infinity_class: Option<PointClass>,
}

/// Algebraic form of `xi'' = k(t) xi` under a named change, with the
/// reduced form and the singular points.
pub fn cmd_algebrize(k_src: &str, change: &str, scale: &str, params: &Params) -> Report<AlgebrizeBody> {
    let mut rep = Report::new("algebrize", AlgebrizeBody::default());
    rep.body.input = AlgebrizeInput {
        k: k_src.to_string(),
        change: change.to_string(),
        scale: scale.to_string(),
        params: params.to_strings(),
    };
    let run = |rep: &mut Report<AlgebrizeBody>| -> Result<(), CliError> {
        let k = bound_expr(k_src, "k", params)?;
        let ch = ChangeOfVariables::by_name(change, resolve_scale(scale, params)?)
            .map_err(|e| CliError::Input(e.to_string()))?;
        rep.body.hamiltonian_change = Some(check_hamiltonian_change(&ch));
        let s = algebrize(&k, &ch).map_err(|e| CliError::Unsupported(e.to_string()))?;
        let (red, mult) = remove_first_derivative(&s);
        rep.body.alg_solde = Some(s.clone());
        rep.body.r = Some(red.r.display_in("tau"));
        rep.body.multiplier = Some(mult.to_string());
        rep.body.infinity_class = Some(classify_point(&s, &Point::Infinity));
        let table = singularity_table(&s).map_err(|e| CliError::Unsupported(e.to_string()))?;
        rep.body.singularities = Some(table);
        Ok(())
    };
    if let Err(e) = run(&mut rep) {
        rep.fail(&e);
    }
    rep
}

pub fn formulation_from_name(s: &str) -> Option<Formulation> {
    match s {
        "time" | "time-domain" => Some(Formulation::TimeDomain),
        "true-anomaly" | "exact" => Some(Formulation::TrueAnomaly),
        "approx" | "first-order" => Some(Formulation::ApproxFirstOrder),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct SitnikovRequest {
    pub e: String,
    pub formulation: Formulation,
    /// Grid side; ignored when `ics` is non-empty.
    pub grid: usize,
    pub lo: f64,
    pub hi: f64,
    /// Explicit initial conditions `(q1, p1)` at `q2 = 0`.
    pub ics: Vec<(f64, f64)>,
    pub crossings: usize,
    pub options: SectionOptions,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl Default for SitnikovRequest {
    fn default() -> Self {
        SitnikovRequest {
            e: "0".into(),
            formulation: Formulation::TrueAnomaly,
            grid: 20,
            lo: -1.0,
            hi: 1.0,
            ics: Vec::new(),
            crossings: 500,
            options: SectionOptions::default(),
            csv: None,
            svg: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitStatus {
    Complete,
    Escaped,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitSummary {
    pub q1: f64,
    pub p1: f64,
    pub status: OrbitStatus,
    pub crossings: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// Largest `|H - H(ic)|` over the section points (`e = 0` only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_deviation: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SitnikovInput {
    pub e: String,
    pub formulation: Formulation,
    pub crossings: usize,
    pub options: SectionOptions,
    pub initial_conditions: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SitnikovBody {
    pub input: Option<SitnikovInput>,
    pub complete: usize,
    pub escaped: usize,
    pub failed: usize,
    pub max_energy_deviation: Option<f64>,
    pub orbits: Vec<OrbitSummary>,
    pub files: Vec<String>,
    pub elapsed_ms: f64,
}

/// Poincaré sections on `q2 = k pi`. Escapes and integration failures are
/// recorded per orbit and do not fail the command.
pub fn cmd_sitnikov(req: &SitnikovRequest) -> Report<SitnikovBody> {
    let mut rep = Report::new("sitnikov", SitnikovBody::default());
    let started = Instant::now();
    let run = |rep: &mut Report<SitnikovBody>| -> Result<(), CliError> {
        let e: Q = parse_q(&req.e).map_err(|err| CliError::Input(format!("e: {err}")))?;
        let model = SitnikovModel::new(e.clone(), req.formulation).map_err(|err| CliError::Input(err.to_string()))?;
        if !(req.options.tol > 0.0) {
            return Err(CliError::Input(format!("tolerance must be positive, got {}", req.options.tol)));
        }
        if req.formulation == Formulation::ApproxFirstOrder && e > Q::new(1.into(), 10.into()) {
            rep.warnings.push(format!(
                "the first-order model is only meaningful for small e (got {})",
                format_q(&e)
            ));
        }
        let ics: Vec<State> = if req.ics.is_empty() {
            grid(req.grid, req.lo, req.hi)
        } else {
            req.ics.iter().map(|&(q, p)| State::new(q, p, 0.0)).collect()
        };
        rep.body.input = Some(SitnikovInput {
            e: format_q(&e),
            formulation: req.formulation,
            crossings: req.crossings,
            options: req.options,
            initial_conditions: ics.len(),
        });
        let results = poincare_section(&model, &ics, req.crossings, &req.options);
        let conserved = e == Q::from_integer(0.into());
        let mut orbits: Vec<Vec<SectionPoint>> = Vec::new();
        let mut worst: Option<f64> = None;
        for (ic, res) in ics.iter().zip(results) {
            let (status, points, message) = match res {
                Ok(pts) => (OrbitStatus::Complete, pts, None),
                Err(err @ nahs_core::sitnikov::SitnikovError::EscapeDetected { .. }) => {
                    (OrbitStatus::Escaped, Vec::new(), Some(err.to_string()))
                }
                Err(err) => (OrbitStatus::Failed, Vec::new(), Some(err.to_string())),
            };
            let energy_deviation = (conserved && status == OrbitStatus::Complete).then(|| {
                let h0 = model.energy(ic);
                points
                    .iter()
                    .map(|p| {
                        let s = State::new(p.q1, p.p1, p.crossing_index as f64 * PI);
                        (model.energy(&s) - h0).abs()
                    })
                    .fold(0.0, f64::max)
            });
            if let Some(d) = energy_deviation {
                worst = Some(worst.map_or(d, |w: f64| w.max(d)));
            }
            match status {
                OrbitStatus::Complete => rep.body.complete += 1,
                OrbitStatus::Escaped => rep.body.escaped += 1,
                OrbitStatus::Failed => rep.body.failed += 1,
            }
            rep.body.orbits.push(OrbitSummary {
                q1: ic.q1,
                p1: ic.p1,
                status,
                crossings: points.len(),
                message,
                energy_deviation,
            });
            orbits.push(points);
        }
        rep.body.max_energy_deviation = worst;
        if rep.body.failed > 0 {
            rep.warnings.push(format!("{} orbit(s) failed to integrate", rep.body.failed));
        }
        if let Some(path) = &req.csv {
            let all: Vec<SectionPoint> = orbits.iter().flatten().copied().collect();
            emit_csv(&all, BufWriter::new(File::create(path)?))?;
            rep.body.files.push(path.display().to_string());
        }
        if let Some(path) = &req.svg {
            let style = SvgStyle {
                title: Some(format!("Sitnikov section, e = {}", format_q(&e))),
                ..SvgStyle::default()
            };
            emit_svg(&orbits, BufWriter::new(File::create(path)?), &style)?;
            rep.body.files.push(path.display().to_string());
        }
        Ok(())
    };
    if let Err(e) = run(&mut rep) {
        rep.fail(&e);
    }
    rep.body.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    rep
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfTestEntry {
    pub example: &'static str,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub reproduced: bool,
    pub elapsed_ms: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ExamplesBody {
    pub examples: Vec<&'static ExampleSpec>,
    /// Present with `--check`: every recorded case re-run end to end.
    pub self_test: Option<Vec<SelfTestEntry>>,
}

/// Runs every expected case of the registry through [`analyze`].
pub fn self_test() -> Vec<SelfTestEntry> {
    let mut out = Vec::new();
    for spec in REGISTRY {
        for case in spec.expected {
            let mut params = Params::new();
            for (k, v) in case.params {
                params.set(k, parse_q(v).expect("registry values are rationals"));
            }
            let req = AnalyzeRequest {
                example: Some(spec.id.to_string()),
                params: params.clone(),
                ..AnalyzeRequest::default()
            };
            let started = Instant::now();
            let rep = analyze(&req);
            out.push(SelfTestEntry {
                example: spec.id,
                params: params.to_strings(),
                status: rep.status,
                reproduced: rep.body.expected.as_ref().is_some_and(|x| x.reproduced),
                elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
                warnings: rep.warnings,
            });
        }
    }
    out
}

/// Lists the registry; with `check`, also runs the self-test, which fails
/// the command (exit 1) when a recorded verdict is not reproduced.
pub fn cmd_examples(check: bool) -> Report<ExamplesBody> {
    let mut rep = Report::new(
        "examples",
        ExamplesBody {
            examples: REGISTRY.iter().collect(),
            self_test: None,
        },
    );
    if check {
        let results = self_test();
        let bad: Vec<_> = results.iter().filter(|r| !r.reproduced).map(|r| r.example).collect();
        rep.body.self_test = Some(results);
        if !bad.is_empty() {
            rep.fail(&CliError::Check(format!("recorded verdicts not reproduced: {}", bad.join(", "))));
        }
    }
    rep
}
