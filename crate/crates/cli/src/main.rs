use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nahs_cli::analyze::{analyze, AnalyzeRequest};
use nahs_cli::commands::{
    cmd_algebrize, cmd_examples, cmd_kovacic, cmd_sitnikov, formulation_from_name, SitnikovRequest,
};
use nahs_cli::error::CliError;
use nahs_cli::params::Params;
use nahs_cli::report::Report;
use nahs_core::ode::Method;
use nahs_core::sitnikov::SectionOptions;
use serde::Serialize;

/// Differential Galois non-integrability analysis of x'' = f(x, t).
#[derive(Parser, Debug)]
#[command(name = "nahs", version)]
struct Cli {
    /// Parameter binding name=p/q (repeatable).
    #[arg(long = "param", global = true, value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Also write the JSON report to PATH ("-" prints JSON instead of text).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Numerical tolerance: oracle threshold for analyze, integration
    /// tolerance for sitnikov.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full pipeline on a built-in example or a given equation.
    Analyze(AnalyzeArgs),
    /// Kovacic's algorithm on zeta'' = r(tau) zeta.
    Kovacic {
        /// Rational function of tau.
        #[arg(long)]
        r: String,
    },
    /// Algebraic form of xi'' = k(t) xi under a change of variable.
    Algebrize {
        #[arg(long)]
        k: String,
        /// cos, sin, sinh, cosh, exp, affine or sqrt.
        #[arg(long)]
        change: String,
        /// eps (lambda for exp): rational, parameter name or -name.
        #[arg(long, default_value = "1")]
        scale: String,
    },
    /// Poincare sections of the Sitnikov problem.
    Sitnikov(SitnikovArgs),
    /// List the built-in examples.
    Examples {
        /// Re-run every recorded case and compare verdicts.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Registry id (see `nahs examples`).
    #[arg(long)]
    example: Option<String>,
    /// Right side f(x, t) of x'' = f.
    #[arg(long)]
    f: Option<String>,
    /// Particular solution x = xhat(t).
    #[arg(long)]
    solution: Option<String>,
    /// Change of independent variable.
    #[arg(long)]
    change: Option<String>,
    /// Scale of the change: rational, parameter name or -name.
    #[arg(long)]
    scale: Option<String>,
}

#[derive(Args, Debug)]
struct SitnikovArgs {
    /// Eccentricity in [0, 1] (rational).
    #[arg(long, default_value = "0")]
    e: String,
    /// time-domain, true-anomaly or approx.
    #[arg(long, default_value = "true-anomaly")]
    formulation: String,
    /// Grid side n: n x n initial conditions on [lo, hi]^2.
    #[arg(long, default_value_t = 20)]
    grid: usize,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    lo: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    hi: f64,
    /// Explicit initial condition q1,p1 (repeatable; replaces the grid).
    #[arg(long = "ic", value_name = "Q1,P1", allow_hyphen_values = true)]
    ics: Vec<String>,
    #[arg(long, default_value_t = 500)]
    crossings: usize,
    /// dop853 or dopri5.
    #[arg(long, default_value = "dop853")]
    method: String,
    #[arg(long, default_value_t = 50.0)]
    escape_bound: f64,
    #[arg(long, default_value_t = 10_000_000)]
    max_steps: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn parse_ic(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Input(format!("expected --ic q1,p1, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn sitnikov_request(a: SitnikovArgs, tol: Option<f64>) -> Result<SitnikovRequest, CliError> {
    let formulation = formulation_from_name(&a.formulation)
        .ok_or_else(|| CliError::Input(format!("unknown formulation {:?}", a.formulation)))?;
    let method = Method::from_name(&a.method)
        .ok_or_else(|| CliError::Input(format!("unknown method {:?}", a.method)))?;
    let ics = a.ics.iter().map(|s| parse_ic(s)).collect::<Result<_, _>>()?;
    let defaults = SectionOptions::default();
    Ok(SitnikovRequest {
        e: a.e,
        formulation,
        grid: a.grid,
        lo: a.lo,
        hi: a.hi,
        ics,
        crossings: a.crossings,
        options: SectionOptions {
            tol: tol.unwrap_or(defaults.tol),
            method,
            escape_bound: a.escape_bound,
            max_steps: a.max_steps,
        },
        csv: a.csv,
        svg: a.svg,
    })
}

fn emit<B: Serialize>(rep: &Report<B>, json: Option<&PathBuf>) -> Result<(), CliError> {
    match json {
        Some(p) if p.as_os_str() == "-" => println!("{}", rep.to_json()),
        Some(p) => {
            std::fs::write(p, rep.to_json() + "\n")?;
            print!("{}", rep.to_text());
        }
        None => print!("{}", rep.to_text()),
    }
    Ok(())
}

fn finish<B: Serialize>(rep: Report<B>, json: Option<&PathBuf>) -> ExitCode {
    let code = rep.exit_code();
    if let Some(e) = &rep.error {
        eprintln!("{} error: {}", e.kind, e.message);
    }
    match emit(&rep, json) {
        Ok(()) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("NAHS_LOG", "warn")).init();
    let cli = Cli::parse();
    let params = match Params::from_assignments(&cli.params) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let json = cli.json.as_ref();
    match cli.command {
        Command::Analyze(a) => {
            let req = AnalyzeRequest {
                example: a.example,
                f: a.f,
                solution: a.solution,
                change: a.change,
                scale: a.scale,
                params,
                tol: cli.tol,
            };
            finish(analyze(&req), json)
        }
        Command::Kovacic { r } => finish(cmd_kovacic(&r, &params), json),
        Command::Algebrize { k, change, scale } => finish(cmd_algebrize(&k, &change, &scale, &params), json),
        Command::Sitnikov(a) => match sitnikov_request(a, cli.tol) {
            Ok(req) => finish(cmd_sitnikov(&req), json),
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
        Command::Examples { check } => finish(cmd_examples(check), json),
    }
}
