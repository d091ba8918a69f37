//! Numerical companion for the Sitnikov problem: the Kepler equation, three
//! formulations of the motion of the third body, adaptive integration and
//! Poincaré sections on `sin q2 = 0`.
//!
//! All formulations are written as `q1'' = f(q1, q2)` with `q2` the
//! independent variable, so `q2' = 1` and the section `sin q2 = 0` is the
//! set `q2 = k pi`.

mod output;

use std::cell::Cell;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::Q;
use crate::ode::{self, Control, Method, OdeError, Options, Stats};

pub use output::{emit_csv, emit_svg, format_sig17, SvgStyle};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SitnikovError {
    #[error("eccentricity {0} is outside [0, 1]")]
    InvalidEccentricity(String),
    #[error("Kepler iteration did not converge for e = {e}, t = {t}")]
    NoConvergence { e: f64, t: f64 },
    #[error("collision of the primaries at q2 = {q2} (e = 1)")]
    SingularPrimaryCollision { q2: f64 },
    #[error("step size underflow at q2 = {q2} (h = {h})")]
    StepFailure { q2: f64, h: f64 },
    #[error("step limit of {0} exceeded")]
    MaxSteps(usize),
    #[error("orbit escaped: |q1| = {q1} > {bound} at q2 = {q2}")]
    EscapeDetected { q1: f64, q2: f64, bound: f64 },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

/// Solves `E - e sin E = t` to residual `tol`: Newton from `E = t`, then
/// bisection on `[t - e, t + e]` if Newton stalls (as it can for `e` near 1).
pub fn solve_kepler(e: f64, t: f64, tol: f64) -> Result<f64, SitnikovError> {
    solve_kepler_from(e, t, t, tol)
}

/// [`solve_kepler`] with a caller-supplied starting guess.
pub fn solve_kepler_from(e: f64, t: f64, seed: f64, tol: f64) -> Result<f64, SitnikovError> {
    let g = |x: f64| x - e * x.sin() - t;
    let mut x = seed;
    for _ in 0..50 {
        let r = g(x);
        if r.abs() <= tol {
            return Ok(x);
        }
        let d = 1.0 - e * x.cos();
        if d.abs() < 1e-14 {
            break;
        }
        x -= r / d;
        if !x.is_finite() {
            break;
        }
    }
    // g is nondecreasing with g(t - e) <= 0 <= g(t + e)
    let (mut lo, mut hi) = (t - e, t + e);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let r = g(mid);
        if r.abs() <= tol {
            return Ok(mid);
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * mid.abs().max(1.0) {
            break;
        }
    }
    let mid = 0.5 * (lo + hi);
    if g(mid).abs() <= tol {
        Ok(mid)
    } else {
        Err(SitnikovError::NoConvergence { e, t })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Formulation {
    /// `z'' = -z / (r(t)^2 + z^2)^(3/2)` with `r = (1 - e cos E(t))/2`.
    TimeDomain,
    /// The same motion in the true anomaly with `x = z / (2 r)`.
    TrueAnomaly,
    /// First order in `e` of the time-domain Hamiltonian; meaningful only
    /// for small `e`.
    ApproxFirstOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SitnikovModel {
    #[serde(serialize_with = "crate::algebra::serde_q::one")]
    pub e: Q,
    pub formulation: Formulation,
}

/// `(q1, p1, q2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct State {
    pub q1: f64,
    pub p1: f64,
    pub q2: f64,
}

impl State {
    pub fn new(q1: f64, p1: f64, q2: f64) -> Self {
        State { q1, p1, q2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionPoint {
    pub crossing_index: usize,
    pub q1: f64,
    pub p1: f64,
    /// `+1` where `sin q2` increases through zero (`k` even), `-1` otherwise.
    pub direction: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Accepted step ends, starting with the initial condition; `q2` is
    /// strictly monotone in the direction of integration.
    pub samples: Vec<State>,
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Integration and section settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionOptions {
    pub tol: f64,
    pub method: Method,
    pub escape_bound: f64,
    pub max_steps: usize,
}

impl Default for SectionOptions {
    fn default() -> Self {
        SectionOptions {
            tol: 1e-12,
            method: Method::Dop853,
            escape_bound: 50.0,
            max_steps: 10_000_000,
        }
    }
}

impl SitnikovModel {
    pub fn new(e: Q, formulation: Formulation) -> Result<Self, SitnikovError> {
        if e < Q::from_integer(0.into()) || e > Q::from_integer(1.into()) {
            return Err(SitnikovError::InvalidEccentricity(e.to_string()));
        }
        Ok(SitnikovModel { e, formulation })
    }

    pub fn e_f64(&self) -> f64 {
        crate::algebra::to_f64(&self.e)
    }

    /// `(q1', p1')` at `(q1, p1)` and time `q2`. `kepler_seed` carries the
    /// previous eccentric anomaly between calls in the time domain.
    fn field(&self, q1: f64, p1: f64, q2: f64, kepler_seed: &Cell<f64>) -> Result<[f64; 2], SitnikovError> {
        let e = self.e_f64();
        let acc = match self.formulation {
            Formulation::TimeDomain => {
                let ecc = solve_kepler_from(e, q2, kepler_seed.get(), 1e-14)
                    .or_else(|_| solve_kepler(e, q2, 1e-13))?;
                kepler_seed.set(ecc);
                let r = 0.5 * (1.0 - e * ecc.cos());
                -q1 / (r * r + q1 * q1).powf(1.5)
            }
            Formulation::TrueAnomaly => {
                let den = 1.0 + e * q2.cos();
                if den == 0.0 {
                    return Err(SitnikovError::SingularPrimaryCollision { q2 });
                }
                -(e * q2.cos() + (0.25 + q1 * q1).powf(-1.5)) * q1 / den
            }
            Formulation::ApproxFirstOrder => {
                let s = 4.0 * q1 * q1 + 1.0;
                -8.0 * q1 / s.powf(1.5) - 24.0 * e * q1 * q2.cos() / s.powf(2.5)
            }
        };
        Ok([p1, acc])
    }

    /// Right side of the first-order system; `q2' = 1` is implicit.
    pub fn rhs(&self, s: &State) -> Result<[f64; 2], SitnikovError> {
        self.field(s.q1, s.p1, s.q2, &Cell::new(s.q2))
    }

    /// The model's Hamiltonian `H(q1, p1, q2)` (without the `p2` of the
    /// autonomous completion). Conserved when `e = 0`.
    pub fn energy(&self, s: &State) -> f64 {
        let e = self.e_f64();
        let (x, p, t) = (s.q1, s.p1, s.q2);
        match self.formulation {
            Formulation::TimeDomain => {
                let ecc = solve_kepler(e, t, 1e-14).unwrap_or(t);
                let r = 0.5 * (1.0 - e * ecc.cos());
                0.5 * p * p - 1.0 / (x * x + r * r).sqrt()
            }
            Formulation::TrueAnomaly => {
                0.5 * p * p
                    + (e * x * x * t.cos() - 4.0 / (1.0 + 4.0 * x * x).sqrt())
                        / (2.0 * (1.0 + e * t.cos()))
            }
            Formulation::ApproxFirstOrder => {
                let s = 4.0 * x * x + 1.0;
                0.5 * p * p - 2.0 * e * t.cos() / s.powf(1.5) - 2.0 / s.sqrt()
            }
        }
    }

    fn run(
        &self,
        ic: &State,
        q2_end: f64,
        opts: &SectionOptions,
        mut observe: impl FnMut(&ode::Step<2>) -> Result<(), SitnikovError>,
    ) -> Result<Stats, SitnikovError> {
        if !(opts.tol > 0.0) {
            return Err(SitnikovError::BadTolerance(opts.tol));
        }
        let seed = Cell::new(ic.q2);
        let mut ode_opts = Options::for_method(opts.method, opts.tol);
        ode_opts.max_steps = opts.max_steps;
        let mut failure: Option<SitnikovError> = None;
        let result = ode::integrate(
            |t, y: &[f64; 2]| self.field(y[0], y[1], t, &seed),
            ic.q2,
            [ic.q1, ic.p1],
            q2_end,
            &ode_opts,
            |step| {
                if step.y1[0].abs() > opts.escape_bound {
                    failure = Some(SitnikovError::EscapeDetected {
                        q1: step.y1[0].abs(),
                        q2: step.t1,
                        bound: opts.escape_bound,
                    });
                    return Control::Stop;
                }
                match observe(step) {
                    Ok(()) => Control::Continue,
                    Err(e) => {
                        failure = Some(e);
                        Control::Stop
                    }
                }
            },
        );
        if let Some(e) = failure {
            return Err(e);
        }
        match result {
            Ok((_, _, stats)) => Ok(stats),
            Err(OdeError::StepFailure { t, h }) => Err(SitnikovError::StepFailure { q2: t, h }),
            Err(OdeError::MaxSteps(n)) => Err(SitnikovError::MaxSteps(n)),
            Err(OdeError::Rhs { source, .. }) => Err(source),
        }
    }

    /// Integrates from `ic` to `q2 = q2_end` (forwards or backwards) with
    /// local error per step at most `opts.tol`.
    pub fn integrate(&self, ic: &State, q2_end: f64, opts: &SectionOptions) -> Result<Trajectory, SitnikovError> {
        let mut samples = vec![*ic];
        let stats = self.run(ic, q2_end, opts, |step| {
            samples.push(State::new(step.y1[0], step.y1[1], step.t1));
            Ok(())
        })?;
        Ok(Trajectory {
            samples,
            accepted: stats.accepted,
            rejected: stats.rejected,
            evaluations: stats.evaluations,
        })
    }

    /// The first `n_crossings` points of the orbit of `ic` on `q2 = k pi`,
    /// `k >= ceil(ic.q2 / pi)` (the initial condition itself counts when it
    /// lies on the section). Crossing states come from the dense output
    /// evaluated exactly at `k pi`.
    pub fn section(&self, ic: &State, n_crossings: usize, opts: &SectionOptions) -> Result<Vec<SectionPoint>, SitnikovError> {
        let k0 = (ic.q2 / PI).ceil() as i64;
        let direction = |k: i64| if k.rem_euclid(2) == 0 { 1 } else { -1 };
        let mut out = Vec::with_capacity(n_crossings);
        let mut next = k0;
        if (next as f64) * PI == ic.q2 && n_crossings > 0 {
            out.push(SectionPoint {
                crossing_index: 0,
                q1: ic.q1,
                p1: ic.p1,
                direction: direction(next),
            });
            next += 1;
        }
        if out.len() >= n_crossings {
            return Ok(out);
        }
        let last = k0 + n_crossings as i64;
        let q2_end = last as f64 * PI;
        self.run(ic, q2_end, opts, |step| {
            while out.len() < n_crossings {
                let tk = next as f64 * PI;
                if tk > step.t1 {
                    break;
                }
                let y = if tk == step.t1 { step.y1 } else { step.at(tk) };
                out.push(SectionPoint {
                    crossing_index: out.len(),
                    q1: y[0],
                    p1: y[1],
                    direction: direction(next),
                });
                next += 1;
            }
            Ok(())
        })?;
        Ok(out)
    }
}

/// Sections of several initial conditions in parallel. Each orbit is
/// integrated independently, so the result does not depend on the number
/// of worker threads.
pub fn poincare_section(
    model: &SitnikovModel,
    ics: &[State],
    n_crossings: usize,
    opts: &SectionOptions,
) -> Vec<Result<Vec<SectionPoint>, SitnikovError>> {
    ics.par_iter()
        .map(|ic| model.section(ic, n_crossings, opts))
        .collect()
}

/// `n x n` initial conditions on `[lo, hi]^2` in the `(q1, p1)` plane at
/// `q2 = 0`, row-major in `p1`.
pub fn grid(n: usize, lo: f64, hi: f64) -> Vec<State> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(State::new(lo + j as f64 * step, lo + i as f64 * step, 0.0));
        }
    }
    out
}
