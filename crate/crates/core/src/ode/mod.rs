//! Embedded explicit Runge-Kutta pairs with continuous extensions and a PI
//! step size controller.
//!
//! Two pairs are available through [`Method`]:
//!
//! * Dormand-Prince 5(4) with the order-4 continuous extension. Butcher
//!   tableau (`c | A`, then the order-5 weights `b`, which are also the last
//!   row of `A`, so the final stage is reused as the next first stage):
//!
//! ```text
//!  0    |
//!  1/5  | 1/5
//!  3/10 | 3/40        9/40
//!  4/5  | 44/45      -56/15       32/9
//!  8/9  | 19372/6561 -25360/2187  64448/6561 -212/729
//!  1    | 9017/3168  -355/33      46732/5247  49/176  -5103/18656
//!  1    | 35/384      0           500/1113    125/192 -2187/6784   11/84
//! ------+--------------------------------------------------------------------
//!  b    | 35/384      0           500/1113    125/192 -2187/6784   11/84    0
//!  b-b* | 71/57600    0          -71/16695    71/1920 -17253/339200 22/525 -1/40
//! ```
//!
//!   Dense output uses the coefficients `d` of Hairer, Norsett and Wanner
//!   (`dopri5`, routine `contd5`).
//!
//! * Dormand-Prince 8(5,3) with the order-7 continuous extension (`dop853`,
//!   routine `contd8`); the tableau is in `tableau853.rs`. The error is the
//!   fifth-order estimate corrected by the third-order one, as in `dop853`.
//!
//! Step control: `err` is the RMS of the error estimate scaled by
//! `atol + rtol * max(|y_n|, |y_{n+1}|)`; the new step is
//! `h * clamp(safety * err^(-(1/q - k beta)) * err_prev^beta, fac_min, fac_max)`
//! with `q = 5, k = 0.75` for the 5(4) pair and `q = 8, k = 0.2` for 8(5,3).

mod tableau853;

use serde::Serialize;
use thiserror::Error;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Dopri5,
    Dop853,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Dopri5 => "dopri5",
            Method::Dop853 => "dop853",
        }
    }

    pub fn from_name(s: &str) -> Option<Method> {
        match s {
            "dopri5" => Some(Method::Dopri5),
            "dop853" => Some(Method::Dop853),
            _ => None,
        }
    }

    fn order(self) -> f64 {
        match self {
            Method::Dopri5 => 5.0,
            Method::Dop853 => 8.0,
        }
    }

    fn beta_weight(self) -> f64 {
        match self {
            Method::Dopri5 => 0.75,
            Method::Dop853 => 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub method: Method,
    pub rtol: f64,
    pub atol: f64,
    /// First trial step; chosen automatically when `None`.
    pub h_init: Option<f64>,
    pub h_max: f64,
    pub max_steps: usize,
    pub safety: f64,
    pub fac_min: f64,
    pub fac_max: f64,
    pub beta: f64,
}

impl Options {
    pub fn with_tol(tol: f64) -> Self {
        Options {
            rtol: tol,
            atol: tol,
            ..Options::default()
        }
    }

    /// Controller constants of the reference codes for `method`.
    pub fn for_method(method: Method, tol: f64) -> Self {
        match method {
            Method::Dopri5 => Options::with_tol(tol),
            Method::Dop853 => Options {
                method,
                fac_min: 1.0 / 3.0,
                fac_max: 6.0,
                beta: 0.0,
                ..Options::with_tol(tol)
            },
        }
    }
}

impl Default for Options {
    fn default() -> Self {
        Options {
            method: Method::Dopri5,
            rtol: 1e-10,
            atol: 1e-10,
            h_init: None,
            h_max: f64::INFINITY,
            max_steps: 10_000_000,
            safety: 0.9,
            fac_min: 0.2,
            fac_max: 10.0,
            beta: 0.04,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError<E> {
    #[error("step size underflow at t = {t} (h = {h})")]
    StepFailure { t: f64, h: f64 },
    #[error("more than {0} steps")]
    MaxSteps(usize),
    #[error("right-hand side failed at t = {t}: {source}")]
    Rhs { t: f64, source: E },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// One accepted step with its continuous extension.
#[derive(Debug, Clone, Copy)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    /// `y(t0 + th h) = y0 + th (r0 + (1-th) (r1 + th (r2 + (1-th) (r3 + ...))))`
    r: [[f64; N]; 7],
    len: usize,
}

impl<const N: usize> Step<N> {
    /// Dense output at `t` in `[t0, t1]` (order 4 or 7 by method).
    pub fn at(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let th = (t - self.t0) / h;
        let th1 = 1.0 - th;
        std::array::from_fn(|i| {
            let mut acc = self.r[self.len - 1][i];
            for j in (0..self.len - 1).rev() {
                let w = if j % 2 == 0 { th1 } else { th };
                acc = self.r[j][i] + w * acc;
            }
            self.y0[i] + th * acc
        })
    }

    pub fn contains(&self, t: f64) -> bool {
        let (lo, hi) = if self.t0 <= self.t1 {
            (self.t0, self.t1)
        } else {
            (self.t1, self.t0)
        };
        lo <= t && t <= hi
    }
}

/// What the observer wants after a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

/// `y + h * sum_j a[j] k[j]`, skipping zero weights.
fn combine<const N: usize>(y: &[f64; N], h: f64, a: &[f64], k: &[[f64; N]]) -> [f64; N] {
    std::array::from_fn(|i| {
        let s: f64 = a
            .iter()
            .zip(k)
            .filter(|(c, _)| **c != 0.0)
            .map(|(c, kj)| c * kj[i])
            .sum();
        y[i] + h * s
    })
}

/// Result of one trial step before acceptance is decided.
struct Trial<const N: usize> {
    y_new: [f64; N],
    err: f64,
    /// Stage derivatives, numbered from 0 (`k[0]` is the FSAL stage).
    k: Vec<[f64; N]>,
}

type Eval<'a, const N: usize, E> = dyn FnMut(f64, &[f64; N]) -> Result<[f64; N], OdeError<E>> + 'a;

fn rms<const N: usize>(v: &[f64; N], sk: &[f64; N]) -> f64 {
    (v.iter().zip(sk).map(|(x, s)| (x / s).powi(2)).sum::<f64>() / N.max(1) as f64).sqrt()
}

fn scale<const N: usize>(opts: &Options, a: &[f64; N], b: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| opts.atol + opts.rtol * a[i].abs().max(b[i].abs()))
}

fn trial_dopri5<const N: usize, E>(
    eval: &mut Eval<'_, N, E>,
    opts: &Options,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    hs: f64,
    t_new: f64,
) -> Result<Trial<N>, OdeError<E>> {
    let k2 = eval(t + C2 * hs, &axpy(y, hs, &[(A21, k1)]))?;
    let k3 = eval(t + C3 * hs, &axpy(y, hs, &[(A31, k1), (A32, &k2)]))?;
    let k4 = eval(t + C4 * hs, &axpy(y, hs, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = eval(
        t + C5 * hs,
        &axpy(y, hs, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = eval(
        t + hs,
        &axpy(y, hs, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    )?;
    let y_new = axpy(y, hs, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let k7 = eval(t_new, &y_new)?;
    let est: [f64; N] = std::array::from_fn(|i| {
        hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
    });
    let err = rms(&est, &scale(opts, y, &y_new));
    Ok(Trial {
        y_new,
        err,
        k: vec![*k1, k2, k3, k4, k5, k6, k7],
    })
}

fn dense_dopri5<const N: usize>(y: &[f64; N], tr: &Trial<N>, hs: f64) -> [[f64; N]; 7] {
    let k = &tr.k;
    let ydiff: [f64; N] = std::array::from_fn(|i| tr.y_new[i] - y[i]);
    let bspl: [f64; N] = std::array::from_fn(|i| hs * k[0][i] - ydiff[i]);
    let mut r = [[0.0; N]; 7];
    r[0] = ydiff;
    r[1] = bspl;
    r[2] = std::array::from_fn(|i| ydiff[i] - hs * k[6][i] - bspl[i]);
    r[3] = std::array::from_fn(|i| {
        hs * (D1 * k[0][i] + D3 * k[2][i] + D4 * k[3][i] + D5 * k[4][i] + D6 * k[5][i] + D7 * k[6][i])
    });
    r
}

fn trial_dop853<const N: usize, E>(
    eval: &mut Eval<'_, N, E>,
    opts: &Options,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    hs: f64,
) -> Result<Trial<N>, OdeError<E>> {
    use tableau853::{A, B, BHH, C, E as ERR};
    let mut k = Vec::with_capacity(16);
    k.push(*k1);
    for s in 1..12 {
        let ys = combine(y, hs, A[s - 1], &k);
        k.push(eval(t + C[s] * hs, &ys)?);
    }
    let y_new = combine(y, hs, &B, &k);
    let sk = scale(opts, y, &y_new);
    let (mut e5, mut e3) = (0.0, 0.0);
    for i in 0..N {
        let est5: f64 = (0..12).map(|j| ERR[j] * k[j][i]).sum();
        let bsum: f64 = (0..12).map(|j| B[j] * k[j][i]).sum();
        let est3 = bsum - BHH[0] * k[0][i] - BHH[1] * k[8][i] - BHH[2] * k[11][i];
        e5 += (est5 / sk[i]).powi(2);
        e3 += (est3 / sk[i]).powi(2);
    }
    let mut deno = e5 + 0.01 * e3;
    if deno <= 0.0 {
        deno = 1.0;
    }
    let err = hs.abs() * e5 * (1.0 / (deno * N.max(1) as f64)).sqrt();
    Ok(Trial { y_new, err, k })
}

/// Adds stage 13 (the new FSAL stage) and, for dense output, stages 14..=16.
fn finish_dop853<const N: usize, E>(
    eval: &mut Eval<'_, N, E>,
    t: f64,
    y: &[f64; N],
    tr: &mut Trial<N>,
    hs: f64,
    t_new: f64,
) -> Result<[[f64; N]; 7], OdeError<E>> {
    use tableau853::{A, C, D};
    tr.k.push(eval(t_new, &tr.y_new)?);
    for s in 13..16 {
        let ys = combine(y, hs, A[s - 1], &tr.k);
        tr.k.push(eval(t + C[s] * hs, &ys)?);
    }
    let k = &tr.k;
    let ydiff: [f64; N] = std::array::from_fn(|i| tr.y_new[i] - y[i]);
    let bspl: [f64; N] = std::array::from_fn(|i| hs * k[0][i] - ydiff[i]);
    let mut r = [[0.0; N]; 7];
    r[0] = ydiff;
    r[1] = bspl;
    r[2] = std::array::from_fn(|i| ydiff[i] - hs * k[12][i] - bspl[i]);
    for (row, d) in D.iter().enumerate() {
        r[3 + row] = std::array::from_fn(|i| hs * d.iter().zip(k).map(|(c, kj)| c * kj[i]).sum::<f64>());
    }
    Ok(r)
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end` (either direction),
/// handing each accepted step to `observe`. Returns the final time, state
/// and statistics; the final time is before `t_end` if the observer stopped.
pub fn integrate<const N: usize, E, F, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &Options,
    mut observe: O,
) -> Result<(f64, [f64; N], Stats), OdeError<E>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N], E>,
    O: FnMut(&Step<N>) -> Control,
{
    let mut stats = Stats::default();
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    if t == t_end {
        return Ok((t, y, stats));
    }
    let evaluations = std::cell::Cell::new(0usize);
    let mut eval_fn = |t: f64, y: &[f64; N]| {
        evaluations.set(evaluations.get() + 1);
        f(t, y).map_err(|source| OdeError::Rhs { t, source })
    };
    let eval: &mut Eval<'_, N, E> = &mut eval_fn;
    let method = opts.method;
    let mut k1 = eval(t, &y)?;
    let span = (t_end - t0).abs();
    let h_max = opts.h_max.min(span);
    let mut h = match opts.h_init {
        Some(h) => h.abs().min(h_max),
        None => {
            // Hairer's starting-step heuristic
            let sk = scale(opts, &y, &y);
            let d0 = rms(&y, &sk);
            let d1 = rms(&k1, &sk);
            let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
            let h0 = h0.min(h_max);
            let y1 = axpy(&y, dir * h0, &[(1.0, &k1)]);
            let k2 = eval(t + dir * h0, &y1)?;
            let diff: [f64; N] = std::array::from_fn(|i| k2[i] - k1[i]);
            let d2 = rms(&diff, &sk) / h0;
            let h1 = if d1.max(d2) <= 1e-15 {
                (h0 * 1e-3).max(1e-6)
            } else {
                (0.01 / d1.max(d2)).powf(1.0 / method.order())
            };
            (100.0 * h0).min(h1).min(h_max)
        }
    };
    let expo = 1.0 / method.order() - opts.beta * method.beta_weight();
    let mut err_old: f64 = 1e-4;
    let mut last_rejected = false;
    let finish = |stats: &mut Stats| stats.evaluations = evaluations.get();
    loop {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(OdeError::MaxSteps(opts.max_steps));
        }
        let remaining = (t_end - t) * dir;
        let mut last = false;
        if h >= remaining {
            h = remaining;
            last = true;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            return Err(OdeError::StepFailure { t, h: h * dir });
        }
        let hs = h * dir;
        let t_new = if last { t_end } else { t + hs };
        let mut tr = match method {
            Method::Dopri5 => trial_dopri5(eval, opts, t, &y, &k1, hs, t_new)?,
            Method::Dop853 => trial_dop853(eval, opts, t, &y, &k1, hs)?,
        };
        let err = tr.err;
        if !err.is_finite() {
            stats.rejected += 1;
            h *= opts.fac_min;
            last_rejected = true;
            continue;
        }
        let fac11 = err.powf(expo);
        let mut fac = fac11 / err_old.powf(opts.beta) / opts.safety;
        fac = fac.clamp(1.0 / opts.fac_max, 1.0 / opts.fac_min);
        if err <= 1.0 {
            err_old = err.max(1e-4);
            stats.accepted += 1;
            let (r, len, k_next) = match method {
                Method::Dopri5 => (dense_dopri5(&y, &tr, hs), 4, tr.k[6]),
                Method::Dop853 => {
                    let r = finish_dop853(eval, t, &y, &mut tr, hs, t_new)?;
                    (r, 7, tr.k[12])
                }
            };
            let step = Step {
                t0: t,
                t1: t_new,
                y0: y,
                y1: tr.y_new,
                r,
                len,
            };
            t = t_new;
            y = tr.y_new;
            k1 = k_next;
            if observe(&step) == Control::Stop || last {
                finish(&mut stats);
                return Ok((t, y, stats));
            }
            let mut h_new = h / fac;
            if last_rejected {
                h_new = h_new.min(h);
            }
            h = h_new.min(h_max);
            last_rejected = false;
        } else {
            stats.rejected += 1;
            h /= (1.0 / opts.fac_min).min(fac11 / opts.safety);
            last_rejected = true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn oscillator(_: f64, y: &[f64; 2]) -> Result<[f64; 2], Infallible> {
        Ok([y[1], -y[0]])
    }

    #[test]
    fn harmonic_oscillator_accuracy() {
        let opts = Options::with_tol(1e-12);
        let (t, y, stats) = integrate(oscillator, 0.0, [1.0, 0.0], 20.0, &opts, |_| Control::Continue).unwrap();
        assert_eq!(t, 20.0);
        assert!((y[0] - 20f64.cos()).abs() < 1e-9, "{y:?}");
        assert!((y[1] + 20f64.sin()).abs() < 1e-9);
        assert!(stats.accepted > 10);
    }

    #[test]
    fn dense_output_accuracy() {
        let opts = Options::with_tol(1e-11);
        let mut worst: f64 = 0.0;
        integrate(oscillator, 0.0, [1.0, 0.0], 10.0, &opts, |s| {
            for k in 0..=10 {
                let tm = s.t0 + (s.t1 - s.t0) * k as f64 / 10.0;
                let y = s.at(tm);
                worst = worst.max((y[0] - tm.cos()).abs()).max((y[1] + tm.sin()).abs());
            }
            Control::Continue
        })
        .unwrap();
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn backwards_and_stop() {
        let opts = Options::with_tol(1e-12);
        let (_, y, _) = integrate(oscillator, 5.0, [5f64.cos(), -5f64.sin()], 0.0, &opts, |_| Control::Continue).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-9 && y[1].abs() < 1e-9);
        let mut n = 0;
        let (t, _, _) = integrate(oscillator, 0.0, [1.0, 0.0], 100.0, &opts, |_| {
            n += 1;
            if n == 3 { Control::Stop } else { Control::Continue }
        })
        .unwrap();
        assert!(t < 100.0);
    }

    #[test]
    fn rhs_errors_propagate_and_blowup_fails() {
        let r = integrate(|t, _: &[f64; 1]| if t > 1.0 { Err("boom") } else { Ok([1.0]) }, 0.0, [0.0], 2.0, &Options::default(), |_| Control::Continue);
        assert!(matches!(r, Err(OdeError::Rhs { source: "boom", .. })));
        // y' = y^2 blows up at t = 1
        let r = integrate(|_, y: &[f64; 1]| Ok::<_, Infallible>([y[0] * y[0]]), 0.0, [1.0], 2.0, &Options::with_tol(1e-10), |_| Control::Continue);
        assert!(matches!(r, Err(OdeError::StepFailure { .. })), "{r:?}");
    }

    #[test]
    fn scalar_decay_order() {
        // the observed global error scales like tol
        let run = |tol: f64| {
            let (_, y, _) = integrate(|_, y: &[f64; 1]| Ok::<_, Infallible>([-y[0]]), 0.0, [1.0], 5.0, &Options::with_tol(tol), |_| Control::Continue).unwrap();
            (y[0] - (-5f64).exp()).abs()
        };
        assert!(run(1e-6) < 1e-5);
        assert!(run(1e-11) < 1e-10);
    }

    #[test]
    fn dop853_tableau_is_consistent() {
        use tableau853::{A, B, C};
        for (row, a) in A.iter().enumerate() {
            if row == 11 {
                continue; // stage 13 is evaluated at the new point, not from A
            }
            let sum: f64 = a.iter().sum();
            let size: f64 = a.iter().map(|c| c.abs()).sum();
            assert!((sum - C[row + 1]).abs() < 1e-15 * size.max(1.0), "row {} sums to {sum}", row + 2);
        }
        assert!((B.iter().sum::<f64>() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn dop853_accuracy_and_dense_output() {
        let opts = Options::for_method(Method::Dop853, 1e-12);
        let mut worst: f64 = 0.0;
        let (t, y, stats) = integrate(oscillator, 0.0, [1.0, 0.0], 20.0, &opts, |s| {
            for k in 0..=10 {
                let tm = s.t0 + (s.t1 - s.t0) * k as f64 / 10.0;
                let y = s.at(tm);
                worst = worst.max((y[0] - tm.cos()).abs()).max((y[1] + tm.sin()).abs());
            }
            Control::Continue
        })
        .unwrap();
        assert_eq!(t, 20.0);
        assert!((y[0] - 20f64.cos()).abs() < 1e-10, "{y:?}");
        assert!(worst < 1e-10, "{worst}");
        // far fewer steps than the 5(4) pair at the same tolerance
        let (_, _, s5) = integrate(oscillator, 0.0, [1.0, 0.0], 20.0, &Options::with_tol(1e-12), |_| Control::Continue).unwrap();
        assert!(stats.accepted * 3 < s5.accepted, "{stats:?} vs {s5:?}");
        let (_, y, _) = integrate(oscillator, 5.0, [5f64.cos(), -5f64.sin()], 0.0, &opts, |_| Control::Continue).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10 && y[1].abs() < 1e-10);
    }

    #[test]
    fn dop853_non_autonomous() {
        // y' = cos(t) y, y = exp(sin t)
        let opts = Options::for_method(Method::Dop853, 1e-12);
        let (_, y, _) = integrate(|t, y: &[f64; 1]| Ok::<_, Infallible>([t.cos() * y[0]]), 0.0, [1.0], 30.0, &opts, |_| Control::Continue).unwrap();
        assert!((y[0] - 30f64.sin().exp()).abs() < 1e-10, "{y:?}");
    }

    #[test]
    fn dop853_global_error_scales_with_tol() {
        let run = |tol: f64| {
            let opts = Options::for_method(Method::Dop853, tol);
            let (_, y, _) = integrate(|_, y: &[f64; 1]| Ok::<_, Infallible>([-y[0]]), 0.0, [1.0], 5.0, &opts, |_| Control::Continue).unwrap();
            (y[0] - (-5f64).exp()).abs()
        };
        assert!(run(1e-6) < 1e-5);
        assert!(run(1e-12) < 1e-11);
    }
}
