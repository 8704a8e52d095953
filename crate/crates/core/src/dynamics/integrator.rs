//! Explicit Runge–Kutta integration of the complex flow over real time.
//!
//! Two schemes: classical RK4 with a fixed step, and the Dormand–Prince 5(4)
//! pair with local extrapolation and standard step-size control. Requested
//! output times are hit exactly by shortening the step that would cross them.
//! Trajectories keep every accepted node plus its phase velocity, which gives
//! cubic Hermite dense output between nodes.

use serde::{Deserialize, Serialize};

use super::{hamilton_rhs, ComplexPhasePoint};
use crate::error::{Error, Result};
use crate::orbit::Params;
use crate::parallel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Rk4Fixed,
    Rk45Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step for RK4; initial step for RK45 (`0` picks one automatically).
    pub step: f64,
    /// Relative and absolute tolerance for RK45.
    pub tolerance: f64,
    pub max_steps: usize,
    /// When set, the stepper lands on `n + 1` uniform times on `[0, t_end]`
    /// and those states form the output samples.
    pub samples: Option<usize>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self::rk45(1e-10)
    }
}

impl IntegratorConfig {
    pub fn rk4(step: f64) -> Self {
        Self {
            method: Method::Rk4Fixed,
            step,
            tolerance: 0.0,
            max_steps: 10_000_000,
            samples: None,
        }
    }

    pub fn rk45(tolerance: f64) -> Self {
        Self {
            method: Method::Rk45Adaptive,
            step: 0.0,
            tolerance,
            max_steps: 1_000_000,
            samples: None,
        }
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.samples = Some(n);
        self
    }

    pub fn with_max_steps(mut self, n: usize) -> Self {
        self.max_steps = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.max_steps == 0 {
            return bad("max_steps must be positive".into());
        }
        match self.method {
            Method::Rk4Fixed if !(self.step > 0.0 && self.step.is_finite()) => {
                bad(format!("RK4 step must be positive, got {}", self.step))
            }
            Method::Rk45Adaptive if !(self.tolerance > 0.0 && self.tolerance.is_finite()) => bad(
                format!("RK45 tolerance must be positive, got {}", self.tolerance),
            ),
            Method::Rk45Adaptive if !(self.step >= 0.0 && self.step.is_finite()) => bad(format!(
                "RK45 initial step must be non-negative, got {}",
                self.step
            )),
            _ if self.samples == Some(0) => bad("sample count must be positive".into()),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: ComplexPhasePoint,
}

/// Integrated trajectory: accepted nodes with phase velocities, plus the
/// requested output samples.
#[derive(Debug, Clone)]
pub struct Trajectory {
    params: Params,
    nodes: Vec<TrajectorySample>,
    rates: Vec<ComplexPhasePoint>,
    samples: Vec<TrajectorySample>,
}

impl Trajectory {
    fn from_nodes(
        params: Params,
        nodes: Vec<TrajectorySample>,
        rates: Vec<ComplexPhasePoint>,
        landed: Option<Vec<usize>>,
    ) -> Self {
        let samples = match landed {
            None => nodes.clone(),
            Some(idx) => std::iter::once(0).chain(idx).map(|i| nodes[i]).collect(),
        };
        Self {
            params,
            nodes,
            rates,
            samples,
        }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    /// Output samples: the accepted nodes, or the nodes at the requested times.
    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    pub fn nodes(&self) -> &[TrajectorySample] {
        &self.nodes
    }

    pub fn span(&self) -> (f64, f64) {
        (self.nodes[0].t, self.nodes[self.nodes.len() - 1].t)
    }

    pub fn final_state(&self) -> ComplexPhasePoint {
        self.nodes[self.nodes.len() - 1].state
    }

    /// Cubic Hermite dense output; `None` outside the integrated span.
    pub fn state_at(&self, t: f64) -> Option<ComplexPhasePoint> {
        let (t0, t1) = self.span();
        (t >= t0 && t <= t1).then(|| self.interpolate(t))
    }

    fn interpolate(&self, t: f64) -> ComplexPhasePoint {
        let n = self.nodes.len();
        if n == 1 {
            return self.nodes[0].state;
        }
        let i = self.nodes.partition_point(|s| s.t <= t).clamp(1, n - 1) - 1;
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        let h = b.t - a.t;
        let s = (t - a.t) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        a.state * h00 + self.rates[i] * (h10 * h) + b.state * h01 + self.rates[i + 1] * (h11 * h)
    }

    /// Largest `|Im x|`, `|Im y|` over the accepted nodes.
    pub fn max_position_imag(&self) -> f64 {
        self.nodes
            .iter()
            .map(|s| s.state.position_imag())
            .fold(0.0, f64::max)
    }

    /// Signed area swept relative to the starting direction, `Re(x₀ y − y₀ x)`.
    fn axis_offset(&self, t: f64) -> f64 {
        let s0 = self.nodes[0].state;
        let s = self.interpolate(t);
        (s0.x * s.y - s0.y * s.x).re
    }

    /// First time after the start at which the position crosses the line
    /// through the origin and the starting point again.
    ///
    /// Orbits are centred on the origin, so this is half a revolution, which is
    /// also the period of the radius.
    pub fn half_revolution_time(&self) -> Option<f64> {
        let g: Vec<f64> = self.nodes.iter().map(|s| self.axis_offset(s.t)).collect();
        (1..self.nodes.len().saturating_sub(1))
            .find(|&i| g[i] != 0.0 && (g[i] > 0.0) != (g[i + 1] > 0.0))
            .map(|i| {
                bisect(
                    |t| self.axis_offset(t),
                    self.nodes[i].t,
                    self.nodes[i + 1].t,
                )
            })
    }

    /// First time the position comes back within `delta` of the starting position,
    /// located as the minimiser of the distance on that pass.
    pub fn first_return_time(&self, delta: f64) -> Option<f64> {
        let start = self.nodes[0].state;
        let rate = |t: f64| {
            let s = self.interpolate(t);
            let v = hamilton_rhs(self.params, &s);
            ((s.x - start.x) * v.x + (s.y - start.y) * v.y).re
        };
        let dist = |t: f64| {
            let s = self.interpolate(t);
            ((s.x - start.x).norm_sqr() + (s.y - start.y).norm_sqr()).sqrt()
        };
        let left = self.nodes.iter().position(|s| dist(s.t) > delta)?;
        let g: Vec<f64> = self.nodes.iter().map(|s| rate(s.t)).collect();
        (left..self.nodes.len() - 1)
            .filter(|&i| g[i] < 0.0 && g[i + 1] >= 0.0)
            .map(|i| bisect(rate, self.nodes[i].t, self.nodes[i + 1].t))
            .find(|&t| dist(t) < delta)
    }
}

/// Root of `f` on `[a, b]` given a sign change.
fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Integrates Hamilton's equations from `s0` at `t = 0` to `t_end`.
pub fn integrate(
    params: Params,
    s0: ComplexPhasePoint,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "t_end must be finite and non-negative, got {t_end}"
        )));
    }
    if !s0.is_finite() {
        return Err(Error::NonFiniteState { t: 0.0 });
    }
    let f0 = hamilton_rhs(params, &s0);
    let mut nodes = vec![TrajectorySample { t: 0.0, state: s0 }];
    let mut rates = vec![f0];
    let stops = output_times(t_end, cfg.samples);
    let landed = match cfg.method {
        Method::Rk4Fixed => rk4(params, &stops, cfg, &mut nodes, &mut rates)?,
        Method::Rk45Adaptive => dopri5(params, &stops, cfg, &mut nodes, &mut rates)?,
    };
    Ok(Trajectory::from_nodes(
        params,
        nodes,
        rates,
        cfg.samples.map(|_| landed),
    ))
}

/// Strictly increasing positive times the stepper must land on, ending at `t_end`.
fn output_times(t_end: f64, samples: Option<usize>) -> Vec<f64> {
    match samples {
        _ if t_end == 0.0 => Vec::new(),
        None => vec![t_end],
        Some(n) => (1..=n)
            .map(|k| {
                if k == n {
                    t_end
                } else {
                    t_end * k as f64 / n as f64
                }
            })
            .collect(),
    }
}

/// Integrates several initial states, in parallel when enabled.
pub fn integrate_batch(
    params: Params,
    jobs: &[(ComplexPhasePoint, f64)],
    cfg: &IntegratorConfig,
) -> Vec<Result<Trajectory>> {
    parallel::map(jobs, |(s0, t_end)| integrate(params, *s0, *t_end, cfg))
}

fn rk4(
    params: Params,
    stops: &[f64],
    cfg: &IntegratorConfig,
    nodes: &mut Vec<TrajectorySample>,
    rates: &mut Vec<ComplexPhasePoint>,
) -> Result<Vec<usize>> {
    let t_end = stops.last().copied().unwrap_or(0.0);
    let mut prev = 0.0;
    let mut total = 0.0;
    let segments: Vec<usize> = stops
        .iter()
        .map(|&stop| {
            let n = ((stop - prev) / cfg.step).ceil().max(1.0);
            prev = stop;
            total += n;
            n as usize
        })
        .collect();
    if total > cfg.max_steps as f64 {
        return Err(Error::StepLimitExceeded {
            max_steps: cfg.max_steps,
            t_end,
        });
    }
    let f = |s: &ComplexPhasePoint| hamilton_rhs(params, s);
    let mut y = nodes[0].state;
    let mut k1 = rates[0];
    let mut t0 = 0.0;
    let mut landed = Vec::with_capacity(stops.len());
    nodes.reserve(total as usize);
    rates.reserve(total as usize);
    for (&stop, &n) in stops.iter().zip(&segments) {
        let h = (stop - t0) / n as f64;
        for i in 1..=n {
            let k2 = f(&(y + k1 * (0.5 * h)));
            let k3 = f(&(y + k2 * (0.5 * h)));
            let k4 = f(&(y + k3 * h));
            y = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            let t = if i == n { stop } else { t0 + i as f64 * h };
            if !y.is_finite() {
                return Err(Error::NonFiniteState { t });
            }
            k1 = f(&y);
            nodes.push(TrajectorySample { t, state: y });
            rates.push(k1);
        }
        landed.push(nodes.len() - 1);
        t0 = stop;
    }
    Ok(landed)
}

// Dormand–Prince 5(4) tableau.
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th minus 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn flat(s: &ComplexPhasePoint) -> [f64; 8] {
    let c = s.components();
    [
        c[0].re, c[0].im, c[1].re, c[1].im, c[2].re, c[2].im, c[3].re, c[3].im,
    ]
}

/// RMS of `err / (tol + tol·max(|y|, |y_new|))` over the eight real components.
fn error_norm(
    err: &ComplexPhasePoint,
    y: &ComplexPhasePoint,
    y_new: &ComplexPhasePoint,
    tol: f64,
) -> f64 {
    let (e, a, b) = (flat(err), flat(y), flat(y_new));
    let sum: f64 = (0..8)
        .map(|k| {
            let sc = tol + tol * a[k].abs().max(b[k].abs());
            (e[k] / sc).powi(2)
        })
        .sum();
    (sum / 8.0).sqrt()
}

fn initial_step(params: Params, y: &ComplexPhasePoint, f0: &ComplexPhasePoint, tol: f64) -> f64 {
    let zero = ComplexPhasePoint::default();
    let d0 = error_norm(y, y, &zero, tol);
    let d1 = error_norm(f0, y, &zero, tol);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let y1 = *y + *f0 * h0;
    let f1 = hamilton_rhs(params, &y1);
    let d2 = error_norm(&(f1 - *f0), y, &zero, tol) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}

fn dopri5(
    params: Params,
    stops: &[f64],
    cfg: &IntegratorConfig,
    nodes: &mut Vec<TrajectorySample>,
    rates: &mut Vec<ComplexPhasePoint>,
) -> Result<Vec<usize>> {
    let t_end = stops.last().copied().unwrap_or(0.0);
    let mut landed = Vec::with_capacity(stops.len());
    let tol = cfg.tolerance;
    let f = |s: &ComplexPhasePoint| hamilton_rhs(params, s);
    let mut t = 0.0;
    let mut y = nodes[0].state;
    let mut k1 = rates[0];
    let mut h = if cfg.step > 0.0 {
        cfg.step
    } else {
        initial_step(params, &y, &k1, tol)
    };
    let mut attempts = 0usize;
    let mut rejected_last = false;

    while let Some(&stop) = stops.get(landed.len()) {
        attempts += 1;
        if attempts > cfg.max_steps {
            return Err(Error::StepLimitExceeded {
                max_steps: cfg.max_steps,
                t_end,
            });
        }
        let natural = h;
        let last = t + h >= stop;
        if last {
            h = stop - t;
        }
        let k2 = f(&(y + k1 * (h * A21)));
        let k3 = f(&(y + (k1 * A31 + k2 * A32) * h));
        let k4 = f(&(y + (k1 * A41 + k2 * A42 + k3 * A43) * h));
        let k5 = f(&(y + (k1 * A51 + k2 * A52 + k3 * A53 + k4 * A54) * h));
        let k6 = f(&(y + (k1 * A61 + k2 * A62 + k3 * A63 + k4 * A64 + k5 * A65) * h));
        let y_new = y + (k1 * B1 + k3 * B3 + k4 * B4 + k5 * B5 + k6 * B6) * h;
        let k7 = f(&y_new);
        let err = (k1 * E1 + k3 * E3 + k4 * E4 + k5 * E5 + k6 * E6 + k7 * E7) * h;
        let norm = error_norm(&err, &y, &y_new, tol);
        if !norm.is_finite() || !y_new.is_finite() {
            if h < 1e-14 * t_end.max(1.0) {
                return Err(Error::NonFiniteState { t: t + h });
            }
            h *= 0.1;
            rejected_last = true;
            continue;
        }
        let factor = if norm == 0.0 {
            5.0
        } else {
            (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        if norm <= 1.0 {
            t = if last { stop } else { t + h };
            y = y_new;
            k1 = k7;
            nodes.push(TrajectorySample { t, state: y });
            rates.push(k1);
            h *= if rejected_last {
                factor.min(1.0)
            } else {
                factor
            };
            if last {
                landed.push(nodes.len() - 1);
                h = h.max(natural);
            }
            rejected_last = false;
        } else {
            h *= factor.min(1.0);
            rejected_last = true;
        }
    }
    Ok(landed)
}
