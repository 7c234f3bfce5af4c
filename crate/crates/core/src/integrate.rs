//! First-order ODE integration: classical RK4 and an adaptive Dormand–Prince 5(4) pair.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::trajectory::{Formulation, Monitor, MonitorSeries, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rk4,
    Adaptive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step for RK4, initial step for the adaptive method.
    pub dt: f64,
    pub rtol: f64,
    pub atol: f64,
    pub t_final: f64,
    /// Keep every `stride`-th step.
    pub stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Adaptive,
            dt: 1e-2,
            rtol: 1e-10,
            atol: 1e-12,
            t_final: 10.0,
            stride: 10,
        }
    }
}

impl IntegratorConfig {
    pub fn adaptive(rtol: f64, atol: f64, t_final: f64) -> Self {
        Self {
            rtol,
            atol,
            t_final,
            ..Self::default()
        }
    }

    pub fn rk4(dt: f64, t_final: f64) -> Self {
        Self {
            method: Method::Rk4,
            dt,
            t_final,
            stride: 1,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                domain(format!("{name} must be positive and finite, got {v}"))
            }
        };
        positive("dt", self.dt)?;
        positive("rtol", self.rtol)?;
        positive("atol", self.atol)?;
        positive("t_final", self.t_final)?;
        if self.stride == 0 {
            return domain("stride must be at least 1");
        }
        Ok(())
    }
}

/// Writes `dy/dt` for the state `y` at time `t` into the output slice.
pub trait VectorField: Fn(f64, &[f64], &mut [f64]) {}
impl<F: Fn(f64, &[f64], &mut [f64])> VectorField for F {}

fn check_state(t: f64, y: &[f64]) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Divergence(t))
    }
}

/// One classical fourth-order Runge–Kutta step.
pub fn rk4_step(rhs: &impl VectorField, y: &[f64], t: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) {
        return domain(format!("step must be positive, got {dt}"));
    }
    let n = y.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    rhs(t, y, &mut k1);
    axpy(&mut tmp, y, &[(0.5 * dt, &k1)]);
    rhs(t + 0.5 * dt, &tmp, &mut k2);
    axpy(&mut tmp, y, &[(0.5 * dt, &k2)]);
    rhs(t + 0.5 * dt, &tmp, &mut k3);
    axpy(&mut tmp, y, &[(dt, &k3)]);
    rhs(t + dt, &tmp, &mut k4);
    let out: Vec<f64> = (0..n)
        .map(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    check_state(t + dt, &out)?;
    Ok(out)
}

/// `out = y + Σ c·k`.
fn axpy(out: &mut [f64], y: &[f64], terms: &[(f64, &[f64])]) {
    for i in 0..y.len() {
        let mut v = y[i];
        for (c, k) in terms {
            v += c * k[i];
        }
        out[i] = v;
    }
}

// Dormand–Prince 5(4) tableau.
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b − b̂ (fifth minus embedded fourth order weights).
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Adaptive stepper state; carries the first-same-as-last stage between steps.
struct Dopri<'f, F: VectorField> {
    rhs: &'f F,
    rtol: f64,
    atol: f64,
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    y_new: Vec<f64>,
    fsal_valid: bool,
    h: f64,
    h_min: f64,
}

impl<'f, F: VectorField> Dopri<'f, F> {
    fn new(rhs: &'f F, n: usize, cfg: &IntegratorConfig, t_span: f64) -> Self {
        Self {
            rhs,
            rtol: cfg.rtol,
            atol: cfg.atol,
            k: std::array::from_fn(|_| vec![0.0; n]),
            tmp: vec![0.0; n],
            y_new: vec![0.0; n],
            fsal_valid: false,
            h: cfg.dt.min(t_span),
            h_min: 1e-14 * t_span,
        }
    }

    /// Advances `y` from `t` to exactly `t_end`. Returns the number of accepted steps.
    fn advance(&mut self, t: &mut f64, y: &mut Vec<f64>, t_end: f64, on_step: &mut dyn FnMut(f64, &[f64])) -> Result<usize> {
        let mut accepted = 0;
        while *t < t_end {
            let remaining = t_end - *t;
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };
            let err = self.attempt(*t, y, h);
            if !err.is_finite() {
                // Shrink on overflow inside the stages; give up once the step is tiny.
                self.h = h * MIN_FACTOR;
                if self.h < self.h_min {
                    return Err(Error::Divergence(*t));
                }
                continue;
            }
            if err <= 1.0 {
                *t = if last { t_end } else { *t + h };
                std::mem::swap(y, &mut self.y_new);
                self.k.swap(0, 6);
                self.fsal_valid = true;
                check_state(*t, y)?;
                accepted += 1;
                on_step(*t, y);
                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                // A shortened landing step should not shrink the step used afterwards.
                self.h = if last { self.h.max(h * factor) } else { h * factor };
            } else {
                let factor = (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
                self.h = h * factor;
                if self.h < self.h_min {
                    return Err(Error::Stiffness { t: *t, dt: self.h });
                }
            }
        }
        Ok(accepted)
    }

    /// Computes a trial step into `y_new` and returns the scaled error norm.
    fn attempt(&mut self, t: f64, y: &[f64], h: f64) -> f64 {
        let rhs = self.rhs;
        let [k1, k2, k3, k4, k5, k6, k7] = &mut self.k;
        if !self.fsal_valid {
            rhs(t, y, k1);
        }
        axpy(&mut self.tmp, y, &[(h * A21, k1)]);
        rhs(t + C2 * h, &self.tmp, k2);
        axpy(&mut self.tmp, y, &[(h * A31, k1), (h * A32, k2)]);
        rhs(t + C3 * h, &self.tmp, k3);
        axpy(&mut self.tmp, y, &[(h * A41, k1), (h * A42, k2), (h * A43, k3)]);
        rhs(t + C4 * h, &self.tmp, k4);
        axpy(
            &mut self.tmp,
            y,
            &[(h * A51, k1), (h * A52, k2), (h * A53, k3), (h * A54, k4)],
        );
        rhs(t + C5 * h, &self.tmp, k5);
        axpy(
            &mut self.tmp,
            y,
            &[(h * A61, k1), (h * A62, k2), (h * A63, k3), (h * A64, k4), (h * A65, k5)],
        );
        rhs(t + h, &self.tmp, k6);
        axpy(
            &mut self.y_new,
            y,
            &[(h * B1, k1), (h * B3, k3), (h * B4, k4), (h * B5, k5), (h * B6, k6)],
        );
        rhs(t + h, &self.y_new, k7);
        let mut err: f64 = 0.0;
        for i in 0..y.len() {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = self.atol + self.rtol * y[i].abs().max(self.y_new[i].abs());
            err = err.max(e.abs() / sc);
        }
        if self.y_new.iter().any(|v| !v.is_finite()) {
            return f64::INFINITY;
        }
        err
    }
}

fn sample_monitors(monitors: &[Monitor<'_>], times: &[f64], states: &[Vec<f64>]) -> Vec<MonitorSeries> {
    monitors
        .iter()
        .map(|m| {
            let values = times.iter().zip(states).map(|(&t, y)| (m.eval)(t, y)).collect();
            MonitorSeries::new(m.name.clone(), values)
        })
        .collect()
}

/// Integrates from `t = 0` to `cfg.t_final`, keeping the initial state, every
/// `cfg.stride`-th step, and the final state.
pub fn integrate(
    rhs: &impl VectorField,
    y0: &[f64],
    cfg: &IntegratorConfig,
    monitors: &[Monitor<'_>],
) -> Result<Trajectory> {
    cfg.validate()?;
    check_state(0.0, y0)?;
    let mut times = vec![0.0];
    let mut states = vec![y0.to_vec()];
    let mut count = 0usize;
    let mut y = y0.to_vec();
    let t_final = cfg.t_final;
    {
        let mut record = |t: f64, y: &[f64]| {
            count += 1;
            if count.is_multiple_of(cfg.stride) || t == t_final {
                times.push(t);
                states.push(y.to_vec());
            }
        };
        match cfg.method {
            Method::Adaptive => {
                let mut stepper = Dopri::new(rhs, y.len(), cfg, t_final);
                let mut t = 0.0;
                stepper.advance(&mut t, &mut y, t_final, &mut record)?;
            }
            Method::Rk4 => {
                let mut t = 0.0;
                while t < t_final {
                    let h = cfg.dt.min(t_final - t);
                    y = rk4_step(rhs, &y, t, h)?;
                    t = if t + h >= t_final || t_final - (t + h) < 1e-12 * t_final {
                        t_final
                    } else {
                        t + h
                    };
                    record(t, &y);
                }
            }
        }
    }
    let monitors = sample_monitors(monitors, &times, &states);
    Ok(Trajectory {
        formulation: Formulation::Generic { dim: y0.len() },
        times,
        states,
        monitors,
    })
}

/// Integrates from `t = 0` and records the state exactly at each of `times`.
///
/// `times` must be non-negative and strictly increasing; `cfg.t_final` and
/// `cfg.stride` are ignored.
pub fn integrate_at(
    rhs: &impl VectorField,
    y0: &[f64],
    times: &[f64],
    cfg: &IntegratorConfig,
    monitors: &[Monitor<'_>],
) -> Result<Trajectory> {
    let Some(&t_last) = times.last() else {
        return domain("no output times requested");
    };
    if times[0] < 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
        return domain("output times must be non-negative and strictly increasing");
    }
    let span = t_last.max(f64::MIN_POSITIVE);
    let cfg = IntegratorConfig {
        t_final: span,
        stride: 1,
        ..cfg.clone()
    };
    cfg.validate()?;
    check_state(0.0, y0)?;
    let mut states = Vec::with_capacity(times.len());
    let mut y = y0.to_vec();
    let mut t = 0.0;
    let mut noop = |_: f64, _: &[f64]| {};
    let mut stepper = Dopri::new(rhs, y.len(), &cfg, span);
    for &target in times {
        if target > t {
            match cfg.method {
                Method::Adaptive => {
                    stepper.advance(&mut t, &mut y, target, &mut noop)?;
                }
                Method::Rk4 => {
                    while t < target {
                        let h = cfg.dt.min(target - t);
                        y = rk4_step(rhs, &y, t, h)?;
                        t = if target - (t + h) < 1e-12 * span { target } else { t + h };
                    }
                }
            }
        }
        states.push(y.clone());
    }
    let monitors = sample_monitors(monitors, times, &states);
    Ok(Trajectory {
        formulation: Formulation::Generic { dim: y0.len() },
        times: times.to_vec(),
        states,
        monitors,
    })
}

/// `count + 1` evenly spaced times from 0 to `t_final`.
pub fn uniform_times(t_final: f64, count: usize) -> Vec<f64> {
    (0..=count).map(|i| t_final * i as f64 / count as f64).collect()
}
