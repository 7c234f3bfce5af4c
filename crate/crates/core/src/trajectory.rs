use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Which phase space a trajectory's state vectors live in.
///
/// Layouts:
/// * `Toda`: `[q_1..q_n, p_1..p_n]`
/// * `Eisenhart`: `[q_1..q_n, y, p_1..p_n, p_y]`
/// * `Generalized`: `[q_1..q_n, ω_1..ω_{n-1}, p_q1..p_qn, p_ω1..p_ω(n-1)]`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Formulation {
    Toda { n: usize },
    Eisenhart { n: usize },
    Generalized { n: usize },
    Generic { dim: usize },
}

impl Formulation {
    pub fn state_len(&self) -> usize {
        match *self {
            Formulation::Toda { n } => 2 * n,
            Formulation::Eisenhart { n } => 2 * n + 2,
            Formulation::Generalized { n } => 2 * (2 * n - 1),
            Formulation::Generic { dim } => dim,
        }
    }
}

type MonitorFn<'a> = Box<dyn Fn(f64, &[f64]) -> f64 + 'a>;

/// A named scalar function sampled along a trajectory.
pub struct Monitor<'a> {
    pub name: String,
    pub eval: MonitorFn<'a>,
}

impl<'a> Monitor<'a> {
    pub fn new(name: impl Into<String>, eval: impl Fn(f64, &[f64]) -> f64 + 'a) -> Self {
        Self {
            name: name.into(),
            eval: Box::new(eval),
        }
    }
}

/// Samples of one monitor and its drift `max |I(t) − I(0)| / max(1, |I(0)|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitorSeries {
    pub name: String,
    pub values: Vec<f64>,
    pub drift: f64,
}

impl MonitorSeries {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        let drift = relative_drift(&values);
        Self {
            name: name.into(),
            values,
            drift,
        }
    }
}

pub fn relative_drift(values: &[f64]) -> f64 {
    let Some(&first) = values.first() else {
        return 0.0;
    };
    let scale = first.abs().max(1.0);
    values
        .iter()
        .map(|v| (v - first).abs() / scale)
        .fold(0.0, f64::max)
}

/// Time-stamped states plus monitored quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub formulation: Formulation,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub monitors: Vec<MonitorSeries>,
}

impl Trajectory {
    pub fn new(formulation: Formulation) -> Self {
        Self {
            formulation,
            times: Vec::new(),
            states: Vec::new(),
            monitors: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn with_formulation(mut self, formulation: Formulation) -> Self {
        self.formulation = formulation;
        self
    }

    pub fn final_state(&self) -> Option<&[f64]> {
        self.states.last().map(Vec::as_slice)
    }

    pub fn monitor(&self, name: &str) -> Option<&MonitorSeries> {
        self.monitors.iter().find(|m| m.name == name)
    }

    /// Samples a new monitor over the stored states and appends it.
    pub fn add_monitor(&mut self, monitor: &Monitor<'_>) {
        let values = self
            .times
            .iter()
            .zip(&self.states)
            .map(|(&t, y)| (monitor.eval)(t, y))
            .collect();
        self.monitors.push(MonitorSeries::new(monitor.name.clone(), values));
    }

    pub fn max_drift(&self) -> f64 {
        self.monitors.iter().map(|m| m.drift).fold(0.0, f64::max)
    }

    /// Checks time ordering and that every sequence has the same length.
    pub fn validate(&self) -> Result<()> {
        if self.states.len() != self.times.len() {
            return domain("trajectory states and times differ in length");
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return domain("trajectory times are not strictly increasing");
        }
        let want = self.formulation.state_len();
        if self.states.iter().any(|s| s.len() != want) {
            return domain("trajectory state has wrong length for its formulation");
        }
        if self.monitors.iter().any(|m| m.values.len() != self.times.len()) {
            return domain("monitor series length differs from trajectory length");
        }
        Ok(())
    }
}
