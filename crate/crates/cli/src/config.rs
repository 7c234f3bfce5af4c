//! Experiment configuration: JSON document, validated with key paths in errors.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use toda_lift::integrate::{IntegratorConfig, Method};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("config error at `{path}`: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

fn err<T>(path: &str, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        path: path.to_string(),
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub n: usize,
    pub g: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialConfig {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    /// Eisenhart coordinate, default 0.
    pub y: f64,
    /// Eisenhart momentum, default 1.
    pub p_y: Option<f64>,
    /// Chain coordinates, default 0.
    pub omega: Option<Vec<f64>>,
    /// Chain momenta, default `g`.
    pub p_omega: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub system: SystemConfig,
    pub initial: InitialConfig,
    pub integrator: IntegratorConfig,
    pub output: OutputConfig,
    pub seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    n: Option<usize>,
    g: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    q: Option<Vec<f64>>,
    p: Option<Vec<f64>>,
    y: Option<f64>,
    p_y: Option<f64>,
    omega: Option<Vec<f64>>,
    p_omega: Option<Vec<f64>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawIntegrator {
    method: Option<Method>,
    dt: Option<f64>,
    rtol: Option<f64>,
    atol: Option<f64>,
    t_final: Option<f64>,
    stride: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    system: Option<RawSystem>,
    initial: Option<RawInitial>,
    integrator: Option<RawIntegrator>,
    output: Option<RawOutput>,
    seed: Option<u64>,
}

fn required<T>(v: Option<T>, path: &str) -> Result<T, ConfigError> {
    match v {
        Some(v) => Ok(v),
        None => err(path, "missing required key"),
    }
}

fn finite(v: &[f64], path: &str) -> Result<(), ConfigError> {
    if let Some(i) = v.iter().position(|x| !x.is_finite()) {
        return err(&format!("{path}[{i}]"), "value is not finite");
    }
    Ok(())
}

fn length(v: &[f64], want: usize, path: &str) -> Result<(), ConfigError> {
    if v.len() != want {
        return err(path, format!("expected {want} entries, found {}", v.len()));
    }
    finite(v, path)
}

fn positive(v: f64, path: &str) -> Result<(), ConfigError> {
    if !(v.is_finite() && v > 0.0) {
        return err(path, format!("must be positive, got {v}"));
    }
    Ok(())
}

/// Parses and validates a JSON configuration, applying defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw: RawConfig = match serde_json::from_str(text) {
        Ok(r) => r,
        Err(e) => return err("$", e.to_string()),
    };
    let system = required(raw.system, "system")?;
    let n = required(system.n, "system.n")?;
    if n < 2 {
        return err("system.n", format!("need at least 2 particles, got {n}"));
    }
    let g = required(system.g, "system.g")?;
    length(&g, n - 1, "system.g")?;

    let initial = required(raw.initial, "initial")?;
    let q = required(initial.q, "initial.q")?;
    length(&q, n, "initial.q")?;
    let p = required(initial.p, "initial.p")?;
    length(&p, n, "initial.p")?;
    let y = initial.y.unwrap_or(0.0);
    finite(&[y], "initial.y")?;
    if let Some(py) = initial.p_y {
        finite(&[py], "initial.p_y")?;
    }
    if let Some(w) = &initial.omega {
        length(w, n - 1, "initial.omega")?;
    }
    if let Some(w) = &initial.p_omega {
        length(w, n - 1, "initial.p_omega")?;
    }

    let ri = raw.integrator.unwrap_or_default();
    let mut integrator = IntegratorConfig::default();
    integrator.method = ri.method.unwrap_or(integrator.method);
    integrator.dt = ri.dt.unwrap_or(integrator.dt);
    integrator.rtol = ri.rtol.unwrap_or(integrator.rtol);
    integrator.atol = ri.atol.unwrap_or(integrator.atol);
    integrator.t_final = ri.t_final.unwrap_or(integrator.t_final);
    integrator.stride = ri.stride.unwrap_or(integrator.stride);

    let ro = raw.output.unwrap_or_default();
    let config = ExperimentConfig {
        system: SystemConfig { n, g },
        initial: InitialConfig {
            q,
            p,
            y,
            p_y: initial.p_y,
            omega: initial.omega,
            p_omega: initial.p_omega,
        },
        integrator,
        output: OutputConfig {
            path: ro.path,
            format: ro.format.unwrap_or_default(),
        },
        seed: raw.seed,
    };
    validate_integrator(&config.integrator)?;
    Ok(config)
}

pub(crate) fn validate_integrator(cfg: &IntegratorConfig) -> Result<(), ConfigError> {
    positive(cfg.dt, "integrator.dt")?;
    positive(cfg.rtol, "integrator.rtol")?;
    positive(cfg.atol, "integrator.atol")?;
    positive(cfg.t_final, "integrator.t_final")?;
    if cfg.stride == 0 {
        return err("integrator.stride", "must be at least 1");
    }
    Ok(())
}

impl ExperimentConfig {
    /// Command-line values win over the document.
    pub fn apply_overrides(&mut self, t_final: Option<f64>, rtol: Option<f64>, seed: Option<u64>) -> Result<(), ConfigError> {
        if let Some(t) = t_final {
            self.integrator.t_final = t;
        }
        if let Some(r) = rtol {
            self.integrator.rtol = r;
        }
        if seed.is_some() {
            self.seed = seed;
        }
        validate_integrator(&self.integrator)
    }

    pub fn omega(&self) -> Vec<f64> {
        self.initial.omega.clone().unwrap_or_else(|| vec![0.0; self.system.n - 1])
    }

    pub fn p_omega(&self) -> Vec<f64> {
        self.initial.p_omega.clone().unwrap_or_else(|| self.system.g.clone())
    }

    pub fn p_y(&self) -> f64 {
        self.initial.p_y.unwrap_or(1.0)
    }

    pub fn require_seed(&self) -> Result<u64, ConfigError> {
        required(self.seed, "seed")
    }
}
