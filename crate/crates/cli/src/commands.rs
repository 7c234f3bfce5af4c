//! Subcommands and their residual gates.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use toda_lift::eisenhart::{self, EisenhartState};
use toda_lift::findings::adjudicate;
use toda_lift::integrate::{integrate, uniform_times};
use toda_lift::killing::{
    lift_invariant, rank_two_metric_mismatch, verify_killing, KillingReport, Lift, SymmetricTensorField, DRIFT_GATE,
};
use toda_lift::linalg::{basis_product_identities, mat_exp, upper, IdentityCheck};
use toda_lift::oplift::{
    self, build_x, generalized_hamiltonian, initial_xdot, monitors_general, monitors_n2, reduction_check, z_from_omega,
    ExactGeodesic, OpState, ReductionReport,
};
use toda_lift::sampling::{substream, uniform_vec};
use toda_lift::trajectory::relative_drift;
use toda_lift::{IntegratorConfig, PhaseState, SquareMatrix, TodaSystem};

use crate::config::{parse_config, ConfigError, ExperimentConfig, Format};
use crate::error::CliError;
use crate::output::{indexed, resolve_path, write_json, write_table, Table};

/// Seed used by commands that take no configuration.
pub const DEFAULT_SEED: u64 = 2024;
/// Gate on pairwise `sup |Δq|` between formulations.
pub const AGREEMENT_GATE: f64 = 1e-6;
/// Gate on the reduction residuals.
pub const REDUCTION_GATE: f64 = 1e-8;
/// Gate on the `Z` closed form against the series exponential.
pub const CLOSED_FORM_GATE: f64 = 1e-13;
/// Gate on `|Σ K_α p^α/α! − 𝓘_k|` after polarisation.
pub const CONTRACTION_GATE: f64 = 1e-9;
/// Gate on `K_(2)` against the inverse lift metric.
pub const METRIC_GATE: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "toda-lift", version, about = "Toda chain lifts: trajectories, cross-checks and residual reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Configuration file (JSON).
    #[arg(short, long)]
    pub config: PathBuf,
    #[arg(long)]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; overrides the configuration and the output directory.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The chain itself.
    #[command(subcommand)]
    Toda(RunOnly),
    /// Geodesics of the one-dimensional Eisenhart lift.
    #[command(subcommand)]
    Eisenhart(RunOnly),
    /// The symmetric-space lift.
    #[command(subcommand)]
    Oplift(OpliftCommand),
    /// Conserved forms along geodesics of the symmetric-space lift.
    #[command(subcommand)]
    Forms(FormsCommand),
    /// Reduction of the symmetric-space lift to the Eisenhart lift.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Killing tensors of both lifts.
    #[command(subcommand)]
    Killing(KillingCommand),
    /// Basis product rules and the chain exponential.
    #[command(subcommand)]
    Identities(IdentitiesCommand),
    /// Numerical resolution of the ambiguous conventions.
    Findings {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RunOnly {
    /// Integrate and write the trajectory with invariants.
    Run(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpliftMode {
    Hamiltonian,
    Exact,
}

#[derive(Debug, Subcommand)]
pub enum OpliftCommand {
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = OpliftMode::Hamiltonian)]
        mode: OpliftMode,
    },
    /// Chain, Hamiltonian geodesic and exact geodesic side by side.
    Compare(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormSet {
    N2,
    General,
}

#[derive(Debug, Subcommand)]
pub enum FormsCommand {
    Monitor {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        set: FormSet,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReduceCommand {
    Check(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LiftArg {
    Eisenhart,
    Generalized,
}

impl From<LiftArg> for Lift {
    fn from(l: LiftArg) -> Self {
        match l {
            LiftArg::Eisenhart => Lift::Eisenhart,
            LiftArg::Generalized => Lift::Generalized,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum KillingCommand {
    /// Components of `K_(k)` at the configured point.
    Extract {
        #[command(flatten)]
        common: Common,
        #[arg(short)]
        k: usize,
        #[arg(long, value_enum, default_value_t = LiftArg::Generalized)]
        lift: LiftArg,
    },
    /// Bracket and drift checks for every rank up to `n`.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        lift: LiftArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum IdentitiesCommand {
    Check {
        #[arg(short, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// What a command reports back.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: String,
    pub pass: bool,
    pub summary: String,
    pub path: PathBuf,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} {}: {} -> {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.summary,
            self.path.display()
        )
    }

    pub fn exit_code(&self) -> u8 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

fn load(common: &Common) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(&common.config).map_err(|e| ConfigError {
        path: "$".into(),
        message: format!("cannot read {}: {e}", common.config.display()),
    })?;
    let mut cfg = parse_config(&text)?;
    cfg.apply_overrides(common.t_final, common.rtol, common.seed)?;
    Ok(cfg)
}

fn output_path(common: &Common, cfg: &ExperimentConfig, stem: &str, format: Format) -> PathBuf {
    resolve_path(common.output.as_deref().or(cfg.output.path.as_deref()), stem, format)
}

/// Writes a table; an explicit `.csv` or `.json` output path picks the format.
fn write_output(table: &Table, common: &Common, cfg: &ExperimentConfig, stem: &str) -> Result<PathBuf, CliError> {
    let format = match common.output.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        Some("csv") => Format::Csv,
        _ => cfg.output.format,
    };
    let path = output_path(common, cfg, stem, format);
    write_table(table, format, &path)?;
    Ok(path)
}

fn system(cfg: &ExperimentConfig) -> Result<TodaSystem, CliError> {
    Ok(TodaSystem::new(cfg.system.g.clone())?)
}

fn op_state(cfg: &ExperimentConfig) -> Result<OpState, CliError> {
    Ok(OpState::new(cfg.initial.q.clone(), cfg.omega(), cfg.initial.p.clone(), cfg.p_omega())?)
}

fn phase_columns(n: usize, extra: &[&str]) -> Vec<String> {
    let mut c = vec!["t".to_string()];
    c.extend(indexed("q", n));
    c.extend(indexed("p", n));
    for e in extra {
        if e.ends_with('_') {
            c.extend(indexed(e.trim_end_matches('_'), n - 1));
        } else {
            c.push(e.to_string());
        }
    }
    c.extend(indexed("I", n));
    c.push("H".into());
    c
}

/// Largest relative drift over the invariant and energy columns.
fn invariant_drift(table: &Table, n: usize) -> f64 {
    indexed("I", n)
        .chain(std::iter::once("H".to_string()))
        .filter_map(|c| table.column(&c))
        .map(|v| relative_drift(&v))
        .fold(0.0, f64::max)
}

fn drift_outcome(name: &str, table: &Table, n: usize, path: PathBuf, extra: &str) -> Outcome {
    let drift = invariant_drift(table, n);
    Outcome {
        name: name.into(),
        pass: drift < DRIFT_GATE,
        summary: format!("{} samples, max relative drift of I_1..I_{n}, H {drift:.3e} (gate {DRIFT_GATE:e}){extra}", table.rows.len()),
        path,
    }
}

fn toda_run(common: &Common) -> Result<Outcome, CliError> {
    let cfg = load(common)?;
    let sys = system(&cfg)?;
    let n = sys.n();
    let s0 = PhaseState::new(cfg.initial.q.clone(), cfg.initial.p.clone())?;
    let traj = integrate(&sys.vector_field(), &s0.to_vec(), &cfg.integrator, &[])?;
    let mut table = Table::new(phase_columns(n, &[]));
    for (t, y) in traj.times.iter().zip(&traj.states) {
        let s = PhaseState::from_slice(y)?;
        let mut row = vec![*t];
        row.extend_from_slice(y);
        row.extend(sys.invariants(&s, n)?);
        row.push(sys.hamiltonian(&s)?);
        table.push(row);
    }
    let path = write_output(&table, common, &cfg, "toda_run")?;
    Ok(drift_outcome("toda run", &table, n, path, ""))
}

fn eisenhart_run(common: &Common) -> Result<Outcome, CliError> {
    let cfg = load(common)?;
    let sys = system(&cfg)?;
    let n = sys.n();
    let s0 = EisenhartState::new(cfg.initial.q.clone(), cfg.initial.y, cfg.initial.p.clone(), cfg.p_y())?;
    let traj = integrate(&eisenhart::vector_field(&sys), &s0.to_vec(), &cfg.integrator, &[])?;
    let mut table = Table::new(phase_columns(n, &["y", "p_y"]));
    for (t, y) in traj.times.iter().zip(&traj.states) {
        let s = EisenhartState::from_slice(y)?;
        let mut row = vec![*t];
        row.extend(s.q.iter().chain(&s.p));
        row.extend([s.y, s.p_y]);
        row.extend(eisenhart::lifted_invariants(&sys, &s, n)?);
        row.push(eisenhart::hamiltonian_eisenhart(&sys, &s)?);
        table.push(row);
    }
    let path = write_output(&table, common, &cfg, "eisenhart_run")?;
    Ok(drift_outcome("eisenhart run", &table, n, path, ""))
}

fn op_row(sys: &TodaSystem, t: f64, s: &OpState) -> Result<Vec<f64>, CliError> {
    let n = s.n();
    let mut row = vec![t];
    row.extend(s.q.iter().chain(&s.p_q).chain(&s.omega).chain(&s.p_omega));
    let (x, p) = (s.position(), s.momentum());
    for k in 1..=n {
        row.push(lift_invariant(sys, Lift::Generalized, k)?(&x, &p));
    }
    row.push(generalized_hamiltonian(s));
    Ok(row)
}

/// Output grid for sampled (non-integrated) runs: spacing `dt · stride`.
fn sample_times(cfg: &IntegratorConfig) -> Vec<f64> {
    let count = (cfg.t_final / (cfg.dt * cfg.stride as f64)).ceil().max(1.0) as usize;
    uniform_times(cfg.t_final, count)
}

fn exact_geodesic(s: &OpState) -> Result<ExactGeodesic, CliError> {
    Ok(ExactGeodesic::new(&build_x(&s.q, &s.omega)?, &initial_xdot(s)?)?)
}

fn oplift_run(common: &Common, mode: OpliftMode) -> Result<Outcome, CliError> {
    let cfg = load(common)?;
    let n = cfg.system.n;
    // Couplings live in p_ω here; the system only sizes the invariants.
    let sys = TodaSystem::new(cfg.p_omega())?;
    let s0 = op_state(&cfg)?;
    let mut table = Table::new(phase_columns(n, &["omega_", "p_omega_"]));
    let mut extra = String::new();
    match mode {
        OpliftMode::Hamiltonian => {
            let traj = integrate(&oplift::vector_field(n), &s0.to_vec(), &cfg.integrator, &[])?;
            for (t, y) in traj.times.iter().zip(&traj.states) {
                table.push(op_row(&sys, *t, &OpState::from_slice(y)?)?);
            }
        }
        OpliftMode::Exact => {
            let geo = exact_geodesic(&s0)?;
            let mut det: f64 = 0.0;
            for t in sample_times(&cfg.integrator) {
                let s = geo.chain_state(t)?;
                det = det.max((geo.raw(t)?.1 - 1.0).abs());
                table.push(op_row(&sys, t, &s)?);
            }
            extra = format!("; raw det drift {det:.3e}");
        }
    }
    let stem = match mode {
        OpliftMode::Hamiltonian => "oplift_hamiltonian",
        OpliftMode::Exact => "oplift_exact",
    };
    let path = write_output(&table, common, &cfg, stem)?;
    Ok(drift_outcome(&format!("oplift run ({stem})"), &table, n, path, &extra))
}

fn sup_dq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn oplift_compare(common: &Common) -> Result<Outcome, CliError> {
    let cfg = load(common)?;
    let sys = system(&cfg)?;
    let n = sys.n();
    let toda0 = PhaseState::new(cfg.initial.q.clone(), cfg.initial.p.clone())?;
    let op0 = OpState::from_toda(&toda0, cfg.omega(), sys.couplings().to_vec())?;
    let times = sample_times(&cfg.integrator);
    let ic = &cfg.integrator;
    let (toda, ham, exact) = std::thread::scope(|scope| {
        let a = scope.spawn(|| sys.trajectory(&toda0, &times, ic));
        let b = scope.spawn(|| oplift::geodesic(&op0, &times, ic));
        let c = scope.spawn(|| -> Result<Vec<Vec<f64>>, CliError> {
            let geo = exact_geodesic(&op0)?;
            Ok(times.iter().map(|&t| geo.positions(t)).collect::<Result<_, _>>()?)
        });
        (a.join(), b.join(), c.join())
    });
    let toda = toda.expect("chain thread panicked")?;
    let ham = ham.expect("geodesic thread panicked")?;
    let exact = exact.expect("exact thread panicked")?;
    let mut table = Table::new(
        ["t", "dq_toda_hamiltonian", "dq_toda_exact", "dq_hamiltonian_exact"]
            .map(String::from)
            .to_vec(),
    );
    let mut worst = [0.0f64; 3];
    for i in 0..times.len() {
        let (a, b, c) = (&toda.states[i][..n], &ham.states[i][..n], &exact[i][..]);
        let d = [sup_dq(a, b), sup_dq(a, c), sup_dq(b, c)];
        for (w, v) in worst.iter_mut().zip(d) {
            *w = w.max(v);
        }
        table.push(vec![times[i], d[0], d[1], d[2]]);
    }
    let path = write_output(&table, common, &cfg, "oplift_compare")?;
    Ok(Outcome {
        name: "oplift compare".into(),
        pass: worst.iter().all(|w| *w < AGREEMENT_GATE),
        summary: format!(
            "sup |dq| toda/hamiltonian {:.3e}, toda/exact {:.3e}, hamiltonian/exact {:.3e} (gate {AGREEMENT_GATE:e})",
            worst[0], worst[1], worst[2]
        ),
        path,
    })
}

fn gated_form(set: FormSet, name: &str) -> bool {
    match set {
        FormSet::N2 => ["C1", "C2", "C3"].contains(&name),
        FormSet::General => {
            name.starts_with("cbar_") || (name.starts_with("lambda_") && !name.starts_with("lambda_velocity"))
        }
    }
}

fn forms_monitor(common: &Common, set: FormSet) -> Result<Outcome, CliError> {
    let cfg = load(common)?;
    let n = cfg.system.n;
    let s0 = op_state(&cfg)?;
    let traj = integrate(&oplift::vector_field(n), &s0.to_vec(), &cfg.integrator, &[])?
        .with_formulation(oplift::formulation(n));
    let monitors = match set {
        FormSet::N2 => monitors_n2(n)?,
        FormSet::General => monitors_general(n)?,
    };
    let series = monitors.iter().map(|m| m.series(&traj)).collect::<Result<Vec<_>, _>>()?;
    let mut columns = vec!["t".to_string()];
    columns.extend(series.iter().map(|s| s.name.clone()));
    let mut table = Table::new(columns);
    for (i, t) in traj.times.iter().enumerate() {
        let mut row = vec![*t];
        row.extend(series.iter().map(|s| s.values[i]));
        table.push(row);
    }
    let gated: Vec<_> = series.iter().filter(|s| gated_form(set, &s.name)).collect();
    let (worst, name) = gated
        .iter()
        .map(|s| (s.drift, s.name.as_str()))
        .fold((0.0, ""), |a, b| if b.0 > a.0 { b } else { a });
    let stem = match set {
        FormSet::N2 => "forms_n2",
        FormSet::General => "forms_general",
    };
    let path = write_output(&table, common, &cfg, stem)?;
    Ok(Outcome {
        name: format!("forms monitor ({stem})"),
        pass: worst < DRIFT_GATE,
        summary: format!(
            "{} conserved forms, max relative drift {worst:.3e}{} (gate {DRIFT_GATE:e}); {} diagnostic columns ungated",
            gated.len(),
            if name.is_empty() { String::new() } else { format!(" in {name}") },
            series.len() - gated.len()
        ),
        path,
    })
}

#[derive(Serialize)]
struct ReductionOutput<'a> {
    report: &'a ReductionReport,
    residual_gate: f64,
    q_gate: f64,
    pass: bool,
}

fn reduce_check(common: &Common) -> Result<Outcome, CliError> {
    let cfg = load(common)?;
    let sys = system(&cfg)?;
    let s0 = op_state(&cfg)?;
    let times = sample_times(&cfg.integrator);
    let traj = oplift::geodesic(&s0, &times, &cfg.integrator)?;
    let report = reduction_check(&sys, &traj, &cfg.integrator)?;
    let pass = report.passes(REDUCTION_GATE, AGREEMENT_GATE);
    let path = output_path(common, &cfg, "reduce_check", Format::Json);
    write_json(
        &ReductionOutput {
            report: &report,
            residual_gate: REDUCTION_GATE,
            q_gate: AGREEMENT_GATE,
            pass,
        },
        &path,
    )?;
    Ok(Outcome {
        name: "reduce check".into(),
        pass,
        summary: format!(
            "|ydot - 2V| {:.3e}, |kinetic - 2V| {:.3e}, block {:.3e} (gate {REDUCTION_GATE:e}); Eisenhart sup |dq| {:.3e} (gate {AGREEMENT_GATE:e})",
            report.ydot_residual, report.kinetic_residual, report.block_residual, report.eisenhart_q_deviation
        ),
        path,
    })
}

/// Position and momentum of the configured point on a lift.
fn lift_point(cfg: &ExperimentConfig, lift: Lift) -> (Vec<f64>, Vec<f64>) {
    let (mut x, mut p) = (cfg.initial.q.clone(), cfg.initial.p.clone());
    match lift {
        Lift::Eisenhart => {
            x.push(cfg.initial.y);
            p.push(cfg.p_y());
        }
        Lift::Generalized => {
            x.extend(cfg.omega());
            p.extend(cfg.p_omega());
        }
    }
    (x, p)
}

#[derive(Serialize)]
struct Component {
    index: Vec<usize>,
    value: f64,
}

#[derive(Serialize)]
struct ExtractOutput {
    lift: Lift,
    k: usize,
    position: Vec<f64>,
    momentum: Vec<f64>,
    components: Vec<Component>,
    contraction_residual: f64,
    metric_mismatch: Option<f64>,
    pass: bool,
}

fn killing_extract(common: &Common, k: usize, lift: Lift) -> Result<Outcome, CliError> {
    let cfg = load(common)?;
    let sys = system(&cfg)?;
    let field = SymmetricTensorField::from_lift(&sys, lift, k)?;
    let (x, p) = lift_point(&cfg, lift);
    let table = field.components_at(&x)?;
    let value = field.invariant(&x, &p);
    let contraction_residual = (table.contract(&p) - value).abs() / value.abs().max(1.0);
    let metric_mismatch = if k == 2 {
        Some(rank_two_metric_mismatch(&sys, lift, 20, cfg.seed.unwrap_or(DEFAULT_SEED))?)
    } else {
        None
    };
    let pass = contraction_residual < CONTRACTION_GATE && metric_mismatch.is_none_or(|m| m < METRIC_GATE);
    let out = ExtractOutput {
        lift,
        k,
        position: x,
        momentum: p,
        components: table
            .entries
            .iter()
            .map(|(index, value)| Component {
                index: index.clone(),
                value: *value,
            })
            .collect(),
        contraction_residual,
        metric_mismatch,
        pass,
    };
    let path = output_path(common, &cfg, &format!("killing_extract_{lift}_k{k}"), Format::Json);
    write_json(&out, &path)?;
    let metric = metric_mismatch.map_or(String::new(), |m| format!(", K_(2) vs inverse metric {m:.3e} (gate {METRIC_GATE:e})"));
    Ok(Outcome {
        name: format!("killing extract ({lift}, k={k})"),
        pass,
        summary: format!(
            "{} components, contraction residual {contraction_residual:.3e} (gate {CONTRACTION_GATE:e}){metric}",
            out.components.len()
        ),
        path,
    })
}

#[derive(Serialize)]
struct VerifyOutput {
    lift: Lift,
    samples: usize,
    seed: u64,
    reports: Vec<KillingReport>,
    metric_mismatch: f64,
    pass: bool,
}

fn killing_verify(common: &Common, lift: Lift, samples: usize) -> Result<Outcome, CliError> {
    let cfg = load(common)?;
    let seed = cfg.require_seed()?;
    let sys = system(&cfg)?;
    let reports = (1..=sys.n())
        .map(|k| verify_killing(&sys, lift, k, samples, seed, &cfg.integrator))
        .collect::<Result<Vec<_>, _>>()?;
    let metric_mismatch = rank_two_metric_mismatch(&sys, lift, 20, seed)?;
    let pass = reports.iter().all(|r| r.pass) && metric_mismatch < METRIC_GATE;
    let bracket = reports.iter().map(|r| r.bracket_max).fold(0.0, f64::max);
    let drift = reports.iter().map(|r| r.drift_max).fold(0.0, f64::max);
    let path = output_path(common, &cfg, &format!("killing_verify_{lift}"), Format::Json);
    write_json(
        &VerifyOutput {
            lift,
            samples,
            seed,
            reports,
            metric_mismatch,
            pass,
        },
        &path,
    )?;
    Ok(Outcome {
        name: format!("killing verify ({lift})"),
        pass,
        summary: format!(
            "k=1..{}: bracket {bracket:.3e} (gate {:e}), drift {drift:.3e} (gate {DRIFT_GATE:e}), K_(2) vs inverse metric {metric_mismatch:.3e} (gate {METRIC_GATE:e})",
            sys.n(),
            toda_lift::killing::BRACKET_GATE
        ),
        path,
    })
}

#[derive(Serialize)]
struct ClosedForm {
    n: usize,
    omega: Vec<f64>,
    residual: f64,
}

#[derive(Serialize)]
struct IdentitiesOutput {
    seed: u64,
    identities: Vec<(usize, Vec<IdentityCheck>)>,
    closed_form: Vec<ClosedForm>,
    closed_form_gate: f64,
    pass: bool,
}

fn identities_check(n: usize, seed: u64, output: Option<&Path>) -> Result<Outcome, CliError> {
    if n < 2 {
        return Err(ConfigError {
            path: "-n".into(),
            message: format!("need n >= 2, got {n}"),
        }
        .into());
    }
    let mut rng = substream(seed, 0);
    let mut identities = Vec::new();
    let mut closed_form = Vec::new();
    for dim in 2..=n {
        identities.push((dim, basis_product_identities(dim)?));
        let omega = uniform_vec(&mut rng, dim - 1, -1.5, 1.5);
        let mut gen = SquareMatrix::zeros(dim);
        for (a, w) in omega.iter().enumerate() {
            gen = &gen + &upper(a + 1, a + 2, dim)?.scale(*w);
        }
        let z = z_from_omega(&omega, dim)?;
        let residual = z.max_abs_diff(&mat_exp(&gen)?) / z.max_abs().max(1.0);
        closed_form.push(ClosedForm { n: dim, omega, residual });
    }
    let worst_identity = identities
        .iter()
        .flat_map(|(_, c)| c.iter().map(|c| c.max_residual))
        .fold(0.0, f64::max);
    let cases: usize = identities.iter().flat_map(|(_, c)| c.iter().map(|c| c.cases)).sum();
    let worst_closed = closed_form.iter().map(|c| c.residual).fold(0.0, f64::max);
    let pass = worst_identity == 0.0 && worst_closed < CLOSED_FORM_GATE;
    let path = resolve_path(output, "identities", Format::Json);
    write_json(
        &IdentitiesOutput {
            seed,
            identities,
            closed_form,
            closed_form_gate: CLOSED_FORM_GATE,
            pass,
        },
        &path,
    )?;
    Ok(Outcome {
        name: format!("identities check (n <= {n})"),
        pass,
        summary: format!(
            "{cases} product cases, max residual {worst_identity:.1e} (exact); Z closed form vs exponential {worst_closed:.3e} (gate {CLOSED_FORM_GATE:e})"
        ),
        path,
    })
}

fn findings(seed: u64, output: Option<&Path>) -> Result<Outcome, CliError> {
    let f = adjudicate(seed)?;
    let path = resolve_path(output, "findings", Format::Json);
    write_json(&f, &path)?;
    let supported = f.findings.iter().filter(|x| x.supported).count();
    Ok(Outcome {
        name: "findings".into(),
        pass: f.all_supported(),
        summary: format!("{supported}/{} resolutions supported by their tables", f.findings.len()),
        path,
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Toda(RunOnly::Run(c)) => toda_run(c),
        Command::Eisenhart(RunOnly::Run(c)) => eisenhart_run(c),
        Command::Oplift(OpliftCommand::Run { common, mode }) => oplift_run(common, *mode),
        Command::Oplift(OpliftCommand::Compare(c)) => oplift_compare(c),
        Command::Forms(FormsCommand::Monitor { common, set }) => forms_monitor(common, *set),
        Command::Reduce(ReduceCommand::Check(c)) => reduce_check(c),
        Command::Killing(KillingCommand::Extract { common, k, lift }) => killing_extract(common, *k, (*lift).into()),
        Command::Killing(KillingCommand::Verify { common, lift, samples }) => {
            killing_verify(common, (*lift).into(), *samples)
        }
        Command::Identities(IdentitiesCommand::Check { n, seed, output }) => identities_check(*n, *seed, output.as_deref()),
        Command::Findings { seed, output } => findings(*seed, output.as_deref()),
    }
}
