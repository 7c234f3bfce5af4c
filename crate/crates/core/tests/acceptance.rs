//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use toda_lift::eisenhart::{self, EisenhartState};
use toda_lift::findings::adjudicate;
use toda_lift::integrate::uniform_times;
use toda_lift::killing::{isometry_flow, rank_two_metric_mismatch, verify_killing, Isometry, Lift};
use toda_lift::linalg::{basis_product_identities, mat_exp, udu_decompose, upper, UduFactors};
use toda_lift::oplift::{
    self, build_x, generalized_hamiltonian, initial_xdot, monitors_general, monitors_n2, reduction_check, velocities,
    z_from_omega, ExactGeodesic, OpState,
};
use toda_lift::sampling::{centered, centered_state, couplings, rng, substream, uniform_vec};
use toda_lift::trajectory::relative_drift;
use toda_lift::{IntegratorConfig, PhaseState, Result, SquareMatrix, TodaSystem};

const SEED: u64 = 2024;

struct Outcome {
    pass: bool,
    measured: String,
}

fn outcome(pass: bool, measured: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        measured: measured.into(),
    }
}

fn sup_dq(a: &[Vec<f64>], b: &[Vec<f64>], n: usize) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x[..n].iter().zip(&y[..n]).map(|(u, v)| (u - v).abs()))
        .fold(0.0, f64::max)
}

fn chain(seed: u64, n: usize) -> (TodaSystem, PhaseState, Vec<f64>) {
    let mut r = rng(seed);
    let g = couplings(&mut r, n, 0.5, 2.0);
    let s = centered_state(&mut r, n, 1.0);
    let omega = uniform_vec(&mut r, n - 1, -1.0, 1.0);
    (TodaSystem::new(g).unwrap(), s, omega)
}

fn invariant_conservation() -> Result<Outcome> {
    let clock = Instant::now();
    let cfg = IntegratorConfig::adaptive(1e-10, 1e-12, 50.0);
    let times = uniform_times(50.0, 500);
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        for trial in 0..3 {
            let (sys, s, _) = chain(SEED + 100 * n as u64 + trial, n);
            let traj = sys.trajectory(&s, &times, &cfg)?;
            let series = traj
                .states
                .iter()
                .map(|y| sys.invariants(&PhaseState::from_slice(y)?, n))
                .collect::<Result<Vec<_>>>()?;
            for k in 0..n {
                let values: Vec<f64> = series.iter().map(|v| v[k]).collect();
                worst = worst.max(relative_drift(&values));
            }
        }
    }
    let secs = clock.elapsed().as_secs_f64();
    Ok(outcome(
        worst < 1e-8 && secs < 10.0,
        format!("max relative drift {worst:.3e} (gate 1e-8), runtime {secs:.2} s (gate 10 s)"),
    ))
}

type Field<'a> = dyn Fn(f64, &[f64], &mut [f64]) + 'a;
type LaxFn<'a> = dyn Fn(&[f64]) -> Result<(SquareMatrix, SquareMatrix)> + 'a;

/// Central difference of `L` along the flow, compared with `[L, M]`.
fn lax_residual(field: &Field<'_>, lax: &LaxFn<'_>, y: &[f64]) -> Result<f64> {
    let h = 1e-4;
    let mut f = vec![0.0; y.len()];
    field(0.0, y, &mut f);
    let shift = |sgn: f64| -> Vec<f64> { y.iter().zip(&f).map(|(a, b)| a + sgn * h * b).collect() };
    let l_dot = (&lax(&shift(1.0))?.0 - &lax(&shift(-1.0))?.0).scale(0.5 / h);
    let (l, m) = lax(y)?;
    let c = l.commutator(&m);
    Ok((&l_dot - &c).max_abs() / c.max_abs().max(1.0))
}

fn lax_equation() -> Result<Outcome> {
    let cfg = IntegratorConfig::default();
    let times = uniform_times(10.0, 50);
    let (mut base, mut lifted): (f64, f64) = (0.0, 0.0);
    for n in 2..=4 {
        let (sys, s, _) = chain(SEED + 200 + n as u64, n);
        let traj = sys.trajectory(&s, &times, &cfg)?;
        let field = sys.vector_field();
        let lax = |y: &[f64]| sys.lax_pair(&PhaseState::from_slice(y)?);
        for y in &traj.states {
            base = base.max(lax_residual(&field, &lax, y)?);
        }
        let e = EisenhartState::lift(&s, 0.3, 1.4);
        let etraj = eisenhart::geodesic(&sys, &e, &times, &cfg)?;
        let efield = eisenhart::vector_field(&sys);
        let elax = |y: &[f64]| eisenhart::lifted_lax(&sys, &EisenhartState::from_slice(y)?);
        for y in &etraj.states {
            lifted = lifted.max(lax_residual(&efield, &elax, y)?);
        }
    }
    Ok(outcome(
        base < 1e-6 && lifted < 1e-6,
        format!("|dL/dt - [L,M]| {base:.3e}, lifted {lifted:.3e} (gate 1e-6)"),
    ))
}

fn evolution_conjugation() -> Result<Outcome> {
    let cfg = IntegratorConfig::default();
    let (sys, s, _) = chain(SEED + 300, 3);
    let traj = sys.trajectory(&s, &uniform_times(20.0, 200), &cfg)?;
    let a = sys.evolve_a(&traj, &cfg)?;
    let l0 = sys.lax_pair(&s)?.0;
    let mut worst: f64 = 0.0;
    for (y, a) in traj.states.iter().zip(&a) {
        let lt = sys.lax_pair(&PhaseState::from_slice(y)?)?.0;
        let conj = &(a * &l0) * &a.inverse()?;
        worst = worst.max(conj.max_abs_diff(&lt));
    }
    Ok(outcome(worst < 1e-6, format!("max |A L(0) A^-1 - L(t)| {worst:.3e} (gate 1e-6)")))
}

fn eisenhart_equivalence() -> Result<Outcome> {
    let cfg = IntegratorConfig::adaptive(1e-10, 1e-12, 20.0);
    let times = uniform_times(20.0, 200);
    let (sys, s, _) = chain(SEED + 400, 4);
    let toda = sys.trajectory(&s, &times, &cfg)?;
    let unit = eisenhart::geodesic(&sys, &EisenhartState::lift(&s, 0.0, 1.0), &times, &cfg)?;
    let d1 = sup_dq(&toda.states, &unit.states, 4);
    let c = 1.7;
    let scaled = sys.rescaled(c).trajectory(&s, &times, &cfg)?;
    let lifted = eisenhart::geodesic(&sys, &EisenhartState::lift(&s, 0.0, c), &times, &cfg)?;
    let d2 = sup_dq(&scaled.states, &lifted.states, 4);
    Ok(outcome(
        d1 < 1e-6 && d2 < 1e-6,
        format!("sup |dq| at p_y=1 {d1:.3e}, at p_y={c} vs couplings c g {d2:.3e} (gate 1e-6)"),
    ))
}

fn three_way() -> Result<Outcome> {
    let clock = Instant::now();
    let cfg = IntegratorConfig::default();
    let times = uniform_times(10.0, 100);
    let mut worst: f64 = 0.0;
    for n in 2..=4 {
        for trial in 0..3 {
            let (sys, s, omega) = chain(SEED + 500 + 10 * n as u64 + trial, n);
            let toda = sys.trajectory(&s, &times, &cfg)?;
            let op = OpState::from_toda(&s, omega, sys.couplings().to_vec())?;
            let ham = oplift::geodesic(&op, &times, &cfg)?;
            let geo = ExactGeodesic::new(&build_x(&op.q, &op.omega)?, &initial_xdot(&op)?)?;
            let exact = times.iter().map(|&t| geo.positions(t)).collect::<Result<Vec<_>>>()?;
            worst = worst
                .max(sup_dq(&toda.states, &ham.states, n))
                .max(sup_dq(&toda.states, &exact, n))
                .max(sup_dq(&ham.states, &exact, n));
        }
    }
    let secs = clock.elapsed().as_secs_f64();
    Ok(outcome(
        worst < 1e-6 && secs < 5.0,
        format!("pairwise sup |dq| {worst:.3e} (gate 1e-6), runtime {secs:.2} s (gate 5 s)"),
    ))
}

fn two_body_closed_form() -> Result<Outcome> {
    let cfg = IntegratorConfig::default();
    let want = -(2.0f64).cosh().ln();
    let sys = TodaSystem::new(vec![1.0])?;
    let s = PhaseState::new(vec![0.0, 0.0], vec![0.0, 0.0])?;
    let times = [0.0, 1.0];
    let rel = |y: &[f64]| y[0] - y[1];
    let toda = rel(&sys.trajectory(&s, &times, &cfg)?.states[1]);
    let lift = rel(&eisenhart::geodesic(&sys, &EisenhartState::lift(&s, 0.0, 1.0), &times, &cfg)?.states[1]);
    let op = OpState::from_toda(&s, vec![0.0], vec![1.0])?;
    let ham = rel(&oplift::geodesic(&op, &times, &cfg)?.states[1]);
    let exact = rel(&ExactGeodesic::new(&build_x(&op.q, &op.omega)?, &initial_xdot(&op)?)?.positions(1.0)?);
    let err = [toda, lift, ham, exact].iter().map(|v| (v - want).abs()).fold(0.0, f64::max);
    Ok(outcome(err < 1e-8, format!("max |q1-q2 + ln cosh 2| at t=1 over four formulations {err:.3e} (gate 1e-8)")))
}

fn form_monitors() -> Result<Outcome> {
    let cfg = IntegratorConfig::adaptive(1e-10, 1e-12, 20.0);
    let times = uniform_times(20.0, 200);
    let (mut n2, mut general, mut identity): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in 2..=5 {
        let (sys, s, omega) = chain(SEED + 700 + n as u64, n);
        let op = OpState::from_toda(&s, omega, sys.couplings().to_vec())?;
        let traj = oplift::geodesic(&op, &times, &cfg)?;
        for m in monitors_general(n)? {
            if m.name.starts_with("cbar_") || (m.name.starts_with("lambda_") && !m.name.starts_with("lambda_velocity")) {
                general = general.max(m.series(&traj)?.drift);
            }
        }
        if n == 2 {
            for m in monitors_n2(n)? {
                if ["C1", "C2", "C3"].contains(&m.name.as_str()) {
                    n2 = n2.max(m.series(&traj)?.drift);
                }
            }
        }
        for y in &traj.states {
            let st = OpState::from_slice(y)?;
            let (_, wd) = velocities(&st);
            for (a, w) in wd.iter().enumerate() {
                let cbar = w * (-2.0 * (st.q[a] - st.q[a + 1])).exp();
                let two_p = 2.0 * st.p_omega[a];
                identity = identity.max((cbar - two_p).abs() / (two_p.abs() * f64::EPSILON).max(f64::MIN_POSITIVE));
            }
        }
    }
    Ok(outcome(
        n2 < 1e-8 && general < 1e-8 && identity <= 4.0,
        format!(
            "C1..C3 drift {n2:.3e}, cbar/lambda drift {general:.3e} (gate 1e-8), cbar - 2 p_w within {identity:.1} ulp (gate 4)"
        ),
    ))
}

fn reduction() -> Result<Outcome> {
    let cfg = IntegratorConfig::adaptive(1e-10, 1e-12, 20.0);
    let (sys, s, omega) = chain(SEED + 800, 4);
    let op = OpState::from_toda(&s, omega, sys.couplings().to_vec())?;
    let traj = oplift::geodesic(&op, &uniform_times(20.0, 200), &cfg)?;
    let r = reduction_check(&sys, &traj, &cfg)?;
    Ok(outcome(
        r.passes(1e-8, 1e-6),
        format!(
            "|ydot - 2V| {:.3e}, |kinetic - 2V| {:.3e} (gate 1e-8), Eisenhart sup |dq| {:.3e} (gate 1e-6)",
            r.ydot_residual, r.kinetic_residual, r.eisenhart_q_deviation
        ),
    ))
}

fn killing() -> Result<Outcome> {
    let cfg = IntegratorConfig::adaptive(1e-11, 1e-13, 20.0);
    let (mut bracket, mut drift, mut metric): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut all = true;
    for n in 2..=5 {
        let sys = TodaSystem::new(couplings(&mut rng(SEED + 900 + n as u64), n, 0.5, 2.0))?;
        for lift in [Lift::Eisenhart, Lift::Generalized] {
            for k in 1..=n {
                let r = verify_killing(&sys, lift, k, 100, SEED, &cfg)?;
                bracket = bracket.max(r.bracket_max);
                drift = drift.max(r.drift_max);
                all &= r.pass;
            }
            metric = metric.max(rank_two_metric_mismatch(&sys, lift, 20, SEED)?);
        }
    }
    Ok(outcome(
        all && metric < 1e-10,
        format!("bracket {bracket:.3e} (gate 1e-5), drift {drift:.3e} (gate 1e-8), K_(2) vs inverse metric {metric:.3e} (gate 1e-10)"),
    ))
}

fn isometries() -> Result<Outcome> {
    let n = 5;
    let mut r = substream(SEED, 1000);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let s = OpState::new(
            centered(uniform_vec(&mut r, n, -1.0, 1.0)),
            uniform_vec(&mut r, n - 1, -1.0, 1.0),
            centered(uniform_vec(&mut r, n, -1.0, 1.0)),
            uniform_vec(&mut r, n - 1, -2.0, 2.0),
        )?;
        let h = generalized_hamiltonian(&s);
        let gens = (1..n)
            .map(|a| Isometry::OmegaTranslation { a })
            .chain((1..=n).map(|a| Isometry::Lambda { a }));
        for g in gens {
            let t = uniform_vec(&mut r, 1, -2.0, 2.0)[0];
            let moved = isometry_flow(g, &s, t)?;
            worst = worst.max((generalized_hamiltonian(&moved) - h).abs() / h.abs());
        }
    }
    Ok(outcome(worst < 1e-13, format!("max relative change of H {worst:.3e} (gate 1e-13)")))
}

fn structural() -> Result<Outcome> {
    let identities = (2..=6)
        .map(basis_product_identities)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .map(|c| c.max_residual)
        .fold(0.0, f64::max);
    let mut r = substream(SEED, 1100);
    let (mut closed, mut udu, mut det): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in 2..=8 {
        let omega = uniform_vec(&mut r, n - 1, -1.5, 1.5);
        let mut gen = SquareMatrix::zeros(n);
        for (a, w) in omega.iter().enumerate() {
            gen = &gen + &upper(a + 1, a + 2, n)?.scale(*w);
        }
        let z = z_from_omega(&omega, n)?;
        closed = closed.max(z.max_abs_diff(&mat_exp(&gen)?) / z.max_abs().max(1.0));

        let q = centered(uniform_vec(&mut r, n, -1.0, 1.0));
        let mut zu = SquareMatrix::identity(n);
        for i in 0..n {
            for j in (i + 1)..n {
                zu[(i, j)] = uniform_vec(&mut r, 1, -1.0, 1.0)[0];
            }
        }
        let factors = UduFactors {
            z: zu,
            hsq: q.iter().map(|v| (2.0 * v).exp()).collect(),
        };
        let x = factors.compose();
        let back = udu_decompose(&x)?;
        udu = udu
            .max(back.compose().max_abs_diff(&x) / x.max_abs())
            .max(back.z.max_abs_diff(&factors.z))
            .max(back.hsq.iter().zip(&factors.hsq).map(|(a, b)| (a - b).abs() / b).fold(0.0, f64::max));

        let p = centered(uniform_vec(&mut r, n, -1.0, 1.0));
        let pw = uniform_vec(&mut r, n - 1, 0.5, 2.0);
        let op = OpState::new(q, omega, p, pw)?;
        let geo = ExactGeodesic::new(&build_x(&op.q, &op.omega)?, &initial_xdot(&op)?)?;
        for t in uniform_times(10.0, 50) {
            det = det.max((geo.raw(t)?.1 - 1.0).abs());
        }
    }
    Ok(outcome(
        identities == 0.0 && closed < 1e-13 && udu < 1e-12 && det < 1e-8,
        format!(
            "identity residual {identities:.1e} (exact), Z closed form {closed:.3e} (gate 1e-13), UDU round trip {udu:.3e} (gate 1e-12), raw det drift {det:.3e} (gate 1e-8)"
        ),
    ))
}

fn adjudication() -> Result<Outcome> {
    let f = adjudicate(SEED)?;
    let required = [
        "invariant_normalisation",
        "lambda_normalisation",
        "zdot_orientation",
        "f_abc_variant",
    ];
    let present = required.iter().all(|id| f.get(id).is_some_and(|x| !x.rows.is_empty()));
    let supported = f.findings.iter().filter(|x| x.supported).count();
    Ok(outcome(
        present && f.all_supported(),
        format!("{supported}/{} findings supported, required questions backed by tables: {present}", f.findings.len()),
    ))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Result<Outcome>);
    let criteria: [Criterion; 12] = [
        ("invariant conservation", invariant_conservation),
        ("Lax equation residual", lax_equation),
        ("evolution-matrix conjugation", evolution_conjugation),
        ("Eisenhart equivalence", eisenhart_equivalence),
        ("three-way agreement", three_way),
        ("n=2 closed form", two_body_closed_form),
        ("form monitors", form_monitors),
        ("reduction identity", reduction),
        ("Killing verification", killing),
        ("isometry exactness", isometries),
        ("structural identities", structural),
        ("adjudication reports", adjudication),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        failed += usize::from(!o.pass);
        println!("{} criterion {}: {name}: measured {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.measured);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
