use serde::{Deserialize, Serialize};

use super::{velocities, OpState};
use crate::eisenhart::{self, EisenhartState};
use crate::error::{domain, Result};
use crate::integrate::IntegratorConfig;
use crate::toda::{bond_factors, TodaSystem};
use crate::trajectory::{Formulation, Trajectory};

/// Tolerance on `p_ω = g` for a trajectory to count as allowed.
const COUPLING_TOLERANCE: f64 = 1e-12;

/// Residuals of the reduction `y = Σ g_a ω_a` to the standard lift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    /// `max |ẏ − 2V| / max(1, 2V)`.
    pub ydot_residual: f64,
    /// `max |½Σe^{−2Δ}ω̇² − 2V| / max(1, 2V)`.
    pub kinetic_residual: f64,
    /// `max |ẏ²/(4V) − ¼Σe^{−2Δ}ω̇²| / max(1, V)`.
    pub block_residual: f64,
    /// `sup |Δq|` against the Eisenhart geodesic started from the reduced data.
    pub eisenhart_q_deviation: f64,
    /// `sup |Δy|` against the same geodesic, scaled by `max(1, |y|)`.
    pub eisenhart_y_deviation: f64,
}

impl ReductionReport {
    pub fn passes(&self, residual_gate: f64, q_gate: f64) -> bool {
        self.ydot_residual < residual_gate && self.kinetic_residual < residual_gate && self.block_residual < residual_gate
            && self.eisenhart_q_deviation < q_gate
    }
}

/// `(q, y = Σ g_a ω_a, p_q, p_y = 1)`.
pub fn reduced_eisenhart_state(sys: &TodaSystem, s: &OpState) -> Result<EisenhartState> {
    if s.n() != sys.n() {
        return domain("state and system differ in n");
    }
    let y = sys.couplings().iter().zip(&s.omega).map(|(g, w)| g * w).sum();
    EisenhartState::new(s.q.clone(), y, s.p_q.clone(), 1.0)
}

/// Checks the reduction along a trajectory of the generalised lift with `p_ω = g`.
pub fn reduction_check(sys: &TodaSystem, traj: &Trajectory, cfg: &IntegratorConfig) -> Result<ReductionReport> {
    if traj.formulation != (Formulation::Generalized { n: sys.n() }) {
        return domain("reduction check needs a generalised-lift trajectory of the same n");
    }
    if traj.is_empty() {
        return domain("empty trajectory");
    }
    let g = sys.couplings();
    let states = traj.states.iter().map(|y| OpState::from_slice(y)).collect::<Result<Vec<_>>>()?;
    if states[0].p_omega.iter().zip(g).any(|(p, g)| (p - g).abs() > COUPLING_TOLERANCE * g.abs().max(1.0)) {
        return domain("trajectory was not generated with p_omega = g");
    }
    let mut report = ReductionReport {
        ydot_residual: 0.0,
        kinetic_residual: 0.0,
        block_residual: 0.0,
        eisenhart_q_deviation: 0.0,
        eisenhart_y_deviation: 0.0,
    };
    for s in &states {
        let v = sys.potential(&s.q)?;
        let (_, omega_dot) = velocities(s);
        let ydot: f64 = g.iter().zip(&omega_dot).map(|(g, w)| g * w).sum();
        let kin: f64 = 0.5 * bond_factors(&s.q).iter().zip(&omega_dot).map(|(e, w)| w * w / e).sum::<f64>();
        let scale = (2.0 * v).max(1.0);
        report.ydot_residual = report.ydot_residual.max((ydot - 2.0 * v).abs() / scale);
        report.kinetic_residual = report.kinetic_residual.max((kin - 2.0 * v).abs() / scale);
        let block = ydot * ydot / (4.0 * v) - 0.5 * kin;
        report.block_residual = report.block_residual.max(block.abs() / v.max(1.0));
    }
    let start = reduced_eisenhart_state(sys, &states[0])?;
    let lifted = eisenhart::geodesic(sys, &start, &traj.times, cfg)?;
    for (s, e) in states.iter().zip(&lifted.states) {
        let e = EisenhartState::from_slice(e)?;
        let dq = s.q.iter().zip(&e.q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let y: f64 = g.iter().zip(&s.omega).map(|(g, w)| g * w).sum();
        report.eisenhart_q_deviation = report.eisenhart_q_deviation.max(dq);
        report.eisenhart_y_deviation = report.eisenhart_y_deviation.max((y - e.y).abs() / y.abs().max(1.0));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::uniform_times;
    use crate::oplift::geodesic;

    #[test]
    fn single_active_coupling() {
        let sys = TodaSystem::new(vec![1.0, 0.0, 0.0]).unwrap();
        let s = OpState::new(vec![0.1, 0.0, 0.0, -0.1], vec![0.3, 0.4, -0.2], vec![0.0; 4], vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(reduced_eisenhart_state(&sys, &s).unwrap().y, 0.3);
        let traj = geodesic(&s, &uniform_times(5.0, 20), &IntegratorConfig::default()).unwrap();
        let r = reduction_check(&sys, &traj, &IntegratorConfig::default()).unwrap();
        assert!(r.passes(1e-8, 1e-6), "{r:?}");
    }

    #[test]
    fn rejects_other_couplings() {
        let sys = TodaSystem::new(vec![1.0]).unwrap();
        let s = OpState::new(vec![0.0, 0.0], vec![0.0], vec![0.0; 2], vec![2.0]).unwrap();
        let traj = geodesic(&s, &[0.0, 1.0], &IntegratorConfig::default()).unwrap();
        assert!(reduction_check(&sys, &traj, &IntegratorConfig::default()).is_err());
    }
}
