use serde::{Deserialize, Serialize};

use super::geometry::{velocity_generator, ZVelocity};
use super::{velocities, OpState};
use crate::error::{domain, Result};
use crate::toda::bond_factors;
use crate::trajectory::{Formulation, MonitorSeries, Trajectory};

type StateFn = Box<dyn Fn(&OpState) -> f64 + Send + Sync>;

/// Named scalar function of a generalised state, with velocities taken from the flow.
pub struct FormMonitor {
    pub name: String,
    eval: StateFn,
}

impl FormMonitor {
    pub fn new(name: impl Into<String>, eval: impl Fn(&OpState) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            eval: Box::new(eval),
        }
    }

    pub fn value(&self, s: &OpState) -> f64 {
        (self.eval)(s)
    }

    /// Evaluates the monitor at every sample of a generalised trajectory.
    pub fn series(&self, traj: &Trajectory) -> Result<MonitorSeries> {
        if !matches!(traj.formulation, Formulation::Generalized { .. }) {
            return domain("form monitors need a generalised-lift trajectory");
        }
        let values = traj
            .states
            .iter()
            .map(|y| OpState::from_slice(y).map(|s| self.value(&s)))
            .collect::<Result<Vec<_>>>()?;
        Ok(MonitorSeries::new(self.name.clone(), values))
    }
}

impl std::fmt::Debug for FormMonitor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FormMonitor").field("name", &self.name).finish()
    }
}

// ω_a with ω_0 = ω_n = 0; `a` is 1-based.
fn at(v: &[f64], a: usize) -> f64 {
    if a == 0 {
        0.0
    } else {
        v.get(a - 1).copied().unwrap_or(0.0)
    }
}

/// `λ_a = p_{q_a} + p_{ω_a} ω_a − p_{ω_{a−1}} ω_{a−1}` for `a = 1..n`.
fn lambda_momentum(s: &OpState, a: usize) -> f64 {
    s.p_q[a - 1] + at(&s.p_omega, a) * at(&s.omega, a) - at(&s.p_omega, a - 1) * at(&s.omega, a - 1)
}

/// `ρ_a` contracted with the velocity: `2q̇_a + e^{−2Δ_a}ω_aω̇_a − e^{−2Δ_{a−1}}ω_{a−1}ω̇_{a−1}`.
fn rho_a(s: &OpState, a: usize) -> f64 {
    let (q_dot, omega_dot) = velocities(s);
    let inv: Vec<f64> = bond_factors(&s.q).iter().map(|e| 1.0 / e).collect();
    2.0 * q_dot[a - 1] + at(&inv, a) * at(&s.omega, a) * at(&omega_dot, a)
        - at(&inv, a - 1) * at(&s.omega, a - 1) * at(&omega_dot, a - 1)
}

/// The `ρ_{a,a+1}` contraction with the bracket in its candidate form, including
/// its `dω_{a−1}` in both terms of the second group.
fn rho_super_candidate(s: &OpState, a: usize) -> f64 {
    let (q_dot, omega_dot) = velocities(s);
    let inv: Vec<f64> = bond_factors(&s.q).iter().map(|e| 1.0 / e).collect();
    let w = |b| at(&s.omega, b);
    let wd = |b| at(&omega_dot, b);
    let ei = |b| at(&inv, b);
    2.0 * w(a) * (q_dot[a] - q_dot[a - 1])
        + wd(a)
        + 0.5 * w(a) * ((w(a + 1) * ei(a + 1) * wd(a + 1) - w(a) * ei(a) * wd(a)) - (w(a) * ei(a) * wd(a - 1) - w(a - 1) * ei(a - 1) * wd(a - 1)))
}

/// Monitors for general `n`.
///
/// * `cbar_{a+1,a}`: `e^{−2Δ_a} ω̇_a`, identically `2p_{ω_a}`.
/// * `lambda_a`, `a = 1..n`: the momentum form, conserved.
/// * `lambda_sum`: `Σ_a λ_a`, equal to the total momentum.
/// * `rho_a`, `a = 1..n`: `ρ_a` on the velocity, equal to `2λ_a`.
/// * `rho_n_plus_sum`: `ρ_n + Σ_{a<n} ρ_a`, zero in the centred frame.
/// * `lambda_velocity_a`: `q̇_1 + g_1ω_1`, `2q̇_a + g_aω_a − g_{a−1}ω_{a−1}` with `g = p_ω`.
/// * `rho_{a,a+1}_candidate`: the candidate `ρ_{a,a+1}` on the velocity.
/// * `B_{a,b}`: entries of `ẋx⁻¹` with `Z⁻¹Ż = Σω̇_aM_{a,a+1}`. On the diagonal and
///   subdiagonal they equal `2λ_a` and `2p_{ω_a}`; above the diagonal they are not
///   conserved by the chain-coordinate flow once `n ≥ 3`.
pub fn monitors_general(n: usize) -> Result<Vec<FormMonitor>> {
    if n < 2 {
        return domain("form monitors need n ≥ 2");
    }
    let mut out = Vec::new();
    for a in 1..n {
        out.push(FormMonitor::new(format!("cbar_{},{}", a + 1, a), move |s: &OpState| {
            let (_, wd) = velocities(s);
            wd[a - 1] / bond_factors(&s.q)[a - 1]
        }));
    }
    for a in 1..=n {
        out.push(FormMonitor::new(format!("lambda_{a}"), move |s: &OpState| lambda_momentum(s, a)));
    }
    out.push(FormMonitor::new("lambda_sum", move |s: &OpState| {
        (1..=s.n()).map(|a| lambda_momentum(s, a)).sum()
    }));
    for a in 1..=n {
        out.push(FormMonitor::new(format!("rho_{a}"), move |s: &OpState| rho_a(s, a)));
    }
    out.push(FormMonitor::new("rho_n_plus_sum", move |s: &OpState| {
        (1..=s.n()).map(|a| rho_a(s, a)).sum()
    }));
    for a in 1..n {
        out.push(FormMonitor::new(format!("lambda_velocity_{a}"), move |s: &OpState| {
            let lead = if a == 1 { 1.0 } else { 2.0 };
            lead * s.p_q[a - 1] + at(&s.p_omega, a) * at(&s.omega, a) - at(&s.p_omega, a - 1) * at(&s.omega, a - 1)
        }));
    }
    for a in 1..n {
        out.push(FormMonitor::new(format!("rho_{},{}_candidate", a, a + 1), move |s: &OpState| {
            rho_super_candidate(s, a)
        }));
    }
    for i in 0..n {
        for j in 0..n {
            out.push(FormMonitor::new(format!("B_{},{}", i + 1, j + 1), move |s: &OpState| {
                velocity_generator(s, ZVelocity::LeftInvariant)[(i, j)]
            }));
        }
    }
    Ok(out)
}

/// `C_1, C_2, C_3` of the two-body lift in the relative coordinate
/// `q = q_1 − q_2`, `z = ω_1`, `V = g²e^{2q}` (so `g²/2V = e^{−2q}/2`).
///
/// Also `rho_1,2_candidate` and `C2_from_B`, half the `(1,2)` entry of `ẋx⁻¹`.
pub fn monitors_n2(n: usize) -> Result<Vec<FormMonitor>> {
    if n != 2 {
        return domain(format!("two-body monitors need n = 2, got {n}"));
    }
    let parts = |s: &OpState| {
        let (q_dot, wd) = velocities(s);
        let q = s.q[0] - s.q[1];
        (q_dot[0] - q_dot[1], s.omega[0], wd[0], 0.5 * (-2.0 * q).exp())
    };
    Ok(vec![
        FormMonitor::new("C1", move |s: &OpState| {
            let (_, _, zd, k) = parts(s);
            k * zd
        }),
        FormMonitor::new("C2", move |s: &OpState| {
            let (qd, z, zd, k) = parts(s);
            -z * qd + (0.5 - k * z * z) * zd
        }),
        FormMonitor::new("C3", move |s: &OpState| {
            let (qd, z, zd, k) = parts(s);
            0.5 * qd + k * z * zd
        }),
        FormMonitor::new("rho_1,2_candidate", move |s: &OpState| rho_super_candidate(s, 1)),
        FormMonitor::new("C2_from_B", move |s: &OpState| {
            0.5 * velocity_generator(s, ZVelocity::LeftInvariant)[(0, 1)]
        }),
    ])
}

/// The two-body forms `ρ¹, ρ², ρ³` at `(q, z)` as covectors on `(dq, dz)`, and
/// the bilinear forms built from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct N2Forms {
    pub rho: [[f64; 2]; 3],
    /// `4ρ³⊗ρ³ + 4ρ¹⊗ρ²`, unsymmetrised.
    pub plain: [[f64; 2]; 2],
    /// Same with `ρ¹⊗ρ²` replaced by its symmetric part.
    pub symmetrized: [[f64; 2]; 2],
    /// `dq² + e^{−2q} dz²`.
    pub target: [[f64; 2]; 2],
}

impl N2Forms {
    pub fn plain_residual(&self) -> f64 {
        max_diff(&self.plain, &self.target)
    }

    pub fn symmetrized_residual(&self) -> f64 {
        max_diff(&self.symmetrized, &self.target)
    }

    /// Quadratic form of `plain` on a tangent vector; the antisymmetric part drops out.
    pub fn line_element(&self, dq: f64, dz: f64) -> f64 {
        let v = [dq, dz];
        (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| self.plain[i][j] * v[i] * v[j]).sum()
    }
}

fn max_diff(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

pub fn n2_form_metric(q: f64, z: f64) -> N2Forms {
    let k = 0.5 * (-2.0 * q).exp();
    let r1 = [0.0, k];
    let r2 = [-z, 0.5 - k * z * z];
    let r3 = [0.5, k * z];
    let mut plain = [[0.0; 2]; 2];
    let mut symmetrized = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let base = 4.0 * r3[i] * r3[j];
            plain[i][j] = base + 4.0 * r1[i] * r2[j];
            symmetrized[i][j] = base + 2.0 * (r1[i] * r2[j] + r2[i] * r1[j]);
        }
    }
    N2Forms {
        rho: [r1, r2, r3],
        plain,
        symmetrized,
        target: [[1.0, 0.0], [0.0, 2.0 * k]],
    }
}

/// Best conserved combination `α q̇_a + g_aω_a + β g_{a−1}ω_{a−1}` for one `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaFit {
    pub a: usize,
    /// Coefficient of `q̇_a`.
    pub qdot: f64,
    /// Coefficient of `g_{a−1}ω_{a−1}`; zero for `a = 1`.
    pub previous: f64,
    /// Relative drift of the fitted combination.
    pub drift: f64,
    /// Drift of the velocity candidate, `q̇_1 + g_1ω_1` or `2q̇_a + g_aω_a − g_{a−1}ω_{a−1}`.
    pub candidate_drift: f64,
}

/// Least-squares fit of the conserved normalisation along a generalised trajectory.
pub fn lambda_candidates(traj: &Trajectory) -> Result<Vec<LambdaFit>> {
    let Formulation::Generalized { n } = traj.formulation else {
        return domain("lambda fit needs a generalised-lift trajectory");
    };
    if traj.len() < 3 {
        return domain("lambda fit needs at least three samples");
    }
    let states = traj.states.iter().map(|y| OpState::from_slice(y)).collect::<Result<Vec<_>>>()?;
    let mut fits = Vec::new();
    for a in 1..n {
        // x = q̇_a, u = g_aω_a, v = g_{a−1}ω_{a−1}; minimise Σ(α Δx + Δu + β Δv)².
        let col = |f: &dyn Fn(&OpState) -> f64| -> Vec<f64> {
            let raw: Vec<f64> = states.iter().map(f).collect();
            raw.iter().map(|v| v - raw[0]).collect()
        };
        let x = col(&|s| s.p_q[a - 1]);
        let u = col(&|s| at(&s.p_omega, a) * at(&s.omega, a));
        let v = col(&|s| at(&s.p_omega, a - 1) * at(&s.omega, a - 1));
        let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| a * b).sum::<f64>();
        let (alpha, beta) = if a == 1 {
            (-dot(&x, &u) / dot(&x, &x), 0.0)
        } else {
            let (sxx, sxv, svv) = (dot(&x, &x), dot(&x, &v), dot(&v, &v));
            let (rx, rv) = (-dot(&x, &u), -dot(&v, &u));
            let det = sxx * svv - sxv * sxv;
            ((rx * svv - rv * sxv) / det, (sxx * rv - sxv * rx) / det)
        };
        let fitted: Vec<f64> = states
            .iter()
            .map(|s| alpha * s.p_q[a - 1] + at(&s.p_omega, a) * at(&s.omega, a) + beta * at(&s.p_omega, a - 1) * at(&s.omega, a - 1))
            .collect();
        let lead = if a == 1 { 1.0 } else { 2.0 };
        let candidate: Vec<f64> = states
            .iter()
            .map(|s| lead * s.p_q[a - 1] + at(&s.p_omega, a) * at(&s.omega, a) - at(&s.p_omega, a - 1) * at(&s.omega, a - 1))
            .collect();
        fits.push(LambdaFit {
            a,
            qdot: alpha,
            previous: beta,
            drift: crate::trajectory::relative_drift(&fitted),
            candidate_drift: crate::trajectory::relative_drift(&candidate),
        });
    }
    Ok(fits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::{uniform_times, IntegratorConfig};
    use crate::oplift::geodesic;

    fn find<'a>(ms: &'a [FormMonitor], name: &str) -> &'a FormMonitor {
        ms.iter().find(|m| m.name == name).unwrap()
    }

    #[test]
    fn cbar_is_twice_p_omega() {
        let s = OpState::new(vec![0.4, -0.1, -0.3], vec![0.2, 1.5], vec![0.1, 0.0, -0.1], vec![0.8, 1.7]).unwrap();
        let ms = monitors_general(3).unwrap();
        assert_eq!(find(&ms, "cbar_2,1").value(&s), 2.0 * 0.8);
        assert!((find(&ms, "cbar_3,2").value(&s) - 2.0 * 1.7).abs() < 1e-15);
        for a in 1..=3 {
            let lam = find(&ms, &format!("lambda_{a}")).value(&s);
            assert!((find(&ms, &format!("rho_{a}")).value(&s) - 2.0 * lam).abs() < 1e-14);
            let b = find(&ms, &format!("B_{a},{a}")).value(&s);
            assert!((b - 2.0 * lam).abs() < 1e-12);
        }
    }

    #[test]
    fn monitors_conserved_along_geodesic() {
        let s = OpState::new(vec![0.3, -0.1, -0.2], vec![0.5, -0.7], vec![0.2, 0.1, -0.3], vec![1.1, 0.6]).unwrap();
        let traj = geodesic(&s, &uniform_times(5.0, 50), &IntegratorConfig::default()).unwrap();
        for m in monitors_general(3).unwrap() {
            let d = m.series(&traj).unwrap().drift;
            let upper_b = m.name.starts_with("B_") && {
                let ij: Vec<usize> = m.name[2..].split(',').map(|v| v.parse().unwrap()).collect();
                ij[1] > ij[0]
            };
            if m.name.starts_with("lambda_velocity") || m.name.ends_with("candidate") || upper_b {
                continue;
            }
            assert!(d < 1e-8, "{} drift {d}", m.name);
        }
        let fits = lambda_candidates(&traj).unwrap();
        assert!((fits[0].qdot - 1.0).abs() < 1e-6);
        assert!((fits[1].qdot - 1.0).abs() < 1e-6 && (fits[1].previous + 1.0).abs() < 1e-6);
        assert!(fits[1].candidate_drift > 1e-4);
    }

    #[test]
    fn two_body_constants() {
        assert!(monitors_n2(3).is_err());
        let s = OpState::new(vec![0.2, -0.2], vec![0.7], vec![0.3, -0.3], vec![1.3]).unwrap();
        let ms = monitors_n2(2).unwrap();
        assert!((find(&ms, "C1").value(&s) - 1.3).abs() < 1e-14);
        assert!((find(&ms, "C2").value(&s) - find(&ms, "C2_from_B").value(&s)).abs() < 1e-12);
        let traj = geodesic(&s, &uniform_times(5.0, 50), &IntegratorConfig::default()).unwrap();
        for name in ["C1", "C2", "C3"] {
            assert!(find(&ms, name).series(&traj).unwrap().drift < 1e-8, "{name}");
        }
    }

    #[test]
    fn n2_metric_combination() {
        let f = n2_form_metric(0.3, -1.2);
        assert!(f.symmetrized_residual() < 1e-15);
        assert!(f.plain_residual() > 1e-3);
        let (dq, dz) = (0.7, -0.4);
        let want = dq * dq + (-0.6f64).exp() * dz * dz;
        assert!((f.line_element(dq, dz) - want).abs() < 1e-14);
        // z = y/(2g) turns e^{−2q}dz² into dy²/(4V).
        let (g, dy) = (1.7, 0.9);
        let v = g * g * (0.6f64).exp();
        assert!((f.target[1][1] * (dy / (2.0 * g)).powi(2) - dy * dy / (4.0 * v)).abs() < 1e-15);
    }
}
