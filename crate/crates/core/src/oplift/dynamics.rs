use super::OpState;
use crate::error::{check_finite, Result};
use crate::integrate::{integrate_at, IntegratorConfig};
use crate::linalg::SquareMatrix;
use crate::toda::{bond_factors, grad_potential_with, kinetic, potential_with};
use crate::trajectory::{Formulation, Trajectory};

/// `Σ p_q²/2 + Σ p_ω² e^{2(q_a − q_{a+1})}`. The couplings are the momenta `p_ω`.
pub fn generalized_hamiltonian(s: &OpState) -> f64 {
    kinetic(&s.p_q) + potential_with(&s.p_omega, &s.q)
}

/// `Σ dq² + ½ Σ e^{−2(q_a − q_{a+1})} dω²` on `(q, ω)`.
pub fn metric_generalized(q: &[f64]) -> Result<SquareMatrix> {
    check_finite("q", q)?;
    let n = q.len();
    let mut diag = vec![1.0; 2 * n - 1];
    for (a, e) in bond_factors(q).into_iter().enumerate() {
        diag[n + a] = 0.5 / e;
    }
    Ok(SquareMatrix::from_diagonal(&diag))
}

pub fn inverse_metric_generalized(q: &[f64]) -> Result<SquareMatrix> {
    check_finite("q", q)?;
    let n = q.len();
    let mut diag = vec![1.0; 2 * n - 1];
    for (a, e) in bond_factors(q).into_iter().enumerate() {
        diag[n + a] = 2.0 * e;
    }
    Ok(SquareMatrix::from_diagonal(&diag))
}

/// `(q̇, ω̇)` implied by the momenta.
pub fn velocities(s: &OpState) -> (Vec<f64>, Vec<f64>) {
    let omega_dot = s
        .p_omega
        .iter()
        .zip(bond_factors(&s.q))
        .map(|(p, e)| 2.0 * p * e)
        .collect();
    (s.p_q.clone(), omega_dot)
}

/// Canonical flow of the generalised Hamiltonian, in the state layout.
pub fn geodesic_rhs_generalized(s: &OpState) -> OpState {
    let (q_dot, omega_dot) = velocities(s);
    let grad = grad_potential_with(&s.p_omega, &s.q);
    OpState {
        q: q_dot,
        omega: omega_dot,
        p_q: grad.into_iter().map(|g| -g).collect(),
        p_omega: vec![0.0; s.n() - 1],
    }
}

/// Vector field on `[q, ω, p_q, p_ω]`.
pub fn vector_field(n: usize) -> impl Fn(f64, &[f64], &mut [f64]) {
    move |_, x, dx| {
        let q = &x[..n];
        let p_q = &x[2 * n - 1..3 * n - 1];
        let p_omega = &x[3 * n - 1..];
        dx[..n].copy_from_slice(p_q);
        for (a, e) in bond_factors(q).into_iter().enumerate() {
            dx[n + a] = 2.0 * p_omega[a] * e;
        }
        let grad = grad_potential_with(p_omega, q);
        for i in 0..n {
            dx[2 * n - 1 + i] = -grad[i];
        }
        dx[3 * n - 1..].iter_mut().for_each(|v| *v = 0.0);
    }
}

pub fn formulation(n: usize) -> Formulation {
    Formulation::Generalized { n }
}

/// Integrates the geodesic of the generalised lift, sampling at `times`.
pub fn geodesic(s: &OpState, times: &[f64], cfg: &IntegratorConfig) -> Result<Trajectory> {
    let n = s.n();
    let f = vector_field(n);
    Ok(integrate_at(&f, &s.to_vec(), times, cfg, &[])?.with_formulation(formulation(n)))
}
