//! Standard Eisenhart lift: one extra coordinate `y` with metric
//! `Σ dq_i² + dy²/(2V(q))`, and the corresponding free Hamiltonian
//! `𝓗 = Σ p_i²/2 + p_y² V(q)`.
//!
//! Geodesics are integrated in Hamiltonian form; the metric itself is only
//! needed for Killing-tensor checks.

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_len, domain, Error, Result};
use crate::integrate::{integrate_at, IntegratorConfig};
use crate::linalg::SquareMatrix;
use crate::toda::{grad_potential_with, kinetic, lax_pair_with, potential_with, trace_invariants, PhaseState, TodaSystem};
use crate::trajectory::{Formulation, Trajectory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EisenhartState {
    pub q: Vec<f64>,
    pub y: f64,
    pub p: Vec<f64>,
    pub p_y: f64,
}

impl EisenhartState {
    pub fn new(q: Vec<f64>, y: f64, p: Vec<f64>, p_y: f64) -> Result<Self> {
        check_len("p", p.len(), q.len())?;
        check_finite("q", &q)?;
        check_finite("p", &p)?;
        check_finite("y, p_y", &[y, p_y])?;
        Ok(Self { q, y, p, p_y })
    }

    /// Lifts a chain state with the given `y` and `p_y`.
    pub fn lift(s: &PhaseState, y: f64, p_y: f64) -> Self {
        Self {
            q: s.q.clone(),
            y,
            p: s.p.clone(),
            p_y,
        }
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    /// Layout `[q, y, p, p_y]`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.q.clone();
        v.push(self.y);
        v.extend_from_slice(&self.p);
        v.push(self.p_y);
        v
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        if v.len() < 4 || !v.len().is_multiple_of(2) {
            return domain(format!("Eisenhart phase vector has invalid length {}", v.len()));
        }
        let n = v.len() / 2 - 1;
        Self::new(v[..n].to_vec(), v[n], v[n + 1..2 * n + 1].to_vec(), v[2 * n + 1])
    }

    /// Configuration coordinates `(q_1, …, q_n, y)`.
    pub fn position(&self) -> Vec<f64> {
        let mut x = self.q.clone();
        x.push(self.y);
        x
    }

    /// Momenta `(p_1, …, p_n, p_y)`.
    pub fn momentum(&self) -> Vec<f64> {
        let mut x = self.p.clone();
        x.push(self.p_y);
        x
    }
}

/// Per-coupling momenta `p̃_i` of the generalised Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedMomenta {
    pub ptilde: Vec<f64>,
}

fn check_state(sys: &TodaSystem, s: &EisenhartState) -> Result<()> {
    check_len("q", s.q.len(), sys.n())?;
    check_len("p", s.p.len(), sys.n())
}

/// `diag(1, …, 1, 1/(2V(q)))` on `(q_1, …, q_n, y)`.
pub fn metric_eisenhart(sys: &TodaSystem, q: &[f64]) -> Result<SquareMatrix> {
    let v = sys.potential(q)?;
    if !(v > 0.0) {
        return Err(Error::DegenerateMetric(v));
    }
    let mut diag = vec![1.0; sys.n() + 1];
    diag[sys.n()] = 1.0 / (2.0 * v);
    Ok(SquareMatrix::from_diagonal(&diag))
}

/// `diag(1, …, 1, 2V(q))`.
pub fn inverse_metric_eisenhart(sys: &TodaSystem, q: &[f64]) -> Result<SquareMatrix> {
    let v = sys.potential(q)?;
    if !(v > 0.0) {
        return Err(Error::DegenerateMetric(v));
    }
    let mut diag = vec![1.0; sys.n() + 1];
    diag[sys.n()] = 2.0 * v;
    Ok(SquareMatrix::from_diagonal(&diag))
}

pub fn hamiltonian_eisenhart(sys: &TodaSystem, s: &EisenhartState) -> Result<f64> {
    check_state(sys, s)?;
    Ok(kinetic(&s.p) + s.p_y * s.p_y * potential_with(sys.couplings(), &s.q))
}

/// Time derivative of every component under the flow of 𝓗.
pub fn geodesic_rhs(sys: &TodaSystem, s: &EisenhartState) -> Result<EisenhartState> {
    check_state(sys, s)?;
    let mut dy = vec![0.0; 2 * sys.n() + 2];
    vector_field(sys)(0.0, &s.to_vec(), &mut dy);
    EisenhartState::from_slice(&dy)
}

/// Vector field on `[q, y, p, p_y]`.
pub fn vector_field(sys: &TodaSystem) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
    let n = sys.n();
    move |_, x, dx| {
        let q = &x[..n];
        let p = &x[n + 1..2 * n + 1];
        let p_y = x[2 * n + 1];
        let g = sys.couplings();
        dx[..n].copy_from_slice(p);
        dx[n] = 2.0 * p_y * potential_with(g, q);
        let grad = grad_potential_with(g, q);
        for i in 0..n {
            dx[n + 1 + i] = -p_y * p_y * grad[i];
        }
        dx[2 * n + 1] = 0.0;
    }
}

/// Lifted Lax pair: every coupling `g_i` becomes `p_y g_i`.
pub fn lifted_lax(sys: &TodaSystem, s: &EisenhartState) -> Result<(SquareMatrix, SquareMatrix)> {
    check_state(sys, s)?;
    let c: Vec<f64> = sys.couplings().iter().map(|g| s.p_y * g).collect();
    Ok(lax_pair_with(&c, &s.q, &s.p))
}

/// `𝓘_k = Tr(𝓛^k)/k`, homogeneous of degree `k` in `(p, p_y)`.
pub fn lifted_invariants(sys: &TodaSystem, s: &EisenhartState, kmax: usize) -> Result<Vec<f64>> {
    if !(1..=sys.n()).contains(&kmax) {
        return domain(format!("kmax = {kmax} outside 1..={}", sys.n()));
    }
    let (l, _) = lifted_lax(sys, s)?;
    Ok(trace_invariants(&l, kmax))
}

/// `Σ p²/2 + Σ p̃_i² g_i² e^{2(q_i − q_{i+1})}`.
pub fn hamiltonian_generalized_couplings(sys: &TodaSystem, s: &PhaseState, pt: &GeneralizedMomenta) -> Result<f64> {
    sys.check_state(s)?;
    check_len("ptilde", pt.ptilde.len(), sys.n() - 1)?;
    let c: Vec<f64> = pt.ptilde.iter().zip(sys.couplings()).map(|(a, g)| a * g).collect();
    Ok(kinetic(&s.p) + potential_with(&c, &s.q))
}

/// Drops `(y, p_y)`.
pub fn project_to_toda(s: &EisenhartState) -> PhaseState {
    PhaseState {
        q: s.q.clone(),
        p: s.p.clone(),
    }
}

pub fn formulation(sys: &TodaSystem) -> Formulation {
    Formulation::Eisenhart { n: sys.n() }
}

/// Integrates the lifted geodesic, sampling at `times`.
pub fn geodesic(sys: &TodaSystem, s: &EisenhartState, times: &[f64], cfg: &IntegratorConfig) -> Result<Trajectory> {
    check_state(sys, s)?;
    let f = vector_field(sys);
    Ok(integrate_at(&f, &s.to_vec(), times, cfg, &[])?.with_formulation(formulation(sys)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys3() -> TodaSystem {
        TodaSystem::new(vec![0.9, 1.4]).unwrap()
    }

    fn estate(p_y: f64) -> EisenhartState {
        EisenhartState::new(vec![0.3, -0.2, 0.1], 0.4, vec![0.5, -0.7, 0.2], p_y).unwrap()
    }

    #[test]
    fn metric_examples() {
        let sys = TodaSystem::new(vec![1.0]).unwrap();
        let g = metric_eisenhart(&sys, &[0.0, 0.0]).unwrap();
        assert_eq!(g, SquareMatrix::from_diagonal(&[1.0, 1.0, 0.5]));
        let free = TodaSystem::new(vec![0.0]).unwrap();
        assert!(matches!(metric_eisenhart(&free, &[0.0, 0.0]), Err(Error::DegenerateMetric(_))));
        let q = [0.7, -0.4, 0.1];
        let g = metric_eisenhart(&sys3(), &q).unwrap();
        let ginv = inverse_metric_eisenhart(&sys3(), &q).unwrap();
        assert!((&g * &ginv).max_abs_diff(&SquareMatrix::identity(4)) < 1e-15);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g[(i, j)], if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn hamiltonian_reduces_and_rescales() {
        let sys = sys3();
        let s = estate(1.0);
        let base = project_to_toda(&s);
        assert!((hamiltonian_eisenhart(&sys, &s).unwrap() - sys.hamiltonian(&base).unwrap()).abs() < 1e-15);
        let free = hamiltonian_eisenhart(&sys, &estate(0.0)).unwrap();
        assert!((free - kinetic(&base.p)).abs() < 1e-15);
        let doubled = sys.rescaled(2.0).hamiltonian(&base).unwrap();
        assert!((hamiltonian_eisenhart(&sys, &estate(2.0)).unwrap() - doubled).abs() < 1e-14);
        // ½ pᵀ g⁻¹ p
        let ginv = inverse_metric_eisenhart(&sys, &s.q).unwrap();
        let p = estate(1.7).momentum();
        let quad: f64 = 0.5 * p.iter().zip(ginv.mul_vec(&p)).map(|(a, b)| a * b).sum::<f64>();
        assert!((quad - hamiltonian_eisenhart(&sys, &estate(1.7)).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn rhs_matches_chain_at_unit_py() {
        let sys = sys3();
        let s = estate(1.0);
        let d = geodesic_rhs(&sys, &s).unwrap();
        assert_eq!(d.p_y, 0.0);
        let (dq, dp) = sys.eom_rhs(&project_to_toda(&s)).unwrap();
        assert_eq!(d.q, dq);
        assert_eq!(d.p, dp);
        let v = sys.potential(&s.q).unwrap();
        assert!((d.y - 2.0 * v).abs() < 1e-15);
        assert_eq!(geodesic_rhs(&sys, &estate(-0.6)).unwrap().p_y, 0.0);
    }

    #[test]
    fn lifted_lax_reduces_and_is_homogeneous() {
        let sys = sys3();
        let s = estate(1.0);
        assert_eq!(lifted_lax(&sys, &s).unwrap(), sys.lax_pair(&project_to_toda(&s)).unwrap());
        let s = estate(0.8);
        let i = lifted_invariants(&sys, &s, 3).unwrap();
        assert!((i[1] - hamiltonian_eisenhart(&sys, &s).unwrap()).abs() < 1e-14);
        for lam in [2.0, 3.0, 0.5] {
            let mut t = s.clone();
            t.p.iter_mut().for_each(|p| *p *= lam);
            t.p_y *= lam;
            let j = lifted_invariants(&sys, &t, 3).unwrap();
            for k in 0..3 {
                let want = lam.powi(k as i32 + 1) * i[k];
                assert!((j[k] - want).abs() <= 1e-13 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn generalized_couplings_hamiltonian() {
        let sys = sys3();
        let s = PhaseState::new(vec![0.1, 0.5, -0.2], vec![0.3, 0.2, -0.4]).unwrap();
        let ones = GeneralizedMomenta { ptilde: vec![1.0, 1.0] };
        assert!((hamiltonian_generalized_couplings(&sys, &s, &ones).unwrap() - sys.hamiltonian(&s).unwrap()).abs() < 1e-15);
        let c = GeneralizedMomenta { ptilde: vec![1.7, 1.7] };
        let want = sys.rescaled(1.7).hamiltonian(&s).unwrap();
        assert!((hamiltonian_generalized_couplings(&sys, &s, &c).unwrap() - want).abs() < 1e-14);
        assert!(hamiltonian_generalized_couplings(&sys, &s, &GeneralizedMomenta { ptilde: vec![1.0] }).is_err());
    }

    #[test]
    fn projection_round_trip() {
        let base = PhaseState::new(vec![0.1, -0.1], vec![0.3, -0.3]).unwrap();
        assert_eq!(project_to_toda(&EisenhartState::lift(&base, 0.0, 1.0)), base);
        let e = EisenhartState::lift(&base, 0.25, 1.5);
        assert_eq!(EisenhartState::from_slice(&e.to_vec()).unwrap(), e);
    }
}
