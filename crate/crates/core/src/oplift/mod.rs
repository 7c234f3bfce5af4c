//! Symmetric-space lift of the Toda chain on `SO(n)\SL(n,R)`.
//!
//! Points are `x = Z h² Zᵀ` with `h² = diag(e^{2q_a})` and the chain
//! parameterisation `Z = exp(Σ ω_a M_{a,a+1})`. On this submanifold the free
//! Hamiltonian is
//!
//! `𝓗 = Σ p_{q_a}²/2 + Σ p_{ω_a}² e^{2(q_a − q_{a+1})}`,
//!
//! a multi-particle Eisenhart lift in which each coupling `g_a` becomes the
//! conserved momentum `p_{ω_a}`.

mod adjoint;
mod dynamics;
mod forms;
mod geometry;
mod reduction;

pub use adjoint::{
    adjoint_expansion, f_coefficient_candidate, g_coefficient_candidate, lambda_coefficient_candidate, AdjointExpansion,
    FVariant, Generator,
};
pub use dynamics::{
    formulation, generalized_hamiltonian, geodesic, geodesic_rhs_generalized, inverse_metric_generalized,
    metric_generalized, vector_field, velocities,
};
pub use forms::{
    lambda_candidates, monitors_general, monitors_n2, n2_form_metric, FormMonitor, LambdaFit, N2Forms,
};
pub use geometry::{
    build_x, exact_geodesic, initial_xdot, initial_xdot_with, project_x, z_chain_derivative, z_from_omega,
    ExactGeodesic, GeodesicSample, Projection, XPoint, ZVelocity, UNIT_DET_TOLERANCE,
};
pub use reduction::{reduced_eisenhart_state, reduction_check, ReductionReport};

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_len, domain, Error, Result};
use crate::toda::PhaseState;

/// Tolerance on `Σ q_a = 0`.
pub const CENTERING_TOLERANCE: f64 = 1e-10;

/// Phase-space point of the generalised lift.
///
/// `omega[a-1]` is `ω_a ≡ ω_{a,a+1}`; the conventions `ω_0 = ω_n = 0` are
/// applied by the functions that need them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpState {
    pub q: Vec<f64>,
    pub omega: Vec<f64>,
    pub p_q: Vec<f64>,
    pub p_omega: Vec<f64>,
}

impl OpState {
    /// Builds a state in the centred frame (`Σ q = 0`).
    pub fn new(q: Vec<f64>, omega: Vec<f64>, p_q: Vec<f64>, p_omega: Vec<f64>) -> Result<Self> {
        let s = Self::uncentered(q, omega, p_q, p_omega)?;
        s.require_centered()?;
        Ok(s)
    }

    /// Builds a state without the centring constraint, e.g. after an isometry
    /// that shifts a single `q_a`.
    pub fn uncentered(q: Vec<f64>, omega: Vec<f64>, p_q: Vec<f64>, p_omega: Vec<f64>) -> Result<Self> {
        let n = q.len();
        if n < 2 {
            return domain("the lift needs at least two particles");
        }
        check_len("omega", omega.len(), n - 1)?;
        check_len("p_q", p_q.len(), n)?;
        check_len("p_omega", p_omega.len(), n - 1)?;
        for (name, v) in [("q", &q), ("omega", &omega), ("p_q", &p_q), ("p_omega", &p_omega)] {
            check_finite(name, v)?;
        }
        Ok(Self { q, omega, p_q, p_omega })
    }

    /// Lifts a centred chain state.
    pub fn from_toda(s: &PhaseState, omega: Vec<f64>, p_omega: Vec<f64>) -> Result<Self> {
        Self::new(s.q.clone(), omega, s.p.clone(), p_omega)
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn is_centered(&self) -> bool {
        self.q.iter().sum::<f64>().abs() <= CENTERING_TOLERANCE
    }

    pub fn require_centered(&self) -> Result<()> {
        let total: f64 = self.q.iter().sum();
        if total.abs() > CENTERING_TOLERANCE {
            return Err(Error::Constraint(format!("sum of q is {total:e}, expected 0")));
        }
        Ok(())
    }

    /// Layout `[q, ω, p_q, p_ω]`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * (2 * self.n() - 1));
        v.extend_from_slice(&self.q);
        v.extend_from_slice(&self.omega);
        v.extend_from_slice(&self.p_q);
        v.extend_from_slice(&self.p_omega);
        v
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        // len = 2(2n − 1)
        if v.len() < 6 || v.len() % 4 != 2 {
            return domain(format!("generalised phase vector has invalid length {}", v.len()));
        }
        let n = (v.len() / 2).div_ceil(2);
        let (q, rest) = v.split_at(n);
        let (omega, rest) = rest.split_at(n - 1);
        let (p_q, p_omega) = rest.split_at(n);
        Self::uncentered(q.to_vec(), omega.to_vec(), p_q.to_vec(), p_omega.to_vec())
    }

    /// Configuration coordinates `(q, ω)`.
    pub fn position(&self) -> Vec<f64> {
        let mut x = self.q.clone();
        x.extend_from_slice(&self.omega);
        x
    }

    /// Momenta `(p_q, p_ω)`.
    pub fn momentum(&self) -> Vec<f64> {
        let mut x = self.p_q.clone();
        x.extend_from_slice(&self.p_omega);
        x
    }

    pub fn toda_part(&self) -> PhaseState {
        PhaseState {
            q: self.q.clone(),
            p: self.p_q.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_round_trip() {
        let s = OpState::new(vec![0.2, -0.5, 0.3], vec![1.0, -2.0], vec![0.1, 0.2, -0.3], vec![0.7, 0.9]).unwrap();
        assert_eq!(OpState::from_slice(&s.to_vec()).unwrap(), s);
        assert!(OpState::from_slice(&[0.0; 7]).is_err());
    }

    #[test]
    fn centring_is_enforced() {
        let err = OpState::new(vec![0.2, 0.1], vec![0.0], vec![0.0, 0.0], vec![1.0]).unwrap_err();
        assert!(matches!(err, Error::Constraint(_)));
        let s = OpState::uncentered(vec![0.2, 0.1], vec![0.0], vec![0.0, 0.0], vec![1.0]).unwrap();
        assert!(!s.is_centered());
        assert!(OpState::new(vec![0.0, 0.0], vec![0.0, 0.0], vec![0.0, 0.0], vec![1.0]).is_err());
    }
}
