//! The non-periodic Toda chain
//!
//! `H = Σ p_i²/2 + Σ_{i<n} g_i² e^{2(q_i − q_{i+1})}`
//!
//! Equations of motion are Hamilton's equations of `H`. Note the interior
//! momentum equation carries a factor 2 on both neighbour terms:
//! `ṗ_i = −2g_i² e^{2(q_i−q_{i+1})} + 2g_{i−1}² e^{2(q_{i−1}−q_i)}`.
//! Conserved traces are normalised as `I_k = Tr(L^k)/k`, which gives
//! `I_1 = Σ p_i` and `I_2 = H`.

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_len, domain, Result};
use crate::integrate::{integrate_at, IntegratorConfig};
use crate::linalg::SquareMatrix;
use crate::trajectory::{Formulation, Trajectory};

/// Particle count and couplings of a Toda chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TodaSystem {
    n: usize,
    g: Vec<f64>,
}

impl TodaSystem {
    pub fn new(g: Vec<f64>) -> Result<Self> {
        if g.is_empty() {
            return domain("a Toda chain needs at least two particles (one coupling)");
        }
        check_finite("couplings", &g)?;
        Ok(Self { n: g.len() + 1, g })
    }

    /// Chain of `n` particles with every coupling equal to `g`.
    pub fn uniform(n: usize, g: f64) -> Result<Self> {
        if n < 2 {
            return domain("a Toda chain needs at least two particles");
        }
        Self::new(vec![g; n - 1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn couplings(&self) -> &[f64] {
        &self.g
    }

    /// Same chain with every coupling multiplied by `c`.
    pub fn rescaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            g: self.g.iter().map(|g| g * c).collect(),
        }
    }

    pub fn check_state(&self, s: &PhaseState) -> Result<()> {
        check_len("q", s.q.len(), self.n)?;
        check_len("p", s.p.len(), self.n)?;
        check_finite("q", &s.q)?;
        check_finite("p", &s.p)
    }

    pub fn potential(&self, q: &[f64]) -> Result<f64> {
        check_len("q", q.len(), self.n)?;
        Ok(potential_with(&self.g, q))
    }

    pub fn hamiltonian(&self, s: &PhaseState) -> Result<f64> {
        self.check_state(s)?;
        Ok(kinetic(&s.p) + potential_with(&self.g, &s.q))
    }

    /// `(dq/dt, dp/dt)` from Hamilton's equations.
    pub fn eom_rhs(&self, s: &PhaseState) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_state(s)?;
        let dp = grad_potential_with(&self.g, &s.q).into_iter().map(|v| -v).collect();
        Ok((s.p.clone(), dp))
    }

    /// Lax pair `(L, M)` with `L̇ = [L, M]` along the flow.
    pub fn lax_pair(&self, s: &PhaseState) -> Result<(SquareMatrix, SquareMatrix)> {
        self.check_state(s)?;
        Ok(lax_pair_with(&self.g, &s.q, &s.p))
    }

    /// `I_k = Tr(L^k)/k` for `k = 1..=kmax`.
    pub fn invariants(&self, s: &PhaseState, kmax: usize) -> Result<Vec<f64>> {
        if !(1..=self.n).contains(&kmax) {
            return domain(format!("kmax = {kmax} outside 1..={}", self.n));
        }
        let (l, _) = self.lax_pair(s)?;
        Ok(trace_invariants(&l, kmax))
    }

    /// Vector field on `[q, p]` for the integrator.
    pub fn vector_field(&self) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
        let n = self.n;
        move |_, y, dy| {
            let (q, p) = y.split_at(n);
            dy[..n].copy_from_slice(p);
            let grad = grad_potential_with(&self.g, q);
            for i in 0..n {
                dy[n + i] = -grad[i];
            }
        }
    }

    pub fn formulation(&self) -> Formulation {
        Formulation::Toda { n: self.n }
    }

    /// Integrates the chain, sampling at the given times.
    pub fn trajectory(&self, s: &PhaseState, times: &[f64], cfg: &IntegratorConfig) -> Result<Trajectory> {
        self.check_state(s)?;
        let f = self.vector_field();
        Ok(integrate_at(&f, &s.to_vec(), times, cfg, &[])?.with_formulation(self.formulation()))
    }

    /// Evolution matrix `A(t)` with `dA/dt = −M A`, `A(0) = I`, at each sample of `traj`.
    ///
    /// Each segment between samples is integrated from the stored chain state
    /// together with `A`, so the result follows the trajectory as recorded.
    pub fn evolve_a(&self, traj: &Trajectory, cfg: &IntegratorConfig) -> Result<Vec<SquareMatrix>> {
        if traj.is_empty() {
            return domain("trajectory is empty");
        }
        if traj.formulation != self.formulation() {
            return domain("trajectory does not belong to this chain");
        }
        let n = self.n;
        let field = |_: f64, y: &[f64], dy: &mut [f64]| {
            let (q, rest) = y.split_at(n);
            let (p, a) = rest.split_at(n);
            dy[..n].copy_from_slice(p);
            let grad = grad_potential_with(&self.g, q);
            for i in 0..n {
                dy[n + i] = -grad[i];
            }
            // M has only the superdiagonal m_i = 2 g_i e^{2(q_i − q_{i+1})}.
            let da = &mut dy[2 * n..];
            for i in 0..n {
                for j in 0..n {
                    let m = if i + 1 < n {
                        2.0 * self.g[i] * (2.0 * (q[i] - q[i + 1])).exp() * a[(i + 1) * n + j]
                    } else {
                        0.0
                    };
                    da[i * n + j] = -m;
                }
            }
        };
        let mut a = SquareMatrix::identity(n);
        let mut out = vec![a.clone()];
        for w in 0..traj.len() - 1 {
            let (t0, t1) = (traj.times[w], traj.times[w + 1]);
            let mut y0 = traj.states[w].clone();
            y0.extend_from_slice(a.as_slice());
            let shifted = |t: f64, y: &[f64], dy: &mut [f64]| field(t + t0, y, dy);
            let seg = integrate_at(&shifted, &y0, &[t1 - t0], cfg, &[])?;
            let y1 = &seg.states[0];
            a = SquareMatrix::from_rows(&y1[2 * n..].chunks(n).map(<[f64]>::to_vec).collect::<Vec<_>>())?;
            out.push(a.clone());
        }
        Ok(out)
    }

    /// Separates the centre of mass: returns the centred state, `Q = Σ q_i`, `P = Σ p_i`.
    pub fn com_split(&self, s: &PhaseState) -> Result<(PhaseState, f64, f64)> {
        self.check_state(s)?;
        Ok(com_split(s))
    }

    /// Reduced two-body Hamiltonian `½ q̇² + 2 g_1² e^{2q}` in the relative
    /// coordinate `q = q_1 − q_2` with `q̇ = p_1 − p_2`. Equals twice the
    /// energy left after removing the centre-of-mass kinetic term.
    pub fn reduced_n2_hamiltonian(&self, s: &PhaseState) -> Result<f64> {
        if self.n != 2 {
            return domain("reduced Hamiltonian is defined for n = 2 only");
        }
        self.check_state(s)?;
        let q = s.q[0] - s.q[1];
        let qdot = s.p[0] - s.p[1];
        let g = self.g[0];
        Ok(0.5 * qdot * qdot + 2.0 * g * g * (2.0 * q).exp())
    }
}

/// Positions and momenta of `n` particles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhaseState {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        check_len("p", p.len(), q.len())?;
        check_finite("q", &q)?;
        check_finite("p", &p)?;
        Ok(Self { q, p })
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.q.clone();
        v.extend_from_slice(&self.p);
        v
    }

    /// Splits `[q, p]`.
    pub fn from_slice(y: &[f64]) -> Result<Self> {
        if !y.len().is_multiple_of(2) || y.is_empty() {
            return domain(format!("phase vector of odd or zero length {}", y.len()));
        }
        let (q, p) = y.split_at(y.len() / 2);
        Self::new(q.to_vec(), p.to_vec())
    }
}

pub(crate) fn com_split(s: &PhaseState) -> (PhaseState, f64, f64) {
    let n = s.q.len() as f64;
    let big_q: f64 = s.q.iter().sum();
    let big_p: f64 = s.p.iter().sum();
    let q = s.q.iter().map(|x| x - big_q / n).collect();
    let p = s.p.iter().map(|x| x - big_p / n).collect();
    (PhaseState { q, p }, big_q, big_p)
}

pub(crate) fn kinetic(p: &[f64]) -> f64 {
    0.5 * p.iter().map(|x| x * x).sum::<f64>()
}

/// `e^{2(q_i − q_{i+1})}` for `i = 1..n−1`.
pub(crate) fn bond_factors(q: &[f64]) -> Vec<f64> {
    q.windows(2).map(|w| (2.0 * (w[0] - w[1])).exp()).collect()
}

/// `Σ c_i² e^{2(q_i − q_{i+1})}` for arbitrary couplings `c`.
pub(crate) fn potential_with(c: &[f64], q: &[f64]) -> f64 {
    c.iter().zip(bond_factors(q)).map(|(c, e)| c * c * e).sum()
}

/// `∂/∂q_i` of [`potential_with`].
pub(crate) fn grad_potential_with(c: &[f64], q: &[f64]) -> Vec<f64> {
    let mut grad = vec![0.0; q.len()];
    for (i, e) in bond_factors(q).into_iter().enumerate() {
        let f = 2.0 * c[i] * c[i] * e;
        grad[i] += f;
        grad[i + 1] -= f;
    }
    grad
}

/// Lax pair with couplings `c`: subdiagonal `c_i`, superdiagonal `c_i e^{2Δ_i}`,
/// `M` superdiagonal `2c_i e^{2Δ_i}`.
pub(crate) fn lax_pair_with(c: &[f64], q: &[f64], p: &[f64]) -> (SquareMatrix, SquareMatrix) {
    let n = q.len();
    let mut l = SquareMatrix::from_diagonal(p);
    let mut m = SquareMatrix::zeros(n);
    for (i, e) in bond_factors(q).into_iter().enumerate() {
        l[(i + 1, i)] = c[i];
        l[(i, i + 1)] = c[i] * e;
        m[(i, i + 1)] = 2.0 * c[i] * e;
    }
    (l, m)
}

/// `Tr(L^k)/k` for `k = 1..=kmax`.
pub fn trace_invariants(l: &SquareMatrix, kmax: usize) -> Vec<f64> {
    let mut pow = l.clone();
    let mut out = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        if k > 1 {
            pow = &pow * l;
        }
        out.push(pow.trace() / k as f64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(q: &[f64], p: &[f64]) -> PhaseState {
        PhaseState::new(q.to_vec(), p.to_vec()).unwrap()
    }

    #[test]
    fn hamiltonian_examples() {
        let sys = TodaSystem::new(vec![1.0]).unwrap();
        assert_eq!(sys.hamiltonian(&state(&[0.0, 0.0], &[0.0, 0.0])).unwrap(), 1.0);
        let h = sys.hamiltonian(&state(&[0.5, 0.0], &[1.0, 1.0])).unwrap();
        assert!((h - (1.0 + std::f64::consts::E)).abs() < 1e-15);
        let free = TodaSystem::new(vec![0.0, 0.0]).unwrap();
        assert_eq!(free.hamiltonian(&state(&[3.0, -1.0, 0.2], &[1.0, 2.0, 3.0])).unwrap(), 7.0);
        assert!(sys.hamiltonian(&state(&[0.0; 3], &[0.0; 3])).is_err());
    }

    #[test]
    fn eom_examples() {
        let sys = TodaSystem::new(vec![1.0]).unwrap();
        let (dq, dp) = sys.eom_rhs(&state(&[0.0, 0.0], &[0.0, 0.0])).unwrap();
        assert_eq!(dq, vec![0.0, 0.0]);
        assert_eq!(dp, vec![-2.0, 2.0]);
        let free = TodaSystem::new(vec![0.0, 0.0]).unwrap();
        let (dq, dp) = free.eom_rhs(&state(&[0.1, 0.5, -0.3], &[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(dq, vec![1.0, 2.0, 3.0]);
        assert_eq!(dp, vec![0.0; 3]);
    }

    #[test]
    fn lax_pair_two_body() {
        let g = 0.7;
        let sys = TodaSystem::new(vec![g]).unwrap();
        let s = state(&[0.2, -0.1], &[0.4, -0.3]);
        let (l, m) = sys.lax_pair(&s).unwrap();
        let e = (2.0f64 * 0.3).exp();
        let want_l = SquareMatrix::from_rows(&[vec![0.4, g * e], vec![g, -0.3]]).unwrap();
        let want_m = SquareMatrix::from_rows(&[vec![0.0, 2.0 * g * e], vec![0.0, 0.0]]).unwrap();
        assert!(l.max_abs_diff(&want_l) < 1e-15);
        assert!(m.max_abs_diff(&want_m) < 1e-15);
        assert_eq!(m.trace(), 0.0);
        let free = TodaSystem::new(vec![0.0]).unwrap();
        let (l, m) = free.lax_pair(&s).unwrap();
        assert_eq!(l, SquareMatrix::from_diagonal(&[0.4, -0.3]));
        assert_eq!(m, SquareMatrix::zeros(2));
    }

    #[test]
    fn invariants_examples() {
        let free = TodaSystem::new(vec![0.0]).unwrap();
        let i = free.invariants(&state(&[0.0, 0.0], &[1.0, 2.0]), 2).unwrap();
        assert_eq!(i, vec![3.0, 2.5]);
        let sys = TodaSystem::new(vec![0.8, 1.3]).unwrap();
        let s = state(&[0.1, -0.4, 0.3], &[0.5, -0.2, 0.9]);
        let i = sys.invariants(&s, 3).unwrap();
        assert!((i[0] - 1.2).abs() < 1e-15);
        assert!((i[1] - sys.hamiltonian(&s).unwrap()).abs() < 1e-14);
        assert!(sys.invariants(&s, 4).is_err());
        assert!(sys.invariants(&s, 0).is_err());
    }

    #[test]
    fn com_split_examples() {
        let sys = TodaSystem::new(vec![1.0]).unwrap();
        let (c, big_q, big_p) = sys.com_split(&state(&[1.0, 1.0], &[2.0, 2.0])).unwrap();
        assert_eq!(c.q, vec![0.0, 0.0]);
        assert_eq!(c.p, vec![0.0, 0.0]);
        assert_eq!((big_q, big_p), (2.0, 4.0));
    }

    #[test]
    fn reduced_hamiltonian_is_twice_relative_energy() {
        let sys = TodaSystem::new(vec![1.3]).unwrap();
        let s = state(&[0.4, -0.1], &[0.7, 0.2]);
        let big_p: f64 = s.p.iter().sum();
        let rel = sys.hamiltonian(&s).unwrap() - big_p * big_p / 4.0;
        assert!((sys.reduced_n2_hamiltonian(&s).unwrap() - 2.0 * rel).abs() < 1e-14);
        let three = TodaSystem::new(vec![1.0, 1.0]).unwrap();
        assert!(three.reduced_n2_hamiltonian(&state(&[0.0; 3], &[0.0; 3])).is_err());
    }

    #[test]
    fn evolve_a_starts_at_identity() {
        let sys = TodaSystem::new(vec![1.0, 0.5]).unwrap();
        let s = state(&[0.1, 0.0, -0.1], &[0.2, -0.1, -0.1]);
        let cfg = IntegratorConfig::default();
        let tr = sys.trajectory(&s, &[0.0, 0.5, 1.0], &cfg).unwrap();
        let a = sys.evolve_a(&tr, &cfg).unwrap();
        assert_eq!(a[0], SquareMatrix::identity(3));
        assert!(a.iter().all(|m| (m.determinant() - 1.0).abs() < 1e-12));
        let empty = Trajectory::new(sys.formulation());
        assert!(sys.evolve_a(&empty, &cfg).is_err());
    }
}
