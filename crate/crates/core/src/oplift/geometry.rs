use serde::{Deserialize, Serialize};

use super::{OpState, CENTERING_TOLERANCE};
use crate::error::{check_finite, check_len, domain, Error, Result};
use crate::linalg::{
    additive_compound, mat_exp, mat_exp_tracked, subsets, udu_decompose, unitriangular_inverse, upper, SquareMatrix,
    UduFactors, SYMMETRY_TOLERANCE,
};
use crate::toda::bond_factors;

/// Tolerance on `det x = 1` and on the trace condition of geodesic seeds.
pub const UNIT_DET_TOLERANCE: f64 = 1e-10;

/// A point of `SO(n)\SL(n,R)`: symmetric, positive definite, unit determinant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XPoint {
    x: SquareMatrix,
}

impl XPoint {
    pub fn new(x: SquareMatrix) -> Result<Self> {
        x.check_finite()?;
        let f = udu_decompose(&x)?;
        let det: f64 = f.hsq.iter().product();
        if (det - 1.0).abs() > UNIT_DET_TOLERANCE {
            return Err(Error::Constraint(format!("det x = {det}, expected 1")));
        }
        Ok(Self { x })
    }

    pub(crate) fn from_unchecked(x: SquareMatrix) -> Self {
        Self { x }
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.x
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }
}

/// `Z = exp(Σ ω_a M_{a,a+1})` in closed form: `Z_ab = ω_a⋯ω_{b−1}/(b−a)!` for `a < b`.
pub fn z_from_omega(omega: &[f64], n: usize) -> Result<SquareMatrix> {
    if n < 2 {
        return domain("n must be at least 2");
    }
    check_len("omega", omega.len(), n - 1)?;
    check_finite("omega", omega)?;
    let mut z = SquareMatrix::identity(n);
    for a in 0..n {
        let mut prod = 1.0;
        let mut fact = 1.0;
        for b in (a + 1)..n {
            prod *= omega[b - 1];
            fact *= (b - a) as f64;
            z[(a, b)] = prod / fact;
        }
    }
    Ok(z)
}

fn chain_generator(omega: &[f64]) -> SquareMatrix {
    let n = omega.len() + 1;
    let mut m = SquareMatrix::zeros(n);
    for (a, w) in omega.iter().enumerate() {
        m[(a, a + 1)] = *w;
    }
    m
}

/// Exact time derivative of `exp(Σ ω_a M_{a,a+1})` along `ω̇`.
pub fn z_chain_derivative(omega: &[f64], omega_dot: &[f64]) -> Result<SquareMatrix> {
    check_len("omega_dot", omega_dot.len(), omega.len())?;
    let n = omega.len() + 1;
    let gen = chain_generator(omega);
    let dgen = chain_generator(omega_dot);
    // d/dt Σ N^k/k! = Σ_k (1/k!) Σ_j N^j Ṅ N^{k−1−j}; N is nilpotent of order n.
    let powers: Vec<SquareMatrix> = (0..n).map(|k| gen.powi(k)).collect();
    let mut out = SquareMatrix::zeros(n);
    let mut fact = 1.0;
    for k in 1..n {
        fact *= k as f64;
        for j in 0..k {
            let term = &(&powers[j] * &dgen) * &powers[k - 1 - j];
            out = &out + &term.scale(1.0 / fact);
        }
    }
    Ok(out)
}

/// `x = Z h² Zᵀ` with `h² = diag(e^{2q})`. Requires `Σ q = 0`.
pub fn build_x(q: &[f64], omega: &[f64]) -> Result<XPoint> {
    check_finite("q", q)?;
    let total: f64 = q.iter().sum();
    if total.abs() > CENTERING_TOLERANCE {
        return Err(Error::Constraint(format!("sum of q is {total:e}, expected 0")));
    }
    let n = q.len();
    let z = z_from_omega(omega, n)?;
    let factors = UduFactors {
        z,
        hsq: q.iter().map(|v| (2.0 * v).exp()).collect(),
    };
    Ok(XPoint::from_unchecked(factors.compose().symmetrize()))
}

/// Result of reading `(q, ω)` back from a point by UDU decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub q: Vec<f64>,
    /// Superdiagonal of `Z`.
    pub omega: Vec<f64>,
    pub z: SquareMatrix,
    /// Largest deviation of `Z` above the superdiagonal from the chain closed form
    /// built from `omega`. Diagnostic only.
    pub chain_deviation: f64,
}

pub fn project_x(x: &XPoint) -> Result<Projection> {
    let f = udu_decompose(x.matrix())?;
    let n = x.dim();
    let q: Vec<f64> = f.hsq.iter().map(|h| 0.5 * h.ln()).collect();
    let omega: Vec<f64> = (0..n - 1).map(|a| f.z[(a, a + 1)]).collect();
    let chain = z_from_omega(&omega, n)?;
    let mut dev: f64 = 0.0;
    for a in 0..n {
        for b in (a + 2)..n {
            dev = dev.max((f.z[(a, b)] - chain[(a, b)]).abs());
        }
    }
    Ok(Projection {
        q,
        omega,
        z: f.z,
        chain_deviation: dev,
    })
}

/// How `Ż` is built from the chain velocities `N = Σ ω̇_a M_{a,a+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZVelocity {
    /// `Z⁻¹ Ż = N`
    LeftInvariant,
    /// `Ż Z⁻¹ = N`
    RightInvariant,
    /// `Ż = d/dt exp(Σ ω_a M_{a,a+1})`
    ChainDerivative,
}

/// `ẋ = Ż h² Zᵀ + Z (dh²/dt) Zᵀ + Z h² Żᵀ` with `q̇ = p_q`,
/// `ω̇_a = 2 p_{ω_a} e^{2(q_a − q_{a+1})}` and `Z⁻¹Ż = Σ ω̇_a M_{a,a+1}`.
///
/// With this orientation `ẋ x⁻¹ = 2 Z L Z⁻¹`, `L` being the Lax matrix with
/// couplings `p_ω`, and the geodesic through `(x, ẋ)` projects onto the chain.
pub fn initial_xdot(s: &OpState) -> Result<SquareMatrix> {
    initial_xdot_with(s, ZVelocity::LeftInvariant)
}

pub fn initial_xdot_with(s: &OpState, orientation: ZVelocity) -> Result<SquareMatrix> {
    s.require_centered()?;
    let total_p: f64 = s.p_q.iter().sum();
    let scale = s.p_q.iter().map(|p| p.abs()).sum::<f64>().max(1.0);
    if total_p.abs() > CENTERING_TOLERANCE * scale {
        return Err(Error::Constraint(format!(
            "total momentum is {total_p:e}; split off the centre of mass first"
        )));
    }
    Ok(xdot_unchecked(s, orientation))
}

pub(crate) fn xdot_unchecked(s: &OpState, orientation: ZVelocity) -> SquareMatrix {
    let n = s.n();
    let omega_dot: Vec<f64> = s
        .p_omega
        .iter()
        .zip(bond_factors(&s.q))
        .map(|(p, e)| 2.0 * p * e)
        .collect();
    let z = z_from_omega(&s.omega, n).expect("state dimensions checked");
    let gen = chain_generator(&omega_dot);
    let z_dot = match orientation {
        ZVelocity::LeftInvariant => &z * &gen,
        ZVelocity::RightInvariant => &gen * &z,
        ZVelocity::ChainDerivative => z_chain_derivative(&s.omega, &omega_dot).expect("state dimensions checked"),
    };
    let hsq: Vec<f64> = s.q.iter().map(|v| (2.0 * v).exp()).collect();
    let hsq_dot: Vec<f64> = hsq.iter().zip(&s.p_q).map(|(h, p)| 2.0 * p * h).collect();
    let zt = z.transpose();
    let h = SquareMatrix::from_diagonal(&hsq);
    let hd = SquareMatrix::from_diagonal(&hsq_dot);
    let t1 = &(&z_dot * &h) * &zt;
    let t2 = &(&z * &hd) * &zt;
    let t3 = &(&z * &h) * &z_dot.transpose();
    &(&t1 + &t2) + &t3
}

/// `ẋ x⁻¹` at a state, without the centring checks. Its entries are constant
/// along auto-parallel curves.
///
/// Evaluated as `Z (K + 2Q̇ + h² Kᵀ h⁻²) Z⁻¹` with `K = Z⁻¹Ż`, which avoids
/// forming `x` and `x⁻¹` and the cancellation that comes with them.
pub(crate) fn velocity_generator(s: &OpState, orientation: ZVelocity) -> SquareMatrix {
    let n = s.n();
    let (q_dot, omega_dot) = super::velocities(s);
    let z = z_from_omega(&s.omega, n).expect("state dimensions checked");
    let zinv = unitriangular_inverse(&z).expect("unitriangular");
    let gen = chain_generator(&omega_dot);
    let k = match orientation {
        ZVelocity::LeftInvariant => gen,
        ZVelocity::RightInvariant => &(&zinv * &gen) * &z,
        ZVelocity::ChainDerivative => &zinv * &z_chain_derivative(&s.omega, &omega_dot).expect("state dimensions checked"),
    };
    let inner = SquareMatrix::from_fn(n, |i, j| {
        let diag = if i == j { 2.0 * q_dot[i] } else { 0.0 };
        k[(i, j)] + diag + (2.0 * (s.q[i] - s.q[j])).exp() * k[(j, i)]
    });
    &(&z * &inner) * &zinv
}

/// One point of an exact geodesic.
#[derive(Debug, Clone)]
pub struct GeodesicSample {
    /// `x(t)` symmetrised and divided by `det^{1/n}`.
    pub x: XPoint,
    /// Determinant before renormalisation.
    pub raw_det: f64,
}

/// Auto-parallel curve `x(t) = exp(B t) x₀` with constant `B = ẋ₀ x₀⁻¹`.
///
/// Positions are read off the UDU diagonal of `x(t)` through its trailing
/// principal minors. Writing `x₀ = C Cᵀ` with `C = Z₀ h₀` upper triangular,
/// `x(t) = C exp(tS) Cᵀ` where `S = C⁻¹ ẋ₀ C⁻ᵀ` is symmetric, so the trailing
/// `k×k` minor of `x(t)` is `det(C_T)² · [exp(t S⁽ᵏ⁾)]_{T,T}` with `S⁽ᵏ⁾` the
/// additive compound. That entry is a positive, dominant quantity and keeps
/// full relative accuracy when the pivots of `x(t)` span many orders of
/// magnitude, which a direct factorisation of `x(t)` does not.
#[derive(Debug, Clone)]
pub struct ExactGeodesic {
    x0: SquareMatrix,
    b: SquareMatrix,
    hsq0: Vec<f64>,
    /// Additive compounds of `S` for `k = 1..n`.
    compounds: Vec<SquareMatrix>,
    trace_s: f64,
}

impl ExactGeodesic {
    pub fn new(x0: &XPoint, xdot0: &SquareMatrix) -> Result<Self> {
        let n = x0.dim();
        if xdot0.dim() != n {
            return domain("velocity and point differ in dimension");
        }
        xdot0.check_finite()?;
        if xdot0.max_asymmetry() > SYMMETRY_TOLERANCE * xdot0.max_abs().max(1.0) {
            return domain("initial velocity is not symmetric");
        }
        let f = udu_decompose(x0.matrix())?;
        let zinv = unitriangular_inverse(&f.z)?;
        let dinv = SquareMatrix::from_diagonal(&f.hsq.iter().map(|h| 1.0 / h).collect::<Vec<_>>());
        let x0_inv = &(&zinv.transpose() * &dinv) * &zinv;
        let b = xdot0 * &x0_inv;
        if b.trace().abs() > UNIT_DET_TOLERANCE * b.max_abs().max(1.0) {
            return Err(Error::Constraint(format!(
                "Tr(ẋ x⁻¹) = {:e}; geodesic would leave det x = 1",
                b.trace()
            )));
        }
        let hinv = SquareMatrix::from_diagonal(&f.hsq.iter().map(|h| 1.0 / h.sqrt()).collect::<Vec<_>>());
        let cinv = &hinv * &zinv;
        let s = (&(&cinv * xdot0) * &cinv.transpose()).symmetrize();
        let compounds = (1..n).map(|k| additive_compound(&s, k).0).collect();
        Ok(Self {
            x0: x0.matrix().clone(),
            b,
            hsq0: f.hsq,
            compounds,
            trace_s: s.trace(),
        })
    }

    /// `B = ẋ₀ x₀⁻¹`.
    pub fn generator(&self) -> &SquareMatrix {
        &self.b
    }

    /// `exp(Bt) x₀` and its determinant, before any renormalisation.
    pub fn raw(&self, t: f64) -> Result<(SquareMatrix, f64)> {
        let e = mat_exp_tracked(&self.b.scale(t))?;
        let det0: f64 = self.hsq0.iter().product();
        Ok((&e.value * &self.x0, e.det * det0))
    }

    pub fn sample(&self, t: f64) -> Result<GeodesicSample> {
        let (x, raw_det) = self.raw(t)?;
        let n = self.x0.dim();
        let x = x.symmetrize().scale(raw_det.powf(-1.0 / n as f64));
        Ok(GeodesicSample {
            x: XPoint::from_unchecked(x),
            raw_det,
        })
    }

    /// `q_a(t) = ½ ln(h²_a)` from the UDU diagonal of `x(t)`.
    pub fn positions(&self, t: f64) -> Result<Vec<f64>> {
        let n = self.x0.dim();
        // trailing[k] = log of the trailing k×k principal minor, k = 0..=n.
        let mut log_trailing = vec![0.0; n + 1];
        for k in 1..=n {
            let log_c: f64 = self.hsq0[n - k..].iter().map(|h| h.ln()).sum();
            let log_e = if k == n {
                t * self.trace_s
            } else {
                let e = mat_exp(&self.compounds[k - 1].scale(t))?;
                let last = e.dim() - 1;
                let v = e[(last, last)];
                if !(v > 0.0) {
                    return Err(Error::Definiteness { index: n - k + 1, pivot: v });
                }
                v.ln()
            };
            log_trailing[k] = log_c + log_e;
        }
        Ok((0..n)
            .map(|a| 0.5 * (log_trailing[n - a] - log_trailing[n - a - 1]))
            .collect())
    }
}

impl ExactGeodesic {
    /// Chain coordinates and momenta of `x(t)`, read from the same compound
    /// quantities as [`ExactGeodesic::positions`].
    ///
    /// With `C = Z₀h₀`, Cauchy–Binet gives
    /// `Z_{a,a+1}(t) = Z₀_{a,a+1} + (h₀_a/h₀_{a+1}) E_{R,K}/E_{K,K}` where
    /// `E = exp(tS⁽ᵏ⁾)`, `k = n − a`, `K = {a+1..n}` and `R = {a} ∪ {a+2..n}`.
    /// `p_q = q̇` follows from `Ė = S⁽ᵏ⁾E`. Along the curve `ẋx⁻¹ = B`, whose
    /// subdiagonal is `2p_ω`; reading `p_ω` there avoids dividing the vanishing
    /// `ω̇` by `e^{2Δ}` at large separation.
    pub fn chain_state(&self, t: f64) -> Result<OpState> {
        let n = self.x0.dim();
        let z0 = udu_decompose(&self.x0)?.z;
        let h0: Vec<f64> = self.hsq0.iter().map(|h| h.sqrt()).collect();
        // rate[k] = d/dt log of the trailing k×k minor; rho[k] = E_{R,K}/E_{K,K}.
        let mut rate = vec![0.0; n + 1];
        let mut rho = vec![0.0; n];
        rate[n] = self.trace_s;
        for k in 1..n {
            let sk = &self.compounds[k - 1];
            let e = mat_exp(&sk.scale(t))?;
            let last = e.dim() - 1;
            let col: Vec<f64> = (0..=last).map(|i| e[(i, last)]).collect();
            let dcol = sk.mul_vec(&col);
            let ekk = col[last];
            if !(ekk > 0.0) {
                return Err(Error::Definiteness { index: n - k + 1, pivot: ekk });
            }
            rate[k] = dcol[last] / ekk;
            let a = n - 1 - k;
            let r_set: Vec<usize> = std::iter::once(a).chain(a + 2..n).collect();
            let r = subsets(n, k).iter().position(|s| *s == r_set).expect("subset present");
            rho[k] = col[r] / ekk;
        }
        let q = self.positions(t)?;
        let p_q: Vec<f64> = (0..n).map(|a| 0.5 * (rate[n - a] - rate[n - a - 1])).collect();
        let omega = (0..n - 1).map(|a| z0[(a, a + 1)] + h0[a] / h0[a + 1] * rho[n - 1 - a]).collect();
        let p_omega = (0..n - 1).map(|a| 0.5 * self.b[(a + 1, a)]).collect();
        OpState::uncentered(q, omega, p_q, p_omega)
    }
}

/// `exp(Bt) x₀` with `B = ẋ₀ x₀⁻¹`, renormalised to unit determinant.
pub fn exact_geodesic(x0: &XPoint, xdot0: &SquareMatrix, t: f64) -> Result<XPoint> {
    Ok(ExactGeodesic::new(x0, xdot0)?.sample(t)?.x)
}

#[allow(dead_code)]
fn chain_basis_sum(omega: &[f64]) -> Result<SquareMatrix> {
    let n = omega.len() + 1;
    let mut m = SquareMatrix::zeros(n);
    for (a, w) in omega.iter().enumerate() {
        m = &m + &upper(a + 1, a + 2, n)?.scale(*w);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_state_tracks_hamiltonian_flow() {
        use crate::integrate::IntegratorConfig;
        use crate::oplift::geodesic;
        for (q, omega, p, pw) in [
            (vec![0.3, -0.3], vec![0.4], vec![0.2, -0.2], vec![1.1]),
            (vec![0.2, -0.1, -0.1], vec![0.4, -0.3], vec![0.1, 0.3, -0.4], vec![0.9, 1.3]),
        ] {
            let n = q.len();
            let s = OpState::new(q, omega, p, pw).unwrap();
            let geo = ExactGeodesic::new(&build_x(&s.q, &s.omega).unwrap(), &initial_xdot(&s).unwrap()).unwrap();
            let times = [0.0, 0.5, 1.5, 10.0, 20.0];
            let traj = geodesic(&s, &times, &IntegratorConfig::default()).unwrap();
            for (t, y) in times.iter().zip(&traj.states) {
                let want = OpState::from_slice(y).unwrap();
                let got = geo.chain_state(*t).unwrap();
                for (a, b) in got.q.iter().chain(&got.p_q).zip(want.q.iter().chain(&want.p_q)) {
                    assert!((a - b).abs() < 1e-8, "n={n} t={t}");
                }
                for (a, b) in got.omega.iter().zip(&want.omega) {
                    assert!((a - b).abs() < 1e-8 * b.abs().max(1.0), "n={n} t={t} omega {a} vs {b}");
                }
                for (a, b) in got.p_omega.iter().zip(&want.p_omega) {
                    assert!((a - b).abs() < 1e-8, "n={n} t={t} p_omega {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn z_examples() {
        assert_eq!(z_from_omega(&[0.0, 0.0], 3).unwrap(), SquareMatrix::identity(3));
        let z = z_from_omega(&[1.0, 2.0], 3).unwrap();
        assert_eq!((z[(0, 1)], z[(1, 2)], z[(0, 2)]), (1.0, 2.0, 1.0));
        assert!(z_from_omega(&[1.0], 3).is_err());
    }

    #[test]
    fn z_matches_exponential() {
        let omega = [0.3, -1.2, 0.8, 2.1, -0.4];
        let z = z_from_omega(&omega, 6).unwrap();
        let e = mat_exp(&chain_basis_sum(&omega).unwrap()).unwrap();
        assert!(z.max_abs_diff(&e) < 1e-13);
    }

    #[test]
    fn inverse_alternates_sign() {
        let z = z_from_omega(&[1.0, 2.0], 3).unwrap();
        let inv = unitriangular_inverse(&z).unwrap();
        for a in 0..3 {
            for b in a..3 {
                let sign = if (b - a) % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(inv[(a, b)], sign * z[(a, b)]);
            }
        }
    }

    #[test]
    fn build_x_two_by_two() {
        let (q, zz) = (0.35f64, -0.6f64);
        let x = build_x(&[q, -q], &[zz]).unwrap();
        let m = x.matrix();
        let em = (-2.0 * q).exp();
        assert!((m[(0, 0)] - ((2.0 * q).exp() + zz * zz * em)).abs() < 1e-15);
        assert!((m[(0, 1)] - zz * em).abs() < 1e-15);
        assert!((m[(1, 1)] - em).abs() < 1e-15);
        assert_eq!(build_x(&[0.0; 3], &[0.0; 2]).unwrap().matrix(), &SquareMatrix::identity(3));
        assert!(matches!(build_x(&[0.1, 0.0], &[0.0]), Err(Error::Constraint(_))));
        assert!(XPoint::new(m.clone()).is_ok());
        assert!(XPoint::new(m.scale(2.0)).is_err());
    }

    #[test]
    fn chain_derivative_matches_finite_difference() {
        let omega = [0.4, -0.9, 1.3];
        let dot = [0.7, 0.2, -0.5];
        let h = 1e-6;
        let plus: Vec<f64> = omega.iter().zip(&dot).map(|(w, d)| w + h * d).collect();
        let minus: Vec<f64> = omega.iter().zip(&dot).map(|(w, d)| w - h * d).collect();
        let fd = (&z_from_omega(&plus, 4).unwrap() - &z_from_omega(&minus, 4).unwrap()).scale(0.5 / h);
        let exact = z_chain_derivative(&omega, &dot).unwrap();
        assert!(fd.max_abs_diff(&exact) < 1e-8);
    }

    #[test]
    fn xdot_zero_and_symmetric() {
        let s = OpState::new(vec![0.0; 3], vec![0.5, 0.2], vec![0.0; 3], vec![0.0; 2]).unwrap();
        assert_eq!(initial_xdot(&s).unwrap(), SquareMatrix::zeros(3));
        let s = OpState::new(vec![0.3, -0.1, -0.2], vec![0.5, -0.7], vec![0.2, 0.1, -0.3], vec![1.1, 0.6]).unwrap();
        for o in [ZVelocity::LeftInvariant, ZVelocity::RightInvariant, ZVelocity::ChainDerivative] {
            let xd = initial_xdot_with(&s, o).unwrap();
            assert!(xd.max_asymmetry() < 1e-13);
        }
        let moving = OpState::new(vec![0.0; 2], vec![0.0], vec![0.5, 0.0], vec![1.0]).unwrap();
        assert!(matches!(initial_xdot(&moving), Err(Error::Constraint(_))));
    }

    #[test]
    fn exact_geodesic_trivial_cases() {
        let x0 = build_x(&[0.2, -0.2], &[0.4]).unwrap();
        let zero = SquareMatrix::zeros(2);
        for t in [0.0, 1.0, 5.0] {
            assert!(exact_geodesic(&x0, &zero, t).unwrap().matrix().max_abs_diff(x0.matrix()) < 1e-15);
        }
        let s = OpState::new(vec![0.2, -0.2], vec![0.4], vec![0.3, -0.3], vec![1.0]).unwrap();
        let xd = initial_xdot(&s).unwrap();
        assert!(exact_geodesic(&x0, &xd, 0.0).unwrap().matrix().max_abs_diff(x0.matrix()) < 1e-15);
        let bad = SquareMatrix::identity(2);
        assert!(matches!(ExactGeodesic::new(&x0, &bad), Err(Error::Constraint(_))));
    }

    #[test]
    fn two_body_closed_form() {
        let s = OpState::new(vec![0.0, 0.0], vec![0.0], vec![0.0, 0.0], vec![1.0]).unwrap();
        let x0 = build_x(&s.q, &s.omega).unwrap();
        let geo = ExactGeodesic::new(&x0, &initial_xdot(&s).unwrap()).unwrap();
        for t in [0.5, 1.0, 3.0, 10.0] {
            let q = geo.positions(t).unwrap();
            let want = -(2.0 * t).cosh().ln();
            assert!((q[0] - q[1] - want).abs() < 1e-12 * want.abs().max(1.0), "t = {t}");
        }
        let p = project_x(&geo.sample(1.0).unwrap().x).unwrap();
        assert!((p.q[0] - p.q[1] + 2.0f64.cosh().ln()).abs() < 1e-12);
    }
}
