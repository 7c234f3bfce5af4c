//! Killing tensors of the lifted metrics from the conserved traces of the Lax
//! matrix, and their verification.
//!
//! A phase point is `z = (x, p)` with `x` the `d` configuration coordinates and
//! `p` the conjugate momenta, which is the state layout of both lifts.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::eisenhart;
use crate::error::{check_finite, domain, Error, Result};
use crate::integrate::{integrate_at, uniform_times, IntegratorConfig};
use crate::linalg::{Lu, SquareMatrix};
use crate::oplift::{self, OpState};
use crate::sampling::{substream, uniform_vec};
use crate::toda::{kinetic, lax_pair_with, potential_with, trace_invariants, TodaSystem};
use crate::trajectory::relative_drift;

/// Gate on the polarisation solve.
pub const POLARIZATION_RESIDUAL: f64 = 1e-9;
/// Default finite-difference step for brackets.
pub const DEFAULT_STEP: f64 = 1e-5;
/// Largest supported rank.
pub const MAX_RANK: usize = 8;

type InvariantFn = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;

/// Which lift of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lift {
    /// `(q, y)` with metric `diag(1, …, 1, 1/2V)`.
    Eisenhart,
    /// `(q, ω)` with couplings carried by `p_ω`.
    Generalized,
}

impl Lift {
    pub fn dim(&self, n: usize) -> usize {
        match self {
            Lift::Eisenhart => n + 1,
            Lift::Generalized => 2 * n - 1,
        }
    }
}

impl std::fmt::Display for Lift {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Lift::Eisenhart => "eisenhart",
            Lift::Generalized => "generalized",
        })
    }
}

/// Couplings of the lifted Lax matrix at a phase point.
fn lifted_couplings(sys: &TodaSystem, lift: Lift, p: &[f64]) -> Vec<f64> {
    let n = sys.n();
    match lift {
        Lift::Eisenhart => sys.couplings().iter().map(|g| p[n] * g).collect(),
        Lift::Generalized => p[n..].to_vec(),
    }
}

/// Free Hamiltonian of the lift metric as a function of `(x, p)`.
pub fn lift_hamiltonian(sys: &TodaSystem, lift: Lift) -> impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + Clone {
    let sys = sys.clone();
    move |x, p| {
        let n = sys.n();
        let c = lifted_couplings(&sys, lift, p);
        kinetic(&p[..n]) + potential_with(&c, &x[..n])
    }
}

/// `𝓘_k = Tr(𝓛^k)/k` of the lifted Lax matrix, homogeneous of degree `k` in `p`.
pub fn lift_invariant(sys: &TodaSystem, lift: Lift, k: usize) -> Result<InvariantFn> {
    let n = sys.n();
    if !(1..=n).contains(&k) {
        return domain(format!("k = {k} outside 1..={n}"));
    }
    let sys = sys.clone();
    Ok(Arc::new(move |x: &[f64], p: &[f64]| {
        let c = lifted_couplings(&sys, lift, p);
        let (l, _) = lax_pair_with(&c, &x[..n], &p[..n]);
        trace_invariants(&l, k)[k - 1]
    }))
}

/// All exponent vectors `α` with `|α| = k` over `d` variables, lexicographic.
pub fn multi_exponents(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == d - 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e);
            rec(d, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, k, &mut Vec::with_capacity(d), &mut out);
    out
}

/// Sorted 1-based multi-index of an exponent vector, e.g. `(2,0,1) → [1,1,3]`.
fn index_of(alpha: &[usize]) -> Vec<usize> {
    alpha.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i + 1, e)).collect()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

fn monomial(p: &[f64], alpha: &[usize]) -> f64 {
    p.iter().zip(alpha).map(|(v, &e)| v.powi(e as i32)).product()
}

/// Components of a rank-`k` symmetric tensor at one position, keyed by sorted
/// 1-based multi-index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentTable {
    pub rank: usize,
    pub dim: usize,
    pub entries: BTreeMap<Vec<usize>, f64>,
}

impl ComponentTable {
    /// Component for any ordering of the indices.
    pub fn get(&self, index: &[usize]) -> Option<f64> {
        let mut key = index.to_vec();
        key.sort_unstable();
        self.entries.get(&key).copied()
    }

    /// `(1/k!) K^{μ…} p_μ…`, i.e. `Σ_α K_α p^α / α!`.
    pub fn contract(&self, p: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|(idx, v)| {
                let mut alpha = vec![0usize; self.dim];
                idx.iter().for_each(|&i| alpha[i - 1] += 1);
                let afact: f64 = alpha.iter().map(|&e| factorial(e)).product();
                v * monomial(p, &alpha) / afact
            })
            .sum()
    }
}

/// Reusable polarisation solve for fixed `(k, d)`.
///
/// Probes are the integer momenta `β` with `|β| = k`, the same lattice as the
/// exponents, which makes the evaluation matrix square and invertible.
pub struct Polarizer {
    rank: usize,
    dim: usize,
    exponents: Vec<Vec<usize>>,
    probes: Vec<Vec<f64>>,
    vandermonde: SquareMatrix,
    lu: Lu,
}

impl Polarizer {
    pub fn new(rank: usize, dim: usize) -> Result<Self> {
        if !(1..=MAX_RANK).contains(&rank) || dim == 0 {
            return domain(format!("rank {rank} / dimension {dim} not supported"));
        }
        let exponents = multi_exponents(dim, rank);
        let probes: Vec<Vec<f64>> = exponents.iter().map(|b| b.iter().map(|&e| e as f64).collect()).collect();
        let m = exponents.len();
        let vandermonde = SquareMatrix::from_fn(m, |i, j| monomial(&probes[i], &exponents[j]));
        let lu = Lu::new(&vandermonde)?;
        Ok(Self {
            rank,
            dim,
            exponents,
            probes,
            vandermonde,
            lu,
        })
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Monomial coefficients `c_α` of a polynomial given its probe values.
    pub fn coefficients(&self, values: &[f64]) -> Result<Vec<f64>> {
        let c = self.lu.solve(values);
        let back = self.vandermonde.mul_vec(&c);
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let residual = back.iter().zip(values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale;
        if !(residual <= POLARIZATION_RESIDUAL) {
            return Err(Error::Conditioning(residual));
        }
        Ok(c)
    }

    pub fn exponents(&self) -> &[Vec<usize>] {
        &self.exponents
    }

    /// Tensor components of `f(x, ·)` at `x`.
    pub fn extract(&self, f: &dyn Fn(&[f64], &[f64]) -> f64, x: &[f64]) -> Result<ComponentTable> {
        check_homogeneous(f, x, self.dim, self.rank)?;
        let values: Vec<f64> = self.probes.iter().map(|p| f(x, p)).collect();
        check_finite("probe values", &values)?;
        let c = self.coefficients(&values)?;
        let entries = self
            .exponents
            .iter()
            .zip(c)
            .map(|(alpha, c)| {
                let afact: f64 = alpha.iter().map(|&e| factorial(e)).product();
                (index_of(alpha), afact * c)
            })
            .collect();
        Ok(ComponentTable {
            rank: self.rank,
            dim: self.dim,
            entries,
        })
    }
}

fn check_homogeneous(f: &dyn Fn(&[f64], &[f64]) -> f64, x: &[f64], dim: usize, k: usize) -> Result<()> {
    let p: Vec<f64> = (0..dim).map(|i| 0.37 + 0.29 * i as f64 * if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let base = f(x, &p);
    for lambda in [2.0, 0.5, -1.5] {
        let scaled: Vec<f64> = p.iter().map(|v| v * lambda).collect();
        let want = lambda.powi(k as i32) * base;
        let got = f(x, &scaled);
        let mismatch = (got - want).abs() / want.abs().max(base.abs()).max(1e-300);
        if !(mismatch <= 1e-9) && (got - want).abs() > 1e-12 {
            return Err(Error::NotHomogeneous { degree: k, mismatch });
        }
    }
    Ok(())
}

/// Components of the rank-`k` tensor of a degree-`k` invariant at `x`.
pub fn extract_tensor(f: &dyn Fn(&[f64], &[f64]) -> f64, k: usize, x: &[f64]) -> Result<ComponentTable> {
    Polarizer::new(k, x.len())?.extract(f, x)
}

/// Rank-`k` symmetric tensor field defined by a homogeneous invariant.
#[derive(Clone)]
pub struct SymmetricTensorField {
    pub rank: usize,
    pub dim: usize,
    invariant: InvariantFn,
}

impl SymmetricTensorField {
    pub fn new(rank: usize, dim: usize, invariant: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            rank,
            dim,
            invariant: Arc::new(invariant),
        }
    }

    /// `K_(k)` of a lift, from `𝓘_k`.
    pub fn from_lift(sys: &TodaSystem, lift: Lift, k: usize) -> Result<Self> {
        Ok(Self {
            rank: k,
            dim: lift.dim(sys.n()),
            invariant: lift_invariant(sys, lift, k)?,
        })
    }

    pub fn invariant(&self, x: &[f64], p: &[f64]) -> f64 {
        (self.invariant)(x, p)
    }

    pub fn components_at(&self, x: &[f64]) -> Result<ComponentTable> {
        if x.len() != self.dim {
            return domain(format!("position has length {}, expected {}", x.len(), self.dim));
        }
        let f = |x: &[f64], p: &[f64]| (self.invariant)(x, p);
        extract_tensor(&f, self.rank, x)
    }
}

impl std::fmt::Debug for SymmetricTensorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymmetricTensorField").field("rank", &self.rank).field("dim", &self.dim).finish()
    }
}

/// `{F, G}` at `z = (x, p)` by central differences with step `h`.
pub fn poisson_bracket_fd(
    f: &dyn Fn(&[f64], &[f64]) -> f64,
    g: &dyn Fn(&[f64], &[f64]) -> f64,
    z: &[f64],
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) || !z.len().is_multiple_of(2) {
        return domain("bracket needs h > 0 and an even-length phase point");
    }
    check_finite("phase point", z)?;
    let d = z.len() / 2;
    let deriv = |fun: &dyn Fn(&[f64], &[f64]) -> f64, i: usize| -> Result<f64> {
        let mut zp = z.to_vec();
        let mut zm = z.to_vec();
        zp[i] += h;
        zm[i] -= h;
        let (a, b) = (fun(&zp[..d], &zp[d..]), fun(&zm[..d], &zm[d..]));
        if !a.is_finite() || !b.is_finite() {
            return domain("non-finite sample in bracket");
        }
        Ok((a - b) / (2.0 * h))
    };
    let mut total = 0.0;
    for mu in 0..d {
        total += deriv(f, mu)? * deriv(g, d + mu)? - deriv(f, d + mu)? * deriv(g, mu)?;
    }
    Ok(total)
}

/// Richardson combination of brackets at `h` and `h/2`, error `O(h⁴)`.
pub fn poisson_bracket_richardson(
    f: &dyn Fn(&[f64], &[f64]) -> f64,
    g: &dyn Fn(&[f64], &[f64]) -> f64,
    z: &[f64],
    h: f64,
) -> Result<f64> {
    let coarse = poisson_bracket_fd(f, g, z, h)?;
    let fine = poisson_bracket_fd(f, g, z, 0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Outcome of [`verify_killing`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KillingReport {
    pub lift: Lift,
    pub k: usize,
    pub bracket_max: f64,
    pub drift_max: f64,
    pub pass: bool,
}

pub const BRACKET_GATE: f64 = 1e-5;
pub const DRIFT_GATE: f64 = 1e-8;

fn random_phase_point(rng: &mut crate::sampling::SampleRng, d: usize) -> Vec<f64> {
    uniform_vec(rng, 2 * d, -1.0, 1.0)
}

/// Checks `{𝓘_k, 𝓗} = 0` at random phase points and conservation of `𝓘_k`
/// along 10 random geodesics on `t ∈ [0, 20]`.
pub fn verify_killing(
    sys: &TodaSystem,
    lift: Lift,
    k: usize,
    samples: usize,
    seed: u64,
    cfg: &IntegratorConfig,
) -> Result<KillingReport> {
    let inv = lift_invariant(sys, lift, k)?;
    let ham = lift_hamiltonian(sys, lift);
    let d = lift.dim(sys.n());
    let mut rng = substream(seed, k as u64);
    let mut bracket_max: f64 = 0.0;
    for _ in 0..samples {
        let z = random_phase_point(&mut rng, d);
        let (x, p) = z.split_at(d);
        let scale = (inv(x, p).abs() * ham(x, p).abs()).max(1.0);
        let mut b = poisson_bracket_fd(&*inv, &ham, &z, DEFAULT_STEP)?.abs() / scale;
        if (BRACKET_GATE..100.0 * BRACKET_GATE).contains(&b) {
            b = poisson_bracket_richardson(&*inv, &ham, &z, DEFAULT_STEP)?.abs() / scale;
        }
        bracket_max = bracket_max.max(b);
    }
    let times = uniform_times(20.0, 200);
    let mut drift_max: f64 = 0.0;
    for _ in 0..10 {
        let z = random_phase_point(&mut rng, d);
        let traj = match lift {
            Lift::Eisenhart => {
                let f = eisenhart::vector_field(sys);
                integrate_at(&f, &z, &times, cfg, &[])?
            }
            Lift::Generalized => {
                let f = oplift::vector_field(sys.n());
                integrate_at(&f, &z, &times, cfg, &[])?
            }
        };
        let values: Vec<f64> = traj.states.iter().map(|y| inv(&y[..d], &y[d..])).collect();
        drift_max = drift_max.max(relative_drift(&values));
    }
    Ok(KillingReport {
        lift,
        k,
        bracket_max,
        drift_max,
        pass: bracket_max < BRACKET_GATE && drift_max < DRIFT_GATE,
    })
}

/// Largest component-wise difference between `K_(2)` and the inverse lift
/// metric over random positions.
pub fn rank_two_metric_mismatch(sys: &TodaSystem, lift: Lift, samples: usize, seed: u64) -> Result<f64> {
    let field = SymmetricTensorField::from_lift(sys, lift, 2)?;
    let d = field.dim;
    let pol = Polarizer::new(2, d)?;
    let f = |x: &[f64], p: &[f64]| field.invariant(x, p);
    let mut rng = substream(seed, 1 << 32);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = uniform_vec(&mut rng, d, -1.0, 1.0);
        let table = pol.extract(&f, &x)?;
        let ginv = match lift {
            Lift::Eisenhart => eisenhart::inverse_metric_eisenhart(sys, &x[..sys.n()])?,
            Lift::Generalized => oplift::inverse_metric_generalized(&x[..sys.n()])?,
        };
        for i in 0..d {
            for j in i..d {
                let k = table.get(&[i + 1, j + 1]).unwrap_or(0.0);
                worst = worst.max((k - ginv[(i, j)]).abs());
            }
        }
    }
    Ok(worst)
}

/// Generators of the finite isometries of the generalised lift, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Isometry {
    /// `ω_a → ω_a + s`, `a < n`.
    OmegaTranslation { a: usize },
    /// `q_a → q_a + s` with the compensating rescalings of `ω` and `p_ω`.
    Lambda { a: usize },
}

/// Applies a finite isometry. Lambda flows shift `Σq`, so the result is not centred.
pub fn isometry_flow(generator: Isometry, s: &OpState, parameter: f64) -> Result<OpState> {
    let n = s.n();
    let mut out = s.clone();
    match generator {
        Isometry::OmegaTranslation { a } if (1..n).contains(&a) => out.omega[a - 1] += parameter,
        Isometry::Lambda { a } if (1..=n).contains(&a) => {
            let (up, down) = (parameter.exp(), (-parameter).exp());
            out.q[a - 1] += parameter;
            if a < n {
                out.omega[a - 1] *= up;
                out.p_omega[a - 1] *= down;
            }
            if a > 1 {
                out.omega[a - 2] *= down;
                out.p_omega[a - 2] *= up;
            }
        }
        g => return domain(format!("{g:?} is not a generator for n = {n}")),
    }
    Ok(out)
}

/// Numerical rank of the phase-space differentials of `𝓘_1..𝓘_n` at `z`.
/// Diagnostic for functional independence.
pub fn independence_rank(sys: &TodaSystem, lift: Lift, z: &[f64]) -> Result<usize> {
    let d = lift.dim(sys.n());
    if z.len() != 2 * d {
        return domain("phase point has the wrong length");
    }
    let h = DEFAULT_STEP;
    let mut rows = Vec::new();
    for k in 1..=sys.n() {
        let f = lift_invariant(sys, lift, k)?;
        let row: Vec<f64> = (0..2 * d)
            .map(|i| {
                let mut zp = z.to_vec();
                let mut zm = z.to_vec();
                zp[i] += h;
                zm[i] -= h;
                (f(&zp[..d], &zp[d..]) - f(&zm[..d], &zm[d..])) / (2.0 * h)
            })
            .collect();
        rows.push(row);
    }
    Ok(numerical_rank(rows, 1e-7))
}

fn numerical_rank(mut rows: Vec<Vec<f64>>, tol: f64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let scale = rows.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).max_by(|&i, &j| rows[i][c].abs().total_cmp(&rows[j][c].abs())) else {
            break;
        };
        if rows[piv][c].abs() <= tol * scale {
            continue;
        }
        rows.swap(rank, piv);
        for i in rank + 1..rows.len() {
            let f = rows[i][c] / rows[rank][c];
            for j in c..cols {
                rows[i][j] -= f * rows[rank][j];
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oplift::generalized_hamiltonian;

    fn sys4() -> TodaSystem {
        TodaSystem::new(vec![0.8, 1.3, 1.7]).unwrap()
    }

    #[test]
    fn exponent_lattice() {
        assert_eq!(multi_exponents(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(multi_exponents(7, 4).len(), 210);
        assert_eq!(index_of(&[2, 0, 1]), vec![1, 1, 3]);
    }

    #[test]
    fn rank_one_on_eisenhart_lift() {
        let sys = sys4();
        let field = SymmetricTensorField::from_lift(&sys, Lift::Eisenhart, 1).unwrap();
        let t = field.components_at(&[0.3, -0.2, 0.5, 0.1, 0.7]).unwrap();
        for i in 1..=4 {
            assert!((t.get(&[i]).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(t.get(&[5]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn rank_two_is_inverse_metric() {
        for lift in [Lift::Eisenhart, Lift::Generalized] {
            assert!(rank_two_metric_mismatch(&sys4(), lift, 10, 3).unwrap() < 1e-10, "{lift}");
        }
    }

    #[test]
    fn recovers_random_polynomial() {
        let mut rng = crate::sampling::rng(11);
        for (d, k) in [(3, 2), (5, 3), (7, 4)] {
            let exps = multi_exponents(d, k);
            let coef = uniform_vec(&mut rng, exps.len(), -1.0, 1.0);
            let poly = {
                let (exps, coef) = (exps.clone(), coef.clone());
                move |_: &[f64], p: &[f64]| exps.iter().zip(&coef).map(|(a, c)| c * monomial(p, a)).sum::<f64>()
            };
            let pol = Polarizer::new(k, d).unwrap();
            let x = vec![0.0; d];
            let values: Vec<f64> = pol.probes.iter().map(|p| poly(&x, p)).collect();
            let got = pol.coefficients(&values).unwrap();
            for (a, b) in got.iter().zip(&coef) {
                assert!((a - b).abs() < 1e-11, "d={d} k={k}");
            }
            let table = pol.extract(&poly, &x).unwrap();
            let p = uniform_vec(&mut rng, d, -1.0, 1.0);
            assert!((table.contract(&p) - poly(&x, &p)).abs() < 1e-10);
        }
    }

    #[test]
    fn symmetric_lookup_and_homogeneity() {
        let f = |_: &[f64], p: &[f64]| p[0] * p[1] * p[2] + 2.0 * p[2].powi(3);
        let t = extract_tensor(&f, 3, &[0.0; 3]).unwrap();
        assert_eq!(t.get(&[3, 1, 2]), t.get(&[1, 2, 3]));
        assert!((t.get(&[2, 3, 1]).unwrap() - 1.0).abs() < 1e-12);
        assert!((t.get(&[3, 3, 3]).unwrap() - 12.0).abs() < 1e-11);
        let bad = |_: &[f64], p: &[f64]| p[0] * p[0] + p[1];
        assert!(matches!(extract_tensor(&bad, 2, &[0.0; 2]), Err(Error::NotHomogeneous { .. })));
    }

    #[test]
    fn bracket_basics() {
        let h = |_: &[f64], p: &[f64]| 0.5 * p.iter().map(|v| v * v).sum::<f64>();
        let q1 = |x: &[f64], _: &[f64]| x[1];
        let z = [0.1, 0.2, 0.3, -0.4, 0.7, 0.2];
        assert!(poisson_bracket_fd(&h, &h, &z, 1e-5).unwrap().abs() < 1e-12);
        assert!((poisson_bracket_fd(&q1, &h, &z, 1e-5).unwrap() - 0.7).abs() < 1e-8);
        assert!(poisson_bracket_fd(&h, &h, &z, 0.0).is_err());
    }

    #[test]
    fn killing_passes_both_lifts() {
        let cfg = IntegratorConfig::default();
        for lift in [Lift::Eisenhart, Lift::Generalized] {
            for k in 1..=4 {
                let r = verify_killing(&sys4(), lift, k, 20, 5, &cfg).unwrap();
                assert!(r.pass, "{r:?}");
            }
        }
        assert!(verify_killing(&sys4(), Lift::Eisenhart, 5, 1, 0, &cfg).is_err());
    }

    #[test]
    fn isometries_preserve_energy() {
        let s = OpState::new(vec![0.3, -0.1, 0.0, -0.2], vec![0.5, -0.7, 1.2], vec![0.2, 0.1, -0.3, 0.0], vec![1.1, 0.6, 0.9])
            .unwrap();
        let h0 = generalized_hamiltonian(&s);
        assert_eq!(isometry_flow(Isometry::Lambda { a: 2 }, &s, 0.0).unwrap(), s);
        for a in 1..=4 {
            let t = isometry_flow(Isometry::Lambda { a }, &s, 1.5).unwrap();
            assert!((generalized_hamiltonian(&t) - h0).abs() / h0 < 1e-13);
        }
        let t = isometry_flow(Isometry::OmegaTranslation { a: 3 }, &s, -2.0).unwrap();
        assert_eq!(generalized_hamiltonian(&t), h0);
        assert!(isometry_flow(Isometry::OmegaTranslation { a: 4 }, &s, 1.0).is_err());
    }

    #[test]
    fn invariants_are_independent() {
        let z = [0.3, -0.1, 0.0, -0.2, 0.5, -0.7, 1.2, 0.2, 0.1, -0.3, 0.0, 1.1, 0.6, 0.9];
        assert_eq!(independence_rank(&sys4(), Lift::Generalized, &z).unwrap(), 4);
    }
}
