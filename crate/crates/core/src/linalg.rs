//! Small dense real matrices and the SL(n,R) basis used by the lifts.
//!
//! Matrices are stored row-major and indexed from 0 internally. The public
//! basis constructors ([`basis_matrix`] and friends) take 1-based labels so
//! that `upper(1, 2, n)` is the matrix with a single 1 in the first row and
//! second column.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A `dim × dim` real matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from rows, checking shape and finiteness.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return domain("matrix must have at least one row");
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return domain(format!("row {} has length {}, expected {dim}", i + 1, row.len()));
            }
            data.extend_from_slice(row);
        }
        let m = Self { dim, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            domain("matrix has non-finite entries")
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.data
            .chunks(self.dim)
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..i {
                m = m.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        m
    }

    pub fn symmetrize(&self) -> Self {
        Self::from_fn(self.dim, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn powi(&self, k: usize) -> Self {
        let mut out = Self::identity(self.dim);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn is_strictly_upper(&self) -> bool {
        (0..self.dim).all(|i| (0..=i).all(|j| self[(i, j)] == 0.0))
    }

    pub fn is_strictly_lower(&self) -> bool {
        (0..self.dim).all(|i| (i..self.dim).all(|j| self[(i, j)] == 0.0))
    }

    pub fn is_unit_upper_triangular(&self) -> bool {
        (0..self.dim).all(|i| self[(i, i)] == 1.0 && (0..i).all(|j| self[(i, j)] == 0.0))
    }

    /// Strictly-upper, strictly-lower and diagonal parts.
    pub fn split_parts(&self) -> (Self, Self, Self) {
        let n = self.dim;
        let up = Self::from_fn(n, |i, j| if j > i { self[(i, j)] } else { 0.0 });
        let lo = Self::from_fn(n, |i, j| if j < i { self[(i, j)] } else { 0.0 });
        let di = Self::from_fn(n, |i, j| if i == j { self[(i, j)] } else { 0.0 });
        (up, lo, di)
    }

    pub fn determinant(&self) -> f64 {
        match Lu::new(self) {
            Ok(lu) => lu.determinant(),
            Err(_) => 0.0,
        }
    }

    /// General inverse by LU with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        Lu::new(self)?.inverse()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim);
        self.data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrix({}x{})", self.dim, self.dim)?;
        for row in self.data.chunks(self.dim) {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>12.5e}")).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &SquareMatrix {
    type Output = SquareMatrix;
    fn add(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &SquareMatrix {
    type Output = SquareMatrix;
    fn sub(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &SquareMatrix {
    type Output = SquareMatrix;
    fn neg(self) -> SquareMatrix {
        self.scale(-1.0)
    }
}

// ---------------------------------------------------------------------------
// Lie-algebra basis

/// Families of basis matrices of sl(n,R).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisKind {
    /// `M_ab`, a < b: single 1 at (a, b).
    Upper,
    /// `M̄_ab`, a > b: single 1 at (a, b).
    Lower,
    /// `M_a = diag(0,…,1,…,0,−1)`, 1 ≤ a ≤ n−1; `M_n = 0`.
    DiagonalTraceless,
}

/// Basis matrix of sl(`dim`,R) with 1-based labels.
///
/// `b` is ignored for [`BasisKind::DiagonalTraceless`]. `a = dim` is accepted for
/// the diagonal family and yields the zero matrix.
pub fn basis_matrix(kind: BasisKind, a: usize, b: Option<usize>, dim: usize) -> Result<SquareMatrix> {
    if dim == 0 {
        return domain("dimension must be positive");
    }
    let in_range = |x: usize| (1..=dim).contains(&x);
    match kind {
        BasisKind::Upper | BasisKind::Lower => {
            let Some(b) = b else {
                return domain("off-diagonal basis matrix needs two indices");
            };
            if !in_range(a) || !in_range(b) {
                return domain(format!("indices ({a},{b}) out of range 1..={dim}"));
            }
            let ordered = match kind {
                BasisKind::Upper => a < b,
                _ => a > b,
            };
            if !ordered {
                return domain(format!("indices ({a},{b}) in wrong order for {kind:?}"));
            }
            let mut m = SquareMatrix::zeros(dim);
            m[(a - 1, b - 1)] = 1.0;
            Ok(m)
        }
        BasisKind::DiagonalTraceless => {
            if !in_range(a) {
                return domain(format!("index {a} out of range 1..={dim}"));
            }
            let mut m = SquareMatrix::zeros(dim);
            if a < dim {
                m[(a - 1, a - 1)] = 1.0;
                m[(dim - 1, dim - 1)] = -1.0;
            }
            Ok(m)
        }
    }
}

pub fn upper(a: usize, b: usize, dim: usize) -> Result<SquareMatrix> {
    basis_matrix(BasisKind::Upper, a, Some(b), dim)
}

pub fn lower(a: usize, b: usize, dim: usize) -> Result<SquareMatrix> {
    basis_matrix(BasisKind::Lower, a, Some(b), dim)
}

pub fn diag_traceless(a: usize, dim: usize) -> Result<SquareMatrix> {
    basis_matrix(BasisKind::DiagonalTraceless, a, None, dim)
}

/// `𝕀_a`: a single 1 at diagonal position `a` (1-based).
pub fn unit_diagonal(a: usize, dim: usize) -> Result<SquareMatrix> {
    if !(1..=dim).contains(&a) {
        return domain(format!("index {a} out of range 1..={dim}"));
    }
    let mut m = SquareMatrix::zeros(dim);
    m[(a - 1, a - 1)] = 1.0;
    Ok(m)
}

/// Outcome of [`basis_product_identities`] for one family of product rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub cases: usize,
    /// Largest entrywise difference between the two sides.
    pub max_residual: f64,
}

/// `E_ad` read as `M_ad`, `M̄_ad` or `𝕀_a` according to the index order.
fn elementary(a: usize, d: usize, dim: usize) -> Result<SquareMatrix> {
    match a.cmp(&d) {
        std::cmp::Ordering::Less => upper(a, d, dim),
        std::cmp::Ordering::Greater => lower(a, d, dim),
        std::cmp::Ordering::Equal => unit_diagonal(a, dim),
    }
}

/// Evaluates the basis product rules for `sl(dim)` with a fixed diagonal
/// `D = diag(1.5, −2.25, 3.125, …)`.
pub fn basis_product_identities(dim: usize) -> Result<Vec<IdentityCheck>> {
    if dim < 2 {
        return domain("identities need dim >= 2");
    }
    let d: Vec<f64> = (0..dim).map(|i| (1.5 + 0.875 * i as f64) * if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let dm = SquareMatrix::from_diagonal(&d);
    let pairs_up: Vec<(usize, usize)> = (1..=dim).flat_map(|a| ((a + 1)..=dim).map(move |b| (a, b))).collect();
    let pairs_lo: Vec<(usize, usize)> = pairs_up.iter().map(|&(a, b)| (b, a)).collect();
    let mut checks = Vec::new();
    let mut record = |name: &str, items: Vec<(SquareMatrix, SquareMatrix)>| {
        let max_residual = items.iter().map(|(l, r)| l.max_abs_diff(r)).fold(0.0, f64::max);
        checks.push(IdentityCheck { name: name.to_string(), cases: items.len(), max_residual });
    };

    let mut items = Vec::new();
    for &(a, b) in &pairs_up {
        for &(c, e) in &pairs_up {
            let rhs = if b == c { upper(a, e, dim)? } else { SquareMatrix::zeros(dim) };
            items.push((&upper(a, b, dim)? * &upper(c, e, dim)?, rhs));
        }
    }
    record("M_ab M_cd = delta_bc M_ad", items);

    let mut items = Vec::new();
    for &(a, b) in &pairs_up {
        let m = upper(a, b, dim)?;
        items.push((&m * &m, SquareMatrix::zeros(dim)));
    }
    record("M_ab^2 = 0", items);

    for (label, pairs, make) in [
        ("M", &pairs_up, upper as fn(usize, usize, usize) -> Result<SquareMatrix>),
        ("Mbar", &pairs_lo, lower as fn(usize, usize, usize) -> Result<SquareMatrix>),
    ] {
        let mut right = Vec::new();
        let mut left = Vec::new();
        for &(a, b) in pairs.iter() {
            let m = make(a, b, dim)?;
            right.push((&m * &dm, m.scale(d[b - 1])));
            left.push((&dm * &m, m.scale(d[a - 1])));
        }
        record(&format!("{label}_ab D = d_b {label}_ab"), right);
        record(&format!("D {label}_ab = d_a {label}_ab"), left);
    }

    let mut items = Vec::new();
    for &(a, b) in &pairs_up {
        for &(c, e) in &pairs_lo {
            let rhs = if b == c { elementary(a, e, dim)? } else { SquareMatrix::zeros(dim) };
            items.push((&upper(a, b, dim)? * &lower(c, e, dim)?, rhs));
        }
    }
    record("M_ab Mbar_cd = delta_bc (M_ad + Mbar_ad + delta_ad I_a)", items);
    Ok(checks)
}

// ---------------------------------------------------------------------------
// Matrix exponential

/// Result of [`mat_exp_tracked`]: the exponential and the determinant carried
/// through the squaring phase.
#[derive(Debug, Clone)]
pub struct ExpOutcome {
    pub value: SquareMatrix,
    /// `det(R)^(2^s)` where `R` is the Taylor approximant of `A / 2^s`.
    pub det: f64,
    pub squarings: u32,
}

const TAYLOR_MAX_TERMS: usize = 40;

/// Matrix exponential.
///
/// Strictly triangular input is nilpotent and is summed as a finite series.
/// Everything else goes through scaling and squaring with a Taylor series
/// truncated once the next term drops below machine precision.
pub fn mat_exp(a: &SquareMatrix) -> Result<SquareMatrix> {
    Ok(mat_exp_tracked(a)?.value)
}

pub fn mat_exp_tracked(a: &SquareMatrix) -> Result<ExpOutcome> {
    a.check_finite()?;
    let n = a.dim();
    if a.is_strictly_upper() || a.is_strictly_lower() {
        let mut sum = SquareMatrix::identity(n);
        let mut term = SquareMatrix::identity(n);
        for k in 1..n {
            term = (&term * a).scale(1.0 / k as f64);
            sum = &sum + &term;
        }
        return Ok(ExpOutcome {
            value: sum,
            det: 1.0,
            squarings: 0,
        });
    }

    let norm = a.norm_inf();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(0.5f64.powi(squarings as i32));
    let mut sum = SquareMatrix::identity(n);
    let mut term = SquareMatrix::identity(n);
    for k in 1..TAYLOR_MAX_TERMS {
        term = (&term * &scaled).scale(1.0 / k as f64);
        sum = &sum + &term;
        if term.max_abs() <= 1e-18 * sum.max_abs() {
            break;
        }
    }
    let base_det = sum.determinant();
    let mut value = sum;
    for _ in 0..squarings {
        value = &value * &value;
    }
    let det = (base_det.ln() * 2f64.powi(squarings as i32)).exp();
    Ok(ExpOutcome {
        value,
        det,
        squarings,
    })
}

// ---------------------------------------------------------------------------
// UDU factorisation

/// `x = Z · diag(hsq) · Zᵀ` with `Z` upper unitriangular.
#[derive(Debug, Clone, PartialEq)]
pub struct UduFactors {
    pub z: SquareMatrix,
    pub hsq: Vec<f64>,
}

impl UduFactors {
    pub fn compose(&self) -> SquareMatrix {
        let n = self.z.dim();
        let zh = SquareMatrix::from_fn(n, |i, j| self.z[(i, j)] * self.hsq[j]);
        &zh * &self.z.transpose()
    }
}

/// Relative asymmetry accepted by [`udu_decompose`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Cholesky-type `UDU` decomposition, eliminating from the bottom-right corner.
pub fn udu_decompose(x: &SquareMatrix) -> Result<UduFactors> {
    x.check_finite()?;
    let scale = x.max_abs().max(f64::MIN_POSITIVE);
    if x.max_asymmetry() > SYMMETRY_TOLERANCE * scale {
        return domain(format!(
            "matrix is not symmetric (asymmetry {:e})",
            x.max_asymmetry()
        ));
    }
    let n = x.dim();
    let mut z = SquareMatrix::identity(n);
    let mut hsq = vec![0.0; n];
    for j in (0..n).rev() {
        let pivot = x[(j, j)]
            - ((j + 1)..n)
                .map(|k| z[(j, k)] * z[(j, k)] * hsq[k])
                .sum::<f64>();
        if !(pivot > 0.0) {
            return Err(Error::Definiteness {
                index: j + 1,
                pivot,
            });
        }
        hsq[j] = pivot;
        for i in 0..j {
            let s: f64 = ((j + 1)..n).map(|k| z[(i, k)] * z[(j, k)] * hsq[k]).sum();
            z[(i, j)] = (0.5 * (x[(i, j)] + x[(j, i)]) - s) / pivot;
        }
    }
    Ok(UduFactors { z, hsq })
}

/// Inverse of an upper unitriangular matrix by back substitution.
pub fn unitriangular_inverse(z: &SquareMatrix) -> Result<SquareMatrix> {
    if !z.is_unit_upper_triangular() {
        return domain("matrix is not upper unitriangular");
    }
    let n = z.dim();
    let mut inv = SquareMatrix::identity(n);
    // Column j of the inverse solves Z w = e_j; w is zero below row j.
    for j in 0..n {
        for i in (0..j).rev() {
            let s: f64 = ((i + 1)..=j).map(|k| z[(i, k)] * inv[(k, j)]).sum();
            inv[(i, j)] = -s;
        }
    }
    Ok(inv)
}

// ---------------------------------------------------------------------------
// LU with partial pivoting

/// LU factorisation with partial pivoting of a general matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: SquareMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn new(a: &SquareMatrix) -> Result<Self> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == 0.0 || !pmax.is_finite() {
                return domain("matrix is singular");
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in (k + 1)..n {
                        lu.data[i * n + j] -= f * lu.data[k * n + j];
                    }
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn determinant(&self) -> f64 {
        self.sign * self.lu.diagonal().iter().product::<f64>()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|k| self.lu[(i, k)] * x[k]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|k| self.lu[(i, k)] * x[k]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> Result<SquareMatrix> {
        let n = self.lu.dim();
        let mut inv = SquareMatrix::zeros(n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = 0.0);
            e[j] = 1.0;
            for (i, v) in self.solve(&e).into_iter().enumerate() {
                inv[(i, j)] = v;
            }
        }
        inv.check_finite()?;
        Ok(inv)
    }
}

// ---------------------------------------------------------------------------
// Exterior powers

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Additive compound of `s` on the `k`-th exterior power, indexed by
/// [`subsets`]`(n, k)`. It generates `Λᵏ(exp(t s)) = exp(t s⁽ᵏ⁾)`.
pub fn additive_compound(s: &SquareMatrix, k: usize) -> (SquareMatrix, Vec<Vec<usize>>) {
    let n = s.dim();
    assert!((1..=n).contains(&k));
    let sets = subsets(n, k);
    let mut out = SquareMatrix::zeros(sets.len());
    for (r, row_set) in sets.iter().enumerate() {
        for (c, col_set) in sets.iter().enumerate() {
            if r == c {
                out[(r, c)] = row_set.iter().map(|&i| s[(i, i)]).sum();
                continue;
            }
            let only_row: Vec<usize> = row_set.iter().copied().filter(|x| !col_set.contains(x)).collect();
            if only_row.len() != 1 {
                continue;
            }
            let i = only_row[0];
            let j = *col_set.iter().find(|x| !row_set.contains(x)).expect("sets differ");
            let pi = row_set.iter().position(|&x| x == i).unwrap();
            let pj = col_set.iter().position(|&x| x == j).unwrap();
            let sign = if (pi + pj) % 2 == 0 { 1.0 } else { -1.0 };
            out[(r, c)] = sign * s[(i, j)];
        }
    }
    (out, sets)
}
