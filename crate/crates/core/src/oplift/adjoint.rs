use serde::{Deserialize, Serialize};

use super::geometry::z_from_omega;
use crate::error::{domain, Result};
use crate::linalg::{unitriangular_inverse, SquareMatrix};

/// A basis element of `sl(n)`, 1-based labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// `M_a = E_aa − E_nn`, `a < n`.
    Diagonal { a: usize },
    /// `M_ab = E_ab`, `a < b`.
    Upper { a: usize, b: usize },
    /// `M̄_ab = E_ab`, `a > b`.
    Lower { a: usize, b: usize },
}

impl Generator {
    pub fn matrix(&self, n: usize) -> Result<SquareMatrix> {
        let mut m = SquareMatrix::zeros(n);
        match *self {
            Generator::Diagonal { a } if (1..n).contains(&a) => {
                m[(a - 1, a - 1)] = 1.0;
                m[(n - 1, n - 1)] = -1.0;
            }
            Generator::Upper { a, b } if a >= 1 && a < b && b <= n => m[(a - 1, b - 1)] = 1.0,
            Generator::Lower { a, b } if b >= 1 && b < a && a <= n => m[(a - 1, b - 1)] = 1.0,
            g => return domain(format!("{g:?} is not a basis element for n = {n}")),
        }
        Ok(m)
    }
}

/// `Z G Z⁻¹` expanded over `{M_a, M_ab, M̄_ab}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjointExpansion {
    pub generator: Generator,
    pub conjugate: SquareMatrix,
    /// Coefficients of `M_1..M_{n−1}`.
    pub diagonal: Vec<f64>,
    /// Largest difference between the conjugate and the basis sum rebuilt from
    /// the coefficients.
    pub reconstruction: f64,
}

impl AdjointExpansion {
    pub fn n(&self) -> usize {
        self.conjugate.dim()
    }

    /// Coefficient of `M_bc`, `b < c`.
    pub fn upper(&self, b: usize, c: usize) -> f64 {
        self.conjugate[(b - 1, c - 1)]
    }

    /// Coefficient of `M̄_bc`, `b > c`.
    pub fn lower(&self, b: usize, c: usize) -> f64 {
        self.conjugate[(b - 1, c - 1)]
    }

    /// Coefficient of `M_b`.
    pub fn diag(&self, b: usize) -> f64 {
        self.diagonal[b - 1]
    }
}

/// Numerical projection of `Z G Z⁻¹` with `Z = exp(Σ ω_a M_{a,a+1})`.
pub fn adjoint_expansion(omega: &[f64], generator: Generator) -> Result<AdjointExpansion> {
    let n = omega.len() + 1;
    let g = generator.matrix(n)?;
    let z = z_from_omega(omega, n)?;
    let conjugate = &(&z * &g) * &unitriangular_inverse(&z)?;
    let diagonal: Vec<f64> = (0..n - 1).map(|a| conjugate[(a, a)]).collect();
    let mut rebuilt = conjugate.clone();
    for a in 0..n {
        rebuilt[(a, a)] = 0.0;
    }
    for (a, d) in diagonal.iter().enumerate() {
        rebuilt[(a, a)] += d;
        rebuilt[(n - 1, n - 1)] -= d;
    }
    let reconstruction = rebuilt.max_abs_diff(&conjugate);
    Ok(AdjointExpansion {
        generator,
        conjugate,
        diagonal,
        reconstruction,
    })
}

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

fn sign(k: isize) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Two candidate closed forms for `f_abc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FVariant {
    /// `δ_ac Z_bc + (−1)^{c−b} δ_ab Z_bc + (−1)^{c−a} Z_ba Z_ac − δ_cn Z_bc`
    Compact,
    /// `δ_ac Z_ba + (−1)^{c−b} δ_ab Z_ac + (−1)^{c−a} Z_ba Z_ac − δ_cn Z_bc`
    Expanded,
}

/// Candidate `f_abc`, 1-based, `b < c`, `a < n`.
///
/// With `strict` the product term is kept only for `b < a < c`; otherwise it is
/// summed for every `a`, so at `a = b` and `a = c` it repeats the delta terms.
pub fn f_coefficient_candidate(z: &SquareMatrix, a: usize, b: usize, c: usize, variant: FVariant, strict: bool) -> f64 {
    let n = z.dim();
    let zz = |i: usize, j: usize| z[(i - 1, j - 1)];
    let (first, second) = match variant {
        FVariant::Compact => (zz(b, c), zz(b, c)),
        FVariant::Expanded => (zz(b, a), zz(a, c)),
    };
    let product = if !strict || (b < a && a < c) {
        sign(c as isize - a as isize) * zz(b, a) * zz(a, c)
    } else {
        0.0
    };
    delta(a, c) * first + sign(c as isize - b as isize) * delta(a, b) * second + product - delta(c, n) * zz(b, c)
}

/// Candidate `g_abc`, 1-based, `b < c`, `a < n`.
pub fn g_coefficient_candidate(z: &SquareMatrix, a: usize, b: usize, c: usize) -> f64 {
    let zz = |i: usize, j: usize| z[(i - 1, j - 1)];
    let s = sign(c as isize - a as isize);
    let omega_a = zz(a, a + 1);
    delta(c, a) * zz(b, a + 1)
        + s * delta(b, a) * omega_a * zz(a, c)
        + s * delta(b, a + 1) * zz(a, c)
        + s * (zz(b, a + 1) * zz(a, c) - delta(b, a) * zz(a, a + 1) * zz(a, c))
}

/// `λ_ab = δ_ab ω_b − δ_{a+1,b} ω_{b−1}`, 1-based.
pub fn lambda_coefficient_candidate(omega: &[f64], a: usize, b: usize) -> f64 {
    let w = |i: usize| if i == 0 { 0.0 } else { omega.get(i - 1).copied().unwrap_or(0.0) };
    delta(a, b) * w(b) - delta(a + 1, b) * w(b - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_z_keeps_generator() {
        let e = adjoint_expansion(&[0.0, 0.0, 0.0], Generator::Diagonal { a: 2 }).unwrap();
        assert_eq!(e.diagonal, vec![0.0, 1.0, 0.0]);
        for b in 1..4 {
            for c in (b + 1)..=4 {
                assert_eq!(e.upper(b, c), 0.0);
            }
        }
        assert!(adjoint_expansion(&[0.0], Generator::Upper { a: 2, b: 1 }).is_err());
        assert!(adjoint_expansion(&[0.0], Generator::Diagonal { a: 2 }).is_err());
    }

    #[test]
    fn lambda_closed_form_matches() {
        let omega = [0.8, -1.3];
        for a in 1..3 {
            let e = adjoint_expansion(&omega, Generator::Lower { a: a + 1, b: a }).unwrap();
            assert!(e.reconstruction < 1e-15);
            assert!((e.lower(a + 1, a) - 1.0).abs() < 1e-15);
            for b in 1..3 {
                assert!((e.diag(b) - lambda_coefficient_candidate(&omega, a, b)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn strict_f_matches_projection() {
        let omega = [0.8, -1.3, 0.45, 2.0];
        let z = z_from_omega(&omega, 5).unwrap();
        for a in 1..5 {
            let e = adjoint_expansion(&omega, Generator::Diagonal { a }).unwrap();
            for b in 1..5 {
                for c in (b + 1)..=5 {
                    for v in [FVariant::Compact, FVariant::Expanded] {
                        let f = f_coefficient_candidate(&z, a, b, c, v, true);
                        assert!((f - e.upper(b, c)).abs() < 1e-13, "a={a} b={b} c={c}");
                    }
                }
            }
        }
    }

    #[test]
    fn g_true_form() {
        let omega = [0.8, -1.3, 0.45];
        let z = z_from_omega(&omega, 4).unwrap();
        for a in 1..4 {
            let e = adjoint_expansion(&omega, Generator::Lower { a: a + 1, b: a }).unwrap();
            for b in 1..4 {
                for c in (b + 1)..=4 {
                    let want = sign(c as isize - a as isize) * z[(b - 1, a)] * z[(a - 1, c - 1)];
                    assert!((e.upper(b, c) - want).abs() < 1e-13);
                }
            }
        }
    }
}
