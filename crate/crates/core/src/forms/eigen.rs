//! Cyclic Jacobi eigensolver for dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq = |a_pq|·e^{iφ}` with the
//! diagonal unitary `diag(1, e^{-iφ})` and then applies the real Jacobi rotation that
//! annihilates the (now real) pivot. Pivots are visited row by row, so the result is a
//! deterministic function of the input.

use num_complex::Complex64;

use super::matrix::HermitianMatrix;
use super::vector::CVec;
use crate::error::{PencilError, Result};

/// Sweep cap before [`PencilError::EigNoConvergence`].
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns: `eigenvectors[k]` belongs to `eigenvalues[k]`.
    pub eigenvectors: Vec<CVec>,
}

impl EigenDecomposition {
    /// `V·Λ·V*`.
    pub fn reconstruct(&self) -> HermitianMatrix {
        let n = self.eigenvalues.len();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for (lam, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..n {
                for j in 0..n {
                    data[i * n + j] += v[i] * v[j].conj() * *lam;
                }
            }
        }
        HermitianMatrix::new(n, data).expect("reconstruction is Hermitian")
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }
}

/// Full spectral decomposition.
pub fn eig(m: &HermitianMatrix) -> Result<EigenDecomposition> {
    let (vals, vecs) = jacobi(m, true)?;
    let vecs = vecs.expect("vectors requested");
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let eigenvalues = order.iter().map(|&k| vals[k]).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| (0..n).map(|i| vecs[i * n + k]).collect())
        .collect();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>> {
    let (mut vals, _) = jacobi(m, false)?;
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

fn jacobi(m: &HermitianMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<Complex64>>)> {
    let n = m.dim();
    let mut a = m.entries().to_vec();
    let mut v = want_vectors.then(|| {
        let mut id = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            id[i * n + i] = Complex64::new(1.0, 0.0);
        }
        id
    });
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 || n == 1 {
        let vals = (0..n).map(|i| a[i * n + i].re).collect();
        return Ok((vals, v));
    }
    let threshold = (f64::EPSILON * 1e-2) * (f64::EPSILON * 1e-2) * total;

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off <= threshold || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let abs = apq.norm();
                if abs == 0.0 || abs * abs <= threshold * 1e-4 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * abs);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let phase = apq / abs;
                let phase_c = phase.conj();

                // A ← A·U with U = [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]] on (p, q).
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * phase_c * s;
                    a[k * n + q] = akp * s + akq * phase_c * c;
                }
                // A ← U*·A.
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * phase * s;
                    a[q * n + k] = apk * s + aqk * phase * c;
                }
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p] = Complex64::new(app - t * abs, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * abs, 0.0);

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c - vkq * phase_c * s;
                        v[k * n + q] = vkp * s + vkq * phase_c * c;
                    }
                }
            }
        }
    }
    if !converged {
        return Err(PencilError::EigNoConvergence { sweeps: MAX_SWEEPS });
    }
    let vals = (0..n).map(|i| a[i * n + i].re).collect();
    Ok((vals, v))
}
