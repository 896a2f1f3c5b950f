use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::eigen::eigenvalues;
use super::vector::CVec;
use crate::error::{PencilError, Result};

/// Asymmetry accepted (relative to the largest entry) before an input is rejected.
pub const HERMITIAN_INGEST_TOL: f64 = 1e-12;

/// Dense `n×n` complex Hermitian matrix stored row-major.
///
/// Construction checks Hermitian symmetry within [`HERMITIAN_INGEST_TOL`] and then
/// stores `(M + M*)/2`, so the stored matrix is exactly Hermitian.
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
    norm: OnceLock<f64>,
}

impl Clone for HermitianMatrix {
    fn clone(&self) -> Self {
        let norm = OnceLock::new();
        if let Some(v) = self.norm.get() {
            let _ = norm.set(*v);
        }
        Self {
            n: self.n,
            data: self.data.clone(),
            norm,
        }
    }
}

impl PartialEq for HermitianMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.data == other.data
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.n {
            list.entry(&&self.data[i * self.n..(i + 1) * self.n]);
        }
        list.finish()
    }
}

impl HermitianMatrix {
    /// Builds from row-major entries, symmetrising small asymmetries.
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(PencilError::InvalidArgument("dimension must be positive".into()));
        }
        if data.len() != n * n {
            return Err(PencilError::DimMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        let mut scale = 0.0f64;
        for (idx, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(PencilError::NonFinite {
                    row: idx / n,
                    col: idx % n,
                });
            }
            scale = scale.max(z.norm());
        }
        let mut asym = 0.0f64;
        for i in 0..n {
            for j in i..n {
                asym = asym.max((data[i * n + j] - data[j * n + i].conj()).norm());
            }
        }
        if asym > HERMITIAN_INGEST_TOL * scale {
            return Err(PencilError::NotHermitian {
                asymmetry: asym / scale,
            });
        }
        let mut sym = data;
        for i in 0..n {
            let d = sym[i * n + i];
            sym[i * n + i] = Complex64::new(d.re, 0.0);
            for j in (i + 1)..n {
                let avg = (sym[i * n + j] + sym[j * n + i].conj()) * 0.5;
                sym[i * n + j] = avg;
                sym[j * n + i] = avg.conj();
            }
        }
        Ok(Self::from_hermitian_unchecked(n, sym))
    }

    /// Caller guarantees exact Hermitian symmetry and finiteness.
    pub(crate) fn from_hermitian_unchecked(n: usize, data: Vec<Complex64>) -> Self {
        Self {
            n,
            data,
            norm: OnceLock::new(),
        }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(PencilError::DimMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_hermitian_unchecked(n, vec![Complex64::new(0.0, 0.0); n * n])
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![1.0; n])
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &v) in d.iter().enumerate() {
            data[i * n + i] = Complex64::new(v, 0.0);
        }
        Self::from_hermitian_unchecked(n, data)
    }

    /// `u·v* + v·u*`.
    pub fn sym_outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let n = u.len();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(u[i] * v[j].conj() + v[i] * u[j].conj());
            }
        }
        Self::from_hermitian_unchecked(n, data)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// True when every entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// `M·x`. Panics on dimension mismatch.
    pub fn apply(&self, x: &[Complex64]) -> CVec {
        assert_eq!(x.len(), self.n, "dimension mismatch in matrix-vector product");
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        self.apply_into(x, &mut out);
        out
    }

    #[inline]
    pub(crate) fn apply_into(&self, x: &[Complex64], out: &mut [Complex64]) {
        for (row, o) in self.data.chunks_exact(self.n).zip(out.iter_mut()) {
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    /// `Re⟨Mx, x⟩` without the dimension check.
    #[inline]
    pub(crate) fn form(&self, x: &[Complex64]) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let mi: Complex64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            acc += mi.re * x[i].re + mi.im * x[i].im;
        }
        acc
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::from_hermitian_unchecked(self.n, self.data.iter().map(|z| z * c).collect())
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: f64, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch in matrix sum");
        Self::from_hermitian_unchecked(
            self.n,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b * c)
                .collect(),
        )
    }

    /// `base + Σ coeffs[i]·mats[i]` (base defaults to zero).
    pub fn combination(base: Option<&Self>, coeffs: &[f64], mats: &[Self]) -> Self {
        assert_eq!(coeffs.len(), mats.len());
        let n = base.map(|b| b.n).or(mats.first().map(|m| m.n)).expect("empty combination");
        let mut data = match base {
            Some(b) => b.data.clone(),
            None => vec![Complex64::new(0.0, 0.0); n * n],
        };
        for (c, m) in coeffs.iter().zip(mats) {
            assert_eq!(m.n, n, "dimension mismatch in matrix combination");
            if *c == 0.0 {
                continue;
            }
            for (d, e) in data.iter_mut().zip(&m.data) {
                *d += e * *c;
            }
        }
        Self::from_hermitian_unchecked(n, data)
    }

    /// Unitary similarity `U·M·U*` with `U` given by its columns.
    pub fn conjugated(&self, u_cols: &[CVec]) -> Self {
        let n = self.n;
        // (U M U*)_{ij} = Σ_{kl} U_ik M_kl conj(U_jl)
        let u = |i: usize, k: usize| u_cols[k][i];
        let mut mu = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for l in 0..n {
                mu[i * n + l] = (0..n).map(|k| u(i, k) * self.get(k, l)).sum();
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n).map(|l| mu[i * n + l] * u(j, l).conj()).sum();
            }
        }
        for i in 0..n {
            out[i * n + i].im = 0.0;
            for j in (i + 1)..n {
                let avg = (out[i * n + j] + out[j * n + i].conj()) * 0.5;
                out[i * n + j] = avg;
                out[j * n + i] = avg.conj();
            }
        }
        Self::from_hermitian_unchecked(n, out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Spectral norm `max |eigenvalue|`, computed once and cached.
    pub fn spectral_norm(&self) -> f64 {
        *self.norm.get_or_init(|| match eigenvalues(self) {
            Ok(ev) => ev.iter().fold(0.0f64, |m, v| m.max(v.abs())),
            Err(_) => self.frobenius_norm(),
        })
    }

    pub fn min_eig(&self) -> Result<f64> {
        Ok(eigenvalues(self)?[0])
    }

    pub fn max_eig(&self) -> Result<f64> {
        Ok(*eigenvalues(self)?.last().expect("non-empty spectrum"))
    }
}
