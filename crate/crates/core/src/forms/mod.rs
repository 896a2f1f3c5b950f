//! Hermitian matrices, spectral decomposition and quadratic forms.

mod classify;
mod eigen;
mod geometry;
mod matrix;
pub mod vector;

pub use classify::{classify, default_tol, Classification, DefKind};
pub use eigen::{eig, eigenvalues, EigenDecomposition, MAX_SWEEPS};
pub use geometry::{
    choose_theta, neutral_direction, neutral_root, segment_neutral_root, ConeWitness,
};
pub use matrix::HermitianMatrix;
pub use vector::CVec;

use crate::error::{PencilError, Result};

/// `Re⟨Bx, x⟩`.
///
/// The imaginary part vanishes for Hermitian `B`; it is checked in debug builds against
/// `1e-10·‖B‖·‖x‖²`.
pub fn quadratic_form(b: &HermitianMatrix, x: &[num_complex::Complex64]) -> Result<f64> {
    if b.dim() != x.len() {
        return Err(PencilError::DimMismatch {
            expected: b.dim(),
            found: x.len(),
        });
    }
    let bx = b.apply(x);
    let value = vector::inner(&bx, x);
    debug_assert!(
        value.im.abs() <= 1e-10 * b.spectral_norm() * vector::norm_sqr(x) + f64::MIN_POSITIVE,
        "imaginary part of a Hermitian form: {}",
        value.im
    );
    Ok(value.re)
}
