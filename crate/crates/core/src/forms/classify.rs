use serde::{Deserialize, Serialize};

use super::eigen::eigenvalues;
use super::matrix::HermitianMatrix;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DefKind {
    PositiveDefinite,
    PositiveSemidefinite,
    NegativeDefinite,
    NegativeSemidefinite,
    Indefinite,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: DefKind,
    pub min_eig: f64,
    pub max_eig: f64,
}

/// Default absolute threshold for [`classify`]: `1e-9·‖B‖`.
pub fn default_tol(b: &HermitianMatrix) -> f64 {
    1e-9 * b.spectral_norm()
}

/// Definiteness of `B` with eigenvalues inside `[-tol, tol]` treated as zero.
pub fn classify(b: &HermitianMatrix, tol: f64) -> Result<Classification> {
    let ev = eigenvalues(b)?;
    let min_eig = ev[0];
    let max_eig = *ev.last().expect("non-empty spectrum");
    let norm = min_eig.abs().max(max_eig.abs());
    let kind = if norm <= tol {
        DefKind::Zero
    } else if min_eig > tol {
        DefKind::PositiveDefinite
    } else if max_eig < -tol {
        DefKind::NegativeDefinite
    } else if min_eig < -tol && max_eig > tol {
        DefKind::Indefinite
    } else if min_eig >= -tol {
        DefKind::PositiveSemidefinite
    } else {
        DefKind::NegativeSemidefinite
    };
    Ok(Classification {
        kind,
        min_eig,
        max_eig,
    })
}
