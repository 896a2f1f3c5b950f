//! Exhaustive λ-grid feasibility sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{PencilError, Result};
use crate::forms::HermitianMatrix;

/// Largest family size accepted by [`grid_feasibility`].
pub const MAX_GRID_DIM: usize = 4;

/// Axis-aligned box in λ-space sampled with `points_per_axis` points per coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub bounds: Vec<(f64, f64)>,
    pub points_per_axis: usize,
    pub tol: f64,
}

impl GridSpec {
    pub fn new(bounds: Vec<(f64, f64)>, points_per_axis: usize, tol: f64) -> Result<Self> {
        let spec = Self {
            bounds,
            points_per_axis,
            tol,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The same box `[lo, hi]` on each of `m` axes, 21 points per axis.
    pub fn cube(m: usize, lo: f64, hi: f64, tol: f64) -> Result<Self> {
        Self::new(vec![(lo, hi); m], 21, tol)
    }

    fn validate(&self) -> Result<()> {
        if self.points_per_axis < 2 {
            return Err(PencilError::InvalidArgument(
                "points_per_axis must be at least 2".into(),
            ));
        }
        if let Some((lo, hi)) = self.bounds.iter().find(|(lo, hi)| !(lo < hi)) {
            return Err(PencilError::InvalidArgument(format!(
                "grid axis needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(())
    }

    /// Coordinate of grid index `k` along `axis`.
    pub fn coordinate(&self, axis: usize, k: usize) -> f64 {
        let (lo, hi) = self.bounds[axis];
        lo + (hi - lo) * k as f64 / (self.points_per_axis - 1) as f64
    }
}

/// A feasible grid node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub index: Vec<usize>,
    pub lambda: Vec<f64>,
    pub min_eig: f64,
}

/// Every grid `λ` with `min_eig(A + Σλᵢ Bᵢ) ≥ −tol·(‖A‖ + Σ|λᵢ|‖Bᵢ‖)`, in
/// lexicographic index order (last axis fastest).
pub fn grid_feasibility(
    a: &HermitianMatrix,
    family: &[HermitianMatrix],
    spec: &GridSpec,
) -> Result<Vec<GridPoint>> {
    let m = family.len();
    if m > MAX_GRID_DIM {
        return Err(PencilError::GridTooLarge { m });
    }
    spec.validate()?;
    if spec.bounds.len() != m {
        return Err(PencilError::DimMismatch {
            expected: m,
            found: spec.bounds.len(),
        });
    }
    for b in family {
        if b.dim() != a.dim() {
            return Err(PencilError::DimMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
    }
    let p = spec.points_per_axis;
    let total = p.pow(m as u32);
    let norms: Vec<f64> = family.iter().map(|b| b.spectral_norm()).collect();
    let a_norm = a.spectral_norm();
    let nodes: Vec<Result<Option<GridPoint>>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut index = vec![0; m];
            let mut rest = flat;
            for axis in (0..m).rev() {
                index[axis] = rest % p;
                rest /= p;
            }
            let lambda: Vec<f64> = index
                .iter()
                .enumerate()
                .map(|(axis, &k)| spec.coordinate(axis, k))
                .collect();
            let scale = a_norm
                + lambda
                    .iter()
                    .zip(&norms)
                    .map(|(l, n)| l.abs() * n)
                    .sum::<f64>();
            let min_eig = HermitianMatrix::combination(Some(a), &lambda, family).min_eig()?;
            Ok((min_eig >= -spec.tol * scale).then_some(GridPoint {
                index,
                lambda,
                min_eig,
            }))
        })
        .collect();
    let mut out = Vec::new();
    for node in nodes {
        if let Some(pt) = node? {
            out.push(pt);
        }
    }
    Ok(out)
}
