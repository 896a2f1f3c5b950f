use crate::error::{PencilError, Result};
use crate::forms::HermitianMatrix;

/// Ordered family `(B₁, …, Bₘ)` of nonzero Hermitian matrices of equal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilFamily {
    members: Vec<HermitianMatrix>,
}

impl PencilFamily {
    pub fn new(members: Vec<HermitianMatrix>) -> Result<Self> {
        let first = members.first().ok_or_else(|| {
            PencilError::InvalidArgument("a family needs at least one member".into())
        })?;
        let n = first.dim();
        for (i, b) in members.iter().enumerate() {
            if b.dim() != n {
                return Err(PencilError::DimMismatch {
                    expected: n,
                    found: b.dim(),
                });
            }
            if b.spectral_norm() == 0.0 {
                return Err(PencilError::InvalidArgument(format!(
                    "member {i} is the zero matrix"
                )));
            }
        }
        Ok(Self { members })
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn members(&self) -> &[HermitianMatrix] {
        &self.members
    }

    pub fn get(&self, i: usize) -> &HermitianMatrix {
        &self.members[i]
    }

    /// Spectral norms `‖Bᵢ‖`.
    pub fn norms(&self) -> Vec<f64> {
        self.members.iter().map(|b| b.spectral_norm()).collect()
    }

    pub fn max_norm(&self) -> f64 {
        self.norms().into_iter().fold(0.0, f64::max)
    }

    /// Members other than those listed in `skip`, in order.
    pub fn others(&self, skip: &[usize]) -> Vec<HermitianMatrix> {
        self.members
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .map(|(_, b)| b.clone())
            .collect()
    }

    /// The subfamily with the given indices, in the given order.
    pub fn subfamily(&self, indices: &[usize]) -> Result<Self> {
        let mut members = Vec::with_capacity(indices.len());
        for &i in indices {
            let b = self.members.get(i).ok_or_else(|| {
                PencilError::InvalidArgument(format!("index {i} out of range"))
            })?;
            members.push(b.clone());
        }
        Self::new(members)
    }

    /// `Σ μᵢBᵢ`.
    pub fn combination(&self, mu: &[f64]) -> HermitianMatrix {
        HermitianMatrix::combination(None, mu, &self.members)
    }

    /// `(c₁B₁, …, cₘBₘ)`.
    pub fn rescaled(&self, c: &[f64]) -> Result<Self> {
        Self::new(
            self.members
                .iter()
                .zip(c)
                .map(|(b, &ci)| b.scaled(ci))
                .collect(),
        )
    }
}
