use serde::{Deserialize, Serialize};

/// Scalar field searched by the sampling routines.
///
/// Matrices are always complex Hermitian; `Real` restricts the searched vectors to ℝⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    #[default]
    Complex,
    Real,
}

/// Search budget shared by every sampling-based routine.
///
/// Two runs with equal budgets (including `seed`) produce identical results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    /// Random restarts of each sphere search.
    pub restarts: usize,
    /// Inner iterations per penalty stage.
    pub iters: usize,
    /// Size of the quasi-uniform μ-sphere grid (weak indefiniteness).
    pub grid: usize,
    /// Witness pairs harvested per index triple (strong indefiniteness).
    pub pairs: usize,
    /// Planes sampled by the HM check.
    pub planes: usize,
    /// 2-sphere grid used when searching PSD combinations of 2×2 forms.
    pub sphere_grid: usize,
    pub seed: u64,
    pub field: Field,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            restarts: 64,
            iters: 500,
            grid: 4096,
            pairs: 16,
            planes: 256,
            sphere_grid: 20_000,
            seed: 0,
            field: Field::Complex,
        }
    }
}

impl Budget {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_iters(mut self, iters: usize) -> Self {
        self.iters = iters;
        self
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    /// Derives an independent seed for sub-task `stream`.
    pub(crate) fn stream(&self, stream: u64) -> u64 {
        splitmix(self.seed ^ splitmix(stream.wrapping_add(0x9E37_79B9_7F4A_7C15)))
    }

    /// A copy of this budget whose seed is derived for sub-task `stream`.
    pub(crate) fn child(&self, stream: u64) -> Budget {
        Budget {
            seed: self.stream(stream),
            ..*self
        }
    }
}

pub(crate) fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
