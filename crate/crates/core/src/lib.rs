//! Decide and solve multi-parameter linear matrix inequalities
//!
//! ```text
//! A + λ₁B₁ + … + λₘBₘ ⪰ 0
//! ```
//!
//! for dense complex Hermitian matrices. The crate is organised in layers:
//!
//! - [`forms`]: Hermitian matrices, a cyclic Jacobi eigensolver, quadratic forms and the
//!   two geometric primitives (phase selection and neutral-segment roots) used by every
//!   constructive step.
//! - [`ks`]: the single-parameter case, `{λ : A + λB ⪰ 0}` as an exact interval.
//! - [`oracle`]: brute-force ground truth (λ-grids) and constrained minimisation on the
//!   unit sphere intersected with neutral cones.
//! - [`indefiniteness`]: certifiers for weakly indefinite, indefinite and strongly
//!   indefinite families and for the plane condition (HM).
//! - [`solver`]: the inductive construction of a feasible λ.
//! - [`gen`]: reproducible instance generators.
//!
//! Inner products are linear in the first slot and conjugate-linear in the second:
//! `⟨u, v⟩ = Σ uₖ·conj(vₖ)`.

pub mod budget;
pub mod error;
pub mod forms;
pub mod gen;
pub mod indefiniteness;
pub mod ks;
pub mod oracle;
pub mod report;
pub mod solver;

pub use budget::{Budget, Field};
pub use error::{PencilError, Result};
pub use forms::{
    choose_theta, classify, eig, neutral_direction, quadratic_form, segment_neutral_root,
    Classification, ConeWitness, CVec, DefKind, EigenDecomposition, HermitianMatrix,
};

pub use indefiniteness::PencilFamily;
pub use ks::Interval;
pub use report::{CertificateReport, Verdict, Witness};
pub use solver::{FeasiblePoint, Order, SolveOptions};

pub use num_complex::Complex64;
