//! Certificate reports shared by every certifier.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{PencilError, Result};
use crate::forms::vector::{self, CVec};
use crate::forms::HermitianMatrix;
use crate::indefiniteness::{phase_sine, psd_span_margin, PencilFamily, PlaneSection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Confirmed at the search resolution recorded in the report.
    Confirmed,
    /// Refuted by the attached witness.
    Refuted,
    Inconclusive,
}

/// Evidence attached to a report. Each refuting witness carries the number it violates,
/// and [`Witness::recheck`] recomputes that number from the stored vectors alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Coefficients `μ` with `Σ μᵢBᵢ` semidefinite. `margin` is
    /// `min(−λ_min, λ_max)/‖Σ μᵢBᵢ‖`, nonpositive up to tolerance.
    Semidefinite { mu: Vec<f64>, margin: f64 },
    /// Unit vector on the common neutral cone where `⟨Ax,x⟩ = value < 0`.
    NegativeNeutral { x: CVec, value: f64, residual: f64 },
    /// Unit vector on the common neutral cone with its residual `Σ qᵢ²`.
    NeutralVector { x: CVec, residual: f64 },
    /// Unit vectors of both sign classes of member `index` on the neutral cones of the
    /// others. Values are relative to `‖B_index‖`.
    SignPair {
        index: usize,
        x_plus: CVec,
        x_minus: CVec,
        value_plus: f64,
        value_minus: f64,
    },
    /// `x₊ ∈ Pᵢ⁺`, `x₋ ∈ Pᵢ⁻` on `Qⱼ ∩ Q_k` whose cross terms
    /// `cⱼ = ⟨Bⱼx₊,x₋⟩`, `c_k = ⟨B_k x₊,x₋⟩` have phases differing by `asin(sine)` mod π.
    PhaseViolation {
        i: usize,
        j: usize,
        k: usize,
        x_plus: CVec,
        x_minus: CVec,
        c_j: Complex64,
        c_k: Complex64,
        sine: f64,
    },
    /// A plane missing the triple neutral intersection on which no nonzero combination
    /// of the trio is positive semidefinite. `psd_margin` is the best normalised
    /// `λ_min/‖M‖_F` over the span (negative when no PSD member exists).
    Plane {
        trio: [usize; 3],
        section: PlaneSection,
        triple_min: f64,
        psd_margin: f64,
    },
}

impl Witness {
    /// Recomputes the witness's headline number from its stored data.
    pub fn recheck(&self, family: &PencilFamily, a: Option<&HermitianMatrix>) -> Result<f64> {
        let check = |x: &[Complex64]| -> Result<()> {
            if x.len() != family.dim() {
                return Err(PencilError::DimMismatch {
                    expected: family.dim(),
                    found: x.len(),
                });
            }
            Ok(())
        };
        match self {
            Witness::Semidefinite { mu, .. } => {
                if mu.len() != family.len() {
                    return Err(PencilError::DimMismatch {
                        expected: family.len(),
                        found: mu.len(),
                    });
                }
                Ok(crate::indefiniteness::combination_margin(family, mu))
            }
            Witness::NegativeNeutral { x, .. } => {
                check(x)?;
                let a = a.ok_or_else(|| {
                    PencilError::InvalidArgument("recheck needs the base matrix".into())
                })?;
                Ok(a.form(&vector::normalized(x)))
            }
            Witness::NeutralVector { x, .. } => {
                check(x)?;
                Ok(crate::oracle::neutral_residual(family.members(), x))
            }
            Witness::SignPair {
                index,
                x_plus,
                x_minus,
                ..
            } => {
                check(x_plus)?;
                check(x_minus)?;
                let b = family.get(*index);
                let s = b.spectral_norm();
                let vp = b.form(&vector::normalized(x_plus)) / s;
                let vm = b.form(&vector::normalized(x_minus)) / s;
                Ok(vp.min(-vm))
            }
            Witness::PhaseViolation {
                j,
                k,
                x_plus,
                x_minus,
                ..
            } => {
                check(x_plus)?;
                check(x_minus)?;
                let cj = vector::inner(&family.get(*j).apply(x_plus), x_minus);
                let ck = vector::inner(&family.get(*k).apply(x_plus), x_minus);
                Ok(phase_sine(cj, ck))
            }
            Witness::Plane { trio, section, .. } => {
                check(&section.u)?;
                let fresh = PlaneSection::new(
                    section.u.clone(),
                    section.v.clone(),
                    &[family.get(trio[0]), family.get(trio[1]), family.get(trio[2])],
                )?;
                let m = &fresh.restricted_forms;
                Ok(psd_span_margin(&m[0], &m[1], &m[2]))
            }
        }
    }

    /// The stored headline number that [`Witness::recheck`] reproduces.
    pub fn stored_value(&self) -> f64 {
        match self {
            Witness::Semidefinite { margin, .. } => *margin,
            Witness::NegativeNeutral { value, .. } => *value,
            Witness::NeutralVector { residual, .. } => *residual,
            Witness::SignPair {
                value_plus,
                value_minus,
                ..
            } => value_plus.min(-value_minus),
            Witness::PhaseViolation { sine, .. } => *sine,
            Witness::Plane { psd_margin, .. } => *psd_margin,
        }
    }
}

/// Outcome of a certification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    /// Name of the certified property.
    pub property: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    /// Human-readable description of the search resolution.
    pub resolution: String,
    /// Named scalars backing the verdict.
    pub achieved: BTreeMap<String, f64>,
    pub flags: Vec<String>,
    pub budget: Budget,
}

impl CertificateReport {
    pub(crate) fn new(property: &str, verdict: Verdict, budget: &Budget) -> Self {
        Self {
            property: property.to_string(),
            verdict,
            witnesses: Vec::new(),
            resolution: String::new(),
            achieved: BTreeMap::new(),
            flags: Vec::new(),
            budget: *budget,
        }
    }

    pub(crate) fn with_resolution(mut self, text: impl Into<String>) -> Self {
        self.resolution = text.into();
        self
    }

    pub(crate) fn with_value(mut self, name: &str, value: f64) -> Self {
        self.achieved.insert(name.to_string(), value);
        self
    }

    pub(crate) fn with_witness(mut self, w: Witness) -> Self {
        self.witnesses.push(w);
        self
    }

    pub(crate) fn with_flag(mut self, flag: &str) -> Self {
        self.flags.push(flag.to_string());
        self
    }

    pub fn is_confirmed(&self) -> bool {
        self.verdict == Verdict::Confirmed
    }

    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }
}
