use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PencilFamily;
use crate::budget::Budget;
use crate::error::{PencilError, Result};
use crate::forms::vector;
use crate::oracle::{self, ConePoint, Sign};
use crate::report::{CertificateReport, Verdict, Witness};

/// Membership of a vector in `P_j^± ∩ ⋂_{i≠j} Qᵢ`, all values relative to `‖Bᵢ‖` at the
/// normalised vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignCheck {
    /// `sign·⟨B_j x̂, x̂⟩/‖B_j‖`.
    pub margin: f64,
    /// `max_{i≠j} |⟨Bᵢx̂, x̂⟩|/‖Bᵢ‖`.
    pub residual: f64,
}

impl SignCheck {
    pub fn passes(&self, residual_tol: f64, margin_tol: f64) -> bool {
        self.residual <= residual_tol && self.margin >= margin_tol
    }
}

/// Checks a claimed member of `P_j^{sign} ∩ ⋂_{i≠j} Qᵢ`.
pub fn verify_sign_witness(
    f: &PencilFamily,
    j: usize,
    sign: Sign,
    x: &[Complex64],
) -> Result<SignCheck> {
    if j >= f.len() {
        return Err(PencilError::InvalidArgument(format!("index {j} out of range")));
    }
    if x.len() != f.dim() {
        return Err(PencilError::DimMismatch {
            expected: f.dim(),
            found: x.len(),
        });
    }
    let x = vector::normalized(x);
    let mut residual = 0.0f64;
    let mut margin = 0.0;
    for (i, b) in f.members().iter().enumerate() {
        let q = b.form(&x) / b.spectral_norm();
        if i == j {
            margin = sign.value() * q;
        } else {
            residual = residual.max(q.abs());
        }
    }
    Ok(SignCheck { margin, residual })
}

fn best(points: &[ConePoint]) -> Option<&ConePoint> {
    points
        .iter()
        .fold(None, |acc: Option<&ConePoint>, p| match acc {
            Some(a) if a.margin >= p.margin => Some(a),
            _ => Some(p),
        })
}

/// Whether each `B_j` takes both signs on `⋂_{i≠j} Qᵢ`.
///
/// The property is existential, so failure to find a sign class is INCONCLUSIVE (flag
/// `ONE_SIGNED` with the index), never REFUTED.
pub fn is_indefinite_set(f: &PencilFamily, budget: &Budget) -> Result<CertificateReport> {
    let m = f.len();
    if m < 2 {
        return Err(PencilError::InvalidArgument(
            "indefinite sets need at least two members".into(),
        ));
    }
    let mut report = CertificateReport::new("indefinite_set", Verdict::Confirmed, budget)
        .with_resolution(format!(
            "{} restarts per sign class and member",
            budget.restarts
        ));
    for j in 0..m {
        let cons = f.others(&[j]);
        let b = f.get(j);
        let plus = oracle::harvest_cone_points(b, Sign::Plus, &cons, &budget.child(100 + 2 * j as u64))?;
        let minus = oracle::harvest_cone_points(b, Sign::Minus, &cons, &budget.child(101 + 2 * j as u64))?;
        report = report
            .with_value(&format!("plus_points_{j}"), plus.len() as f64)
            .with_value(&format!("minus_points_{j}"), minus.len() as f64);
        match (best(&plus), best(&minus)) {
            (Some(p), Some(n)) => {
                report = report.with_witness(Witness::SignPair {
                    index: j,
                    x_plus: p.x.clone(),
                    x_minus: n.x.clone(),
                    value_plus: b.form(&p.x) / b.spectral_norm(),
                    value_minus: b.form(&n.x) / b.spectral_norm(),
                });
            }
            _ => {
                report.verdict = Verdict::Inconclusive;
                report = report.with_flag(&format!("ONE_SIGNED:{j}"));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::HermitianMatrix;

    #[test]
    fn psd_member_is_inconclusive() {
        let f = PencilFamily::new(vec![
            HermitianMatrix::diag(&[1.0, -1.0]),
            HermitianMatrix::diag(&[1.0, 1.0]),
        ])
        .unwrap();
        let r = is_indefinite_set(&f, &Budget::default().with_restarts(8)).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.has_flag("ONE_SIGNED:1"));
    }

    #[test]
    fn diagonal_pair_is_indefinite() {
        let f = PencilFamily::new(vec![
            HermitianMatrix::diag(&[1.0, -1.0, 0.0]),
            HermitianMatrix::diag(&[0.0, 1.0, -1.0]),
        ])
        .unwrap();
        let r = is_indefinite_set(&f, &Budget::default().with_restarts(8)).unwrap();
        assert_eq!(r.verdict, Verdict::Confirmed);
        for w in &r.witnesses {
            assert!((w.recheck(&f, None).unwrap() - w.stored_value()).abs() < 1e-12);
            assert!(w.stored_value() > 1e-7);
        }
    }
}
