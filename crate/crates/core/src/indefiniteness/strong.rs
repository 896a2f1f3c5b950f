use num_complex::Complex64;

use super::{is_weakly_indefinite, PencilFamily};
use crate::budget::Budget;
use crate::error::{PencilError, Result};
use crate::forms::vector::{self, CVec};
use crate::oracle::{self, Sign};
use crate::report::{CertificateReport, Verdict, Witness};

/// Minimum relative sign margin of a harvested pair used in the phase test.
pub const PAIR_MARGIN: f64 = 1e-3;
/// Phase sines at or below this pass.
const PHASE_PASS: f64 = 1e-9;
/// Phase sines above this refute.
const PHASE_FAIL: f64 = 1e-6;
/// Cross terms below this (relative to `‖B‖`) count as zero.
const CROSS_ZERO: f64 = 1e-8;

/// `|sin(arg cⱼ − arg c_k)| = |Im(cⱼ·conj(c_k))|/(|cⱼ||c_k|)`, zero when either vanishes.
///
/// A common `θ` with `Re(e^{−iθ}cⱼ) = Re(e^{−iθ}c_k) = 0` exists iff this is zero.
pub fn phase_sine(cj: Complex64, ck: Complex64) -> f64 {
    let d = cj.norm() * ck.norm();
    if d == 0.0 {
        return 0.0;
    }
    ((cj * ck.conj()).im.abs() / d).min(1.0)
}

/// Harvested unit vectors of `Pᵢ^±` on `⋂ Q_l` over `others`.
pub(crate) struct PairPool {
    pub plus: Vec<CVec>,
    pub minus: Vec<CVec>,
}

pub(crate) fn harvest_pool(
    f: &PencilFamily,
    i: usize,
    others: &[usize],
    budget: &Budget,
) -> Result<PairPool> {
    let m = f.len() as u64;
    let key = others
        .iter()
        .fold(i as u64, |acc, &o| acc * m + o as u64);
    let cons: Vec<_> = others.iter().map(|&o| f.get(o).clone()).collect();
    let local = budget.with_restarts(budget.pairs.max(1));
    let take = |sign: Sign, stream: u64| -> Result<Vec<CVec>> {
        Ok(
            oracle::harvest_cone_points(f.get(i), sign, &cons, &local.child(stream))?
                .into_iter()
                .filter(|p| p.margin >= PAIR_MARGIN)
                .map(|p| p.x)
                .collect(),
        )
    };
    Ok(PairPool {
        plus: take(Sign::Plus, 2_000_000 + 2 * key)?,
        minus: take(Sign::Minus, 2_000_001 + 2 * key)?,
    })
}

/// Strong indefiniteness: weak indefiniteness plus the common-phase condition on cross
/// terms.
///
/// For every `i` and every pair `j < k` of other indices, sign pairs
/// `x± ∈ Pᵢ^± ∩ Qⱼ ∩ Q_k` are harvested (`budget.pairs` restarts per sign, margin at
/// least 1e-3) and every combination is tested: the cross terms `⟨Bⱼx₊,x₋⟩` and
/// `⟨B_k x₊,x₋⟩` must have equal phase mod π. A sine above 1e-6 refutes. Sines in
/// `(1e-9, 1e-6]` and triples without sign pairs make the verdict INCONCLUSIVE.
/// Pairs of members (m = 2) reduce to weak indefiniteness.
pub fn is_strongly_indefinite(f: &PencilFamily, budget: &Budget) -> Result<CertificateReport> {
    let m = f.len();
    if m < 2 {
        return Err(PencilError::InvalidArgument(
            "strong indefiniteness needs at least two members".into(),
        ));
    }
    let weak = is_weakly_indefinite(f, budget)?;
    let mut report = CertificateReport::new("strongly_indefinite", weak.verdict, budget)
        .with_value("weak_margin_min", weak.achieved["margin_min"]);
    if weak.verdict != Verdict::Confirmed {
        report.witnesses = weak.witnesses;
        return Ok(report
            .with_resolution(weak.resolution)
            .with_flag("NOT_WEAKLY_INDEFINITE"));
    }
    if m == 2 {
        return Ok(report
            .with_resolution(weak.resolution)
            .with_flag("PAIR"));
    }
    let norms = f.norms();
    let mut tested = 0usize;
    let mut starved = Vec::new();
    let mut borderline = 0usize;
    let mut worst: Option<Witness> = None;
    let mut worst_sine = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            for k in (j + 1)..m {
                if j == i || k == i {
                    continue;
                }
                let pool = harvest_pool(f, i, &[j, k], budget)?;
                if pool.plus.is_empty() || pool.minus.is_empty() {
                    starved.push(format!("STARVED:{i}:{j}:{k}"));
                    continue;
                }
                for xp in &pool.plus {
                    let bj = f.get(j).apply(xp);
                    let bk = f.get(k).apply(xp);
                    for xm in &pool.minus {
                        tested += 1;
                        let cj = vector::inner(&bj, xm);
                        let ck = vector::inner(&bk, xm);
                        if cj.norm() <= CROSS_ZERO * norms[j] || ck.norm() <= CROSS_ZERO * norms[k] {
                            continue;
                        }
                        let sine = phase_sine(cj, ck);
                        if sine > PHASE_PASS && sine <= PHASE_FAIL {
                            borderline += 1;
                        }
                        if sine > worst_sine {
                            worst_sine = sine;
                            worst = Some(Witness::PhaseViolation {
                                i,
                                j,
                                k,
                                x_plus: xp.clone(),
                                x_minus: xm.clone(),
                                c_j: cj,
                                c_k: ck,
                                sine,
                            });
                        }
                    }
                }
            }
        }
    }
    report = report
        .with_resolution(format!(
            "{}; {} sign pairs per index triple from {} restarts per sign",
            weak.resolution, budget.pairs, budget.pairs
        ))
        .with_value("pairs_tested", tested as f64)
        .with_value("max_phase_sine", worst_sine)
        .with_value("borderline_pairs", borderline as f64);
    if worst_sine > PHASE_FAIL {
        report.verdict = Verdict::Refuted;
        return Ok(report.with_witness(worst.expect("recorded with the sine")));
    }
    if !starved.is_empty() || borderline > 0 {
        report.verdict = Verdict::Inconclusive;
        for s in &starved {
            report = report.with_flag(s);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::HermitianMatrix;

    #[test]
    fn phase_sine_cases() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(phase_sine(c(1.0, 0.0), c(-2.0, 0.0)), 0.0);
        assert_eq!(phase_sine(c(0.0, 0.0), c(1.0, 1.0)), 0.0);
        assert!((phase_sine(c(1.0, 0.0), c(0.0, 3.0)) - 1.0).abs() < 1e-15);
        assert!((phase_sine(c(1.0, 1.0), c(1.0, 0.0)) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn weakly_indefinite_pair_is_strong() {
        let f = PencilFamily::new(vec![
            HermitianMatrix::diag(&[1.0, -1.0, 0.0]),
            HermitianMatrix::diag(&[0.0, 1.0, -1.0]),
        ])
        .unwrap();
        let r = is_strongly_indefinite(&f, &Budget::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Confirmed);
        assert!(r.has_flag("PAIR"));
    }
}
