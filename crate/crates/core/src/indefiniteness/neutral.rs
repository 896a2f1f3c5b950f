use super::PencilFamily;
use crate::budget::Budget;
use crate::error::Result;
use crate::forms::vector::{self, CVec};
use crate::forms::{eigenvalues, HermitianMatrix};
use crate::oracle;
use crate::report::{CertificateReport, Verdict, Witness};

/// Relative singular-value threshold for the rank of `[B₁x … Bₘx]`.
const RANK_TOL: f64 = 1e-8;

/// Projective separation below which two harvested neutral vectors count as equal.
const DISTINCT_TOL: f64 = 1e-3;

fn constraint_set(f: &PencilFamily, exclude: Option<usize>) -> Vec<HermitianMatrix> {
    match exclude {
        Some(j) => f.others(&[j]),
        None => f.members().to_vec(),
    }
}

/// A unit vector in `⋂_{i≠exclude} Qᵢ`, if the search reaches
/// `Σ qᵢ² ≤ (1e-8·max‖Bᵢ‖)²`.
pub fn common_neutral_vector(
    f: &PencilFamily,
    exclude: Option<usize>,
    budget: &Budget,
) -> Result<Option<CVec>> {
    let cons = constraint_set(f, exclude);
    if cons.is_empty() {
        return Ok(Some(vector::normalized(&vec![
            num_complex::Complex64::new(1.0, 0.0);
            f.dim()
        ])));
    }
    let best = oracle::min_neutral_residual(&cons, budget)?;
    Ok((best.value <= oracle::residual_threshold(&cons)).then_some(best.x))
}

/// Every distinct common neutral vector reached by the restarts, in restart order.
/// Vectors within projective distance 1e-3 of an earlier one are dropped.
pub fn distinct_neutral_vectors(
    f: &PencilFamily,
    exclude: Option<usize>,
    budget: &Budget,
) -> Result<Vec<CVec>> {
    let cons = constraint_set(f, exclude);
    if cons.is_empty() {
        return Ok(common_neutral_vector(f, exclude, budget)?.into_iter().collect());
    }
    let limit = oracle::residual_threshold(&cons);
    let mut out: Vec<CVec> = Vec::new();
    for c in oracle::neutral_candidates(&cons, budget)? {
        if c.value <= limit
            && out
                .iter()
                .all(|y| vector::projective_distance(y, &c.x) > DISTINCT_TOL)
        {
            out.push(c.x);
        }
    }
    Ok(out)
}

/// Singular values of the real-linear map `μ ↦ Σ μᵢBᵢx`, descending.
fn stack_singular_values(f: &PencilFamily, x: &[num_complex::Complex64]) -> Result<Vec<f64>> {
    let cols: Vec<CVec> = f.members().iter().map(|b| b.apply(x)).collect();
    let m = cols.len();
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| vector::real_inner(&cols[i], &cols[j])).collect())
        .collect();
    let gram = HermitianMatrix::from_real_rows(&rows)?;
    let mut sv: Vec<f64> = eigenvalues(&gram)?
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    sv.reverse();
    Ok(sv)
}

/// Sufficient test for weak indefiniteness: a common neutral vector `x` at which
/// `B₁x, …, Bₘx` are linearly independent over ℝ.
///
/// CONFIRMED when some harvested `x` gives full rank (threshold `1e-8·σ_max`);
/// INCONCLUSIVE otherwise, since the condition is not necessary.
pub fn sufficient_weak_check(f: &PencilFamily, budget: &Budget) -> Result<CertificateReport> {
    let m = f.len();
    let candidates = distinct_neutral_vectors(f, None, budget)?;
    let report = CertificateReport::new("independent_neutral_images", Verdict::Inconclusive, budget)
        .with_resolution(format!(
            "{} restarts of the neutral residual search",
            budget.restarts
        ));
    if candidates.is_empty() {
        let best = oracle::min_neutral_residual(f.members(), budget)?;
        return Ok(report
            .with_value("neutral_residual_min", best.value)
            .with_flag("NO_COMMON_NEUTRAL_VECTOR"));
    }
    let mut best: Option<(usize, f64, CVec)> = None;
    for x in candidates {
        let sv = stack_singular_values(f, &x)?;
        let top = sv[0];
        let rank = sv.iter().filter(|s| **s > RANK_TOL * top).count();
        let ratio = if top > 0.0 { sv[m - 1] / top } else { 0.0 };
        if best.as_ref().map_or(true, |(r, q, _)| (rank, ratio) > (*r, *q)) {
            best = Some((rank, ratio, x));
        }
        if rank == m {
            break;
        }
    }
    let (rank, ratio, x) = best.expect("non-empty");
    let residual = oracle::neutral_residual(f.members(), &x);
    let mut report = report
        .with_value("rank", rank as f64)
        .with_value("singular_ratio", ratio)
        .with_witness(Witness::NeutralVector { x, residual });
    if rank == m {
        report.verdict = Verdict::Confirmed;
    }
    Ok(report)
}
