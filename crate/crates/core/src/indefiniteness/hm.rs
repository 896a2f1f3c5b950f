use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::plane::{psd_in_span_2x2, psd_span_margin, PlaneSection};
use super::strong::{harvest_pool, PairPool};
use super::{is_weakly_indefinite, PencilFamily};
use crate::budget::Budget;
use crate::error::{PencilError, Result};
use crate::forms::vector::{self, CVec};
use crate::forms::choose_theta;
use crate::oracle::sphere::random_unit;
use crate::report::{CertificateReport, Verdict, Witness};

/// Planes whose normalised triple-neutral residual exceeds this miss `Qᵢ∩Qⱼ∩Q_k`.
const TRIVIAL_INTERSECTION: f64 = 1e-10;

fn trios(m: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            for k in (j + 1)..m {
                out.push([i, j, k]);
            }
        }
    }
    out
}

/// Outcome of one plane for one trio: `None` when the plane passes.
fn test_plane(f: &PencilFamily, u: &[num_complex::Complex64], v: &[num_complex::Complex64], trio: [usize; 3], grid: usize) -> Result<Option<Witness>> {
    let forms = [f.get(trio[0]), f.get(trio[1]), f.get(trio[2])];
    let section = PlaneSection::from_span(u, v, &forms)?;
    let scales = [
        forms[0].spectral_norm(),
        forms[1].spectral_norm(),
        forms[2].spectral_norm(),
    ];
    let triple_min = section.common_zero_min(&scales);
    if triple_min <= TRIVIAL_INTERSECTION {
        return Ok(None);
    }
    let r = &section.restricted_forms;
    if psd_in_span_2x2(&r[0], &r[1], &r[2], grid).is_some() {
        return Ok(None);
    }
    let psd_margin = psd_span_margin(&r[0], &r[1], &r[2]);
    Ok(Some(Witness::Plane {
        trio,
        section,
        triple_min,
        psd_margin,
    }))
}

/// Plane condition (HM): on every real plane missing `Qᵢ∩Qⱼ∩Q_k`, some nonzero
/// combination of the trio is positive semidefinite and nonzero.
///
/// Weak indefiniteness is checked first. Then `budget.planes` planes are tested against
/// every trio: half spanned by random vectors, half of the form
/// `span_ℝ{x₊, e^{iθ}x₋}` with `x± ∈ Pᵢ^± ∩ Qⱼ ∩ Q_k` and `θ` cancelling the `Bⱼ` cross
/// term, where failures concentrate.
pub fn hm_check(f: &PencilFamily, budget: &Budget) -> Result<CertificateReport> {
    let m = f.len();
    if m < 3 {
        return Err(PencilError::InvalidArgument(
            "the plane condition needs at least three members".into(),
        ));
    }
    let weak = is_weakly_indefinite(f, budget)?;
    let mut report = CertificateReport::new("plane_condition", weak.verdict, budget)
        .with_value("weak_margin_min", weak.achieved["margin_min"]);
    if weak.verdict != Verdict::Confirmed {
        report.witnesses = weak.witnesses;
        return Ok(report
            .with_resolution(weak.resolution)
            .with_flag("NOT_WEAKLY_INDEFINITE"));
    }
    let n = f.dim();
    let random_count = budget.planes / 2;
    let built_count = budget.planes - random_count;

    let mut planes: Vec<(CVec, CVec)> = Vec::with_capacity(budget.planes);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.stream(7_000_000));
    for _ in 0..random_count {
        let a = random_unit(&mut rng, n, budget.field);
        let b = random_unit(&mut rng, n, budget.field);
        planes.push((a, b));
    }

    // Role tuples (i: sign index, j: phase-cancelled, k: other).
    let mut roles = Vec::new();
    let mut pools: Vec<((usize, usize, usize), PairPool)> = Vec::new();
    for i in 0..m {
        for j in 0..m {
            for k in (j + 1)..m {
                if j == i || k == i {
                    continue;
                }
                let pool = harvest_pool(f, i, &[j, k], budget)?;
                if !pool.plus.is_empty() && !pool.minus.is_empty() {
                    let idx = pools.len();
                    pools.push(((i, j, k), pool));
                    roles.push((idx, j));
                    roles.push((idx, k));
                }
            }
        }
    }
    let mut built = 0;
    if !roles.is_empty() {
        for p in 0..built_count {
            let (idx, cancel) = roles[p % roles.len()];
            let c = p / roles.len();
            let pool = &pools[idx].1;
            let xp = &pool.plus[c % pool.plus.len()];
            let xm = &pool.minus[(c + c / pool.plus.len()) % pool.minus.len()];
            let theta = choose_theta(f.get(cancel), xp, xm)?;
            let z = vector::scale(num_complex::Complex64::from_polar(1.0, theta), xm);
            planes.push((xp.clone(), z));
            built += 1;
        }
    } else {
        report = report.with_flag("NO_SIGN_PAIRS");
    }

    let all_trios = trios(m);
    let results: Vec<Result<Option<Witness>>> = planes
        .par_iter()
        .map(|(u, v)| {
            for &trio in &all_trios {
                match test_plane(f, u, v, trio, budget.sphere_grid) {
                    Ok(Some(w)) => return Ok(Some(w)),
                    Ok(None) => {}
                    // Degenerate spans carry no information.
                    Err(PencilError::InvalidArgument(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok(None)
        })
        .collect();
    let mut refuting = 0usize;
    let mut first: Option<Witness> = None;
    for r in results {
        if let Some(w) = r? {
            refuting += 1;
            if first.is_none() {
                first = Some(w);
            }
        }
    }
    report = report
        .with_resolution(format!(
            "{}; {} planes ({} random, {} built from sign pairs) against {} trios, {}-point sphere grid",
            weak.resolution,
            planes.len(),
            random_count,
            built,
            all_trios.len(),
            budget.sphere_grid
        ))
        .with_value("refuting_planes", refuting as f64);
    if let Some(w) = first {
        report.verdict = Verdict::Refuted;
        report = report.with_witness(w);
    }
    Ok(report)
}
