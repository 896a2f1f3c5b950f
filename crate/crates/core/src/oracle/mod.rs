//! Brute-force ground truth: λ-grid sweeps and constrained minimisation on the unit
//! sphere intersected with neutral cones.
//!
//! Every search here is seed-deterministic. Restarts run in parallel with independent
//! streams derived from [`Budget::seed`] and are merged in restart order, ties going to
//! the lowest index.

mod grid;
mod linalg;
pub(crate) mod sphere;

pub use grid::{grid_feasibility, GridPoint, GridSpec};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{PencilError, Result};
use crate::forms::vector::CVec;
use crate::forms::HermitianMatrix;
use sphere::{Form, Ratio};

/// Sign class `P⁺ = {⟨Bx,x⟩ > 0}` or `P⁻ = {⟨Bx,x⟩ < 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Relative threshold `δ/‖B‖` defining a strict sign class.
pub const SIGN_DELTA: f64 = 1e-6;

/// Margin (relative to `‖B‖`) a harvested cone point is pushed towards.
const HARVEST_GOAL: f64 = 0.05;

/// Result of a constrained sphere minimisation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereMin {
    pub value: f64,
    pub argmin: CVec,
    /// `Σ qᵢ(argmin)²` over the constraints.
    pub residual: f64,
    /// `residual ≤ (1e-8·max‖Bᵢ‖)²`.
    pub feasible: bool,
}

/// Feasibility threshold on `Σ qᵢ²` for a constraint set.
pub fn residual_threshold(constraints: &[HermitianMatrix]) -> f64 {
    let scale = constraints
        .iter()
        .fold(0.0f64, |m, c| m.max(c.spectral_norm()));
    (1e-8 * scale).powi(2)
}

/// `Σ qᵢ(x)²` for unit-normalised `x`.
pub fn neutral_residual(constraints: &[HermitianMatrix], x: &[num_complex::Complex64]) -> f64 {
    let x = crate::forms::vector::normalized(x);
    constraints.iter().map(|c| c.form(&x).powi(2)).sum()
}

fn normalized_forms(constraints: &[HermitianMatrix]) -> Vec<HermitianMatrix> {
    constraints
        .iter()
        .filter(|c| c.spectral_norm() > 0.0)
        .map(|c| c.scaled(1.0 / c.spectral_norm()))
        .collect()
}

fn check_dims(n: usize, mats: &[HermitianMatrix]) -> Result<()> {
    for c in mats {
        if c.dim() != n {
            return Err(PencilError::DimMismatch {
                expected: n,
                found: c.dim(),
            });
        }
    }
    Ok(())
}

fn rng_for(budget: &Budget, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(budget.stream(stream))
}

/// Minimises `⟨Mx,x⟩` over unit `x` with `⟨Cᵢx,x⟩ = 0` for every constraint.
///
/// Each restart runs the penalty ladder ρ = 10…10⁴, restores feasibility by Gauss–Newton
/// and polishes along the variety. The best feasible restart wins; when no restart is
/// feasible the one with the smallest residual is returned with `feasible = false`.
pub fn min_on_sphere(
    objective: &HermitianMatrix,
    constraints: &[HermitianMatrix],
    budget: &Budget,
) -> Result<SphereMin> {
    let n = objective.dim();
    check_dims(n, constraints)?;
    let cons = normalized_forms(constraints);
    let scale = objective.spectral_norm();
    let obj_n = if scale > 0.0 {
        objective.scaled(1.0 / scale)
    } else {
        objective.clone()
    };
    let threshold = residual_threshold(constraints);
    let runs: Vec<SphereMin> = (0..budget.restarts.max(1) as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(budget, r);
            let mut x = sphere::random_unit(&mut rng, n, budget.field);
            let form = Form {
                m: &obj_n,
                weight: 1.0,
            };
            let res = sphere::penalty_then_restore(&form, &cons, &mut x, budget.iters, budget.field);
            if res <= sphere::RESTORE_TOL {
                sphere::variety_descent(&form, &cons, &mut x, budget.iters, budget.field, None);
            }
            let residual = neutral_residual(constraints, &x);
            SphereMin {
                value: objective.form(&x),
                argmin: x,
                residual,
                feasible: residual <= threshold,
            }
        })
        .collect();
    Ok(pick_best(runs))
}

fn pick_best(runs: Vec<SphereMin>) -> SphereMin {
    let any_feasible = runs.iter().any(|r| r.feasible);
    let mut best: Option<SphereMin> = None;
    for r in runs {
        let better = match &best {
            None => true,
            Some(b) if any_feasible => r.feasible && (!b.feasible || r.value < b.value),
            Some(b) => r.residual < b.residual,
        };
        if better {
            best = Some(r);
        }
    }
    best.expect("at least one restart")
}

/// Smallest `Σ qᵢ(x)²` found over the unit sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeutralSearch {
    pub value: f64,
    pub x: CVec,
}

/// Minimises `Φ(x) = Σ qᵢ(x)²` over the unit sphere.
pub fn min_neutral_residual(
    constraints: &[HermitianMatrix],
    budget: &Budget,
) -> Result<NeutralSearch> {
    let runs = neutral_candidates(constraints, budget)?;
    let mut best = runs[0].clone();
    for r in runs.into_iter().skip(1) {
        if r.value < best.value {
            best = r;
        }
    }
    Ok(best)
}

/// The end point of every restart of the `Φ` minimisation, in restart order.
pub fn neutral_candidates(
    constraints: &[HermitianMatrix],
    budget: &Budget,
) -> Result<Vec<NeutralSearch>> {
    let n = match constraints.first() {
        Some(c) => c.dim(),
        None => {
            return Err(PencilError::InvalidArgument(
                "neutral search needs at least one form".into(),
            ))
        }
    };
    check_dims(n, constraints)?;
    let cons = normalized_forms(constraints);
    Ok((0..budget.restarts.max(1) as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(budget, r);
            let mut x = sphere::random_unit(&mut rng, n, budget.field);
            sphere::neutral_residual_descent(&cons, &mut x, 4 * budget.iters, budget.field);
            NeutralSearch {
                value: neutral_residual(constraints, &x),
                x,
            }
        })
        .collect())
}

/// A point of `P^±(target) ∩ ⋂Q(Cᵢ)` found by [`harvest_cone_points`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConePoint {
    pub x: CVec,
    /// `sign·⟨Tx,x⟩/‖T‖`.
    pub margin: f64,
}

/// Collects unit vectors in the sign class `sign` of `target` lying on every constraint
/// cone.
///
/// Each restart lands on the variety from a random start, then climbs `sign·q_target`
/// along it until the relative margin reaches 0.05. Points with margin above
/// [`SIGN_DELTA`] and residual within the feasibility threshold are kept, in restart
/// order.
pub fn harvest_cone_points(
    target: &HermitianMatrix,
    sign: Sign,
    constraints: &[HermitianMatrix],
    budget: &Budget,
) -> Result<Vec<ConePoint>> {
    let n = target.dim();
    check_dims(n, constraints)?;
    let t_norm = target.spectral_norm();
    if t_norm == 0.0 {
        return Ok(Vec::new());
    }
    let t_n = target.scaled(sign.value() / t_norm);
    let cons = normalized_forms(constraints);
    let threshold = residual_threshold(constraints);
    let runs: Vec<Option<ConePoint>> = (0..budget.restarts.max(1) as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(budget, r);
            let mut x = sphere::random_unit(&mut rng, n, budget.field);
            if !cons.is_empty() {
                sphere::neutral_residual_descent(&cons, &mut x, budget.iters, budget.field);
            }
            if sphere::restore(&mut x, &cons, budget.field) > sphere::RESTORE_TOL {
                return None;
            }
            let climb = Form {
                m: &t_n,
                weight: -1.0,
            };
            let stop = |f: f64| -f >= HARVEST_GOAL;
            sphere::variety_descent(&climb, &cons, &mut x, budget.iters, budget.field, Some(&stop));
            let margin = t_n.form(&x);
            let feasible = neutral_residual(constraints, &x) <= threshold;
            (feasible && margin > SIGN_DELTA).then_some(ConePoint { x, margin })
        })
        .collect();
    Ok(runs.into_iter().flatten().collect())
}

/// Constrained extremum of the ratio `⟨Ax,x⟩/⟨Bx,x⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioExtremum {
    /// `inf` over `P⁺` (sign `Plus`) or `sup` over `P⁻` (sign `Minus`).
    pub value: f64,
    pub witness: CVec,
    /// Number of harvested starting points.
    pub starts: usize,
}

/// Estimates `inf` (sign `Plus`) or `sup` (sign `Minus`) of `⟨Ax,x⟩/⟨Bx,x⟩` over
/// `{sign·⟨Bx,x⟩ > δ} ∩ ⋂Q(Cᵢ)` with `δ = 1e-6·‖B‖`.
///
/// Starting points come from [`harvest_cone_points`]; each is refined by descent along
/// the variety that never leaves the sign class.
pub fn ratio_extremum(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    constraints: &[HermitianMatrix],
    sign: Sign,
    budget: &Budget,
) -> Result<RatioExtremum> {
    check_dims(b.dim(), std::slice::from_ref(a))?;
    let starts = harvest_cone_points(b, sign, constraints, budget)?;
    if starts.is_empty() {
        return Err(PencilError::SamplerStarved {
            what: format!("no point with sign {:?} on the constraint cones", sign),
        });
    }
    let cons = normalized_forms(constraints);
    let threshold = residual_threshold(constraints);
    let ratio = Ratio {
        num: a,
        den: b,
        weight: sign.value(),
        class: sign.value(),
        delta: SIGN_DELTA * b.spectral_norm(),
    };
    let count = starts.len();
    let refined: Vec<(f64, CVec)> = starts
        .into_par_iter()
        .map(|p| {
            let mut x = p.x;
            sphere::variety_descent(&ratio, &cons, &mut x, budget.iters, budget.field, None);
            if neutral_residual(constraints, &x) > threshold {
                // Restoration drifted; fall back to the harvested start.
                return (f64::INFINITY, x);
            }
            (sphere::Objective::value(&ratio, &x), x)
        })
        .collect();
    let (mut best_v, mut best_x) = (f64::INFINITY, None);
    for (v, x) in refined {
        if v < best_v || best_x.is_none() {
            best_v = v;
            best_x = Some(x);
        }
    }
    let witness = best_x.expect("non-empty");
    Ok(RatioExtremum {
        value: a.form(&witness) / b.form(&witness),
        witness,
        starts: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::vector;

    fn small() -> Budget {
        Budget::default().with_restarts(8)
    }

    #[test]
    fn identity_objective_on_a_variety() {
        let c = HermitianMatrix::diag(&[1.0, -1.0, 0.3]);
        let r = min_on_sphere(&HermitianMatrix::identity(3), &[c], &small()).unwrap();
        assert!(r.feasible);
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unconstrained_rayleigh_minimum() {
        let r = min_on_sphere(&HermitianMatrix::diag(&[-1.0, 1.0]), &[], &small()).unwrap();
        assert!((r.value + 1.0).abs() < 1e-10);
        assert!(r.argmin[0].norm() > 1.0 - 1e-8);
    }

    #[test]
    fn constrained_minimum_at_third_axis() {
        let obj = HermitianMatrix::diag(&[1.0, 1.0, -1.0]);
        let c = HermitianMatrix::diag(&[1.0, -1.0, 0.0]);
        let r = min_on_sphere(&obj, &[c], &small()).unwrap();
        assert!(r.feasible);
        assert!((r.value + 1.0).abs() < 1e-9, "{}", r.value);
        assert!(r.argmin[2].norm() > 1.0 - 1e-6);
    }

    #[test]
    fn ratio_examples() {
        let b = HermitianMatrix::diag(&[1.0, -1.0]);
        let i = HermitianMatrix::identity(2);
        let inf = ratio_extremum(&i, &b, &[], Sign::Plus, &small()).unwrap();
        assert!((inf.value - 1.0).abs() < 1e-8, "{}", inf.value);
        let sup = ratio_extremum(&i, &b, &[], Sign::Minus, &small()).unwrap();
        assert!((sup.value + 1.0).abs() < 1e-8, "{}", sup.value);
        for s in [Sign::Plus, Sign::Minus] {
            let r = ratio_extremum(&b, &b, &[], s, &small()).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12);
            let r = ratio_extremum(&b.scaled(2.0), &b, &[], s, &small()).unwrap();
            assert!((r.value - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn starved_sampler() {
        let b = HermitianMatrix::diag(&[1.0, 2.0]);
        let e = ratio_extremum(&b, &b, &[], Sign::Minus, &small()).unwrap_err();
        assert!(matches!(e, PencilError::SamplerStarved { .. }));
    }

    #[test]
    fn harvested_points_have_the_sign_and_lie_on_cones() {
        let t = HermitianMatrix::diag(&[1.0, -1.0, 0.5, -0.2]);
        let c = HermitianMatrix::diag(&[0.0, 1.0, -1.0, 1.0]);
        for sign in [Sign::Plus, Sign::Minus] {
            let pts = harvest_cone_points(&t, sign, std::slice::from_ref(&c), &small()).unwrap();
            assert!(!pts.is_empty());
            for p in pts {
                assert!((vector::norm(&p.x) - 1.0).abs() < 1e-12);
                assert!(sign.value() * t.form(&p.x) > 0.0);
                assert!(c.form(&p.x).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn neutral_residual_search_finds_common_neutral_vector() {
        let b = HermitianMatrix::diag(&[1.0, -1.0]);
        let r = min_neutral_residual(&[b], &small()).unwrap();
        assert!(r.value < 1e-20);
        assert!((r.x[0].norm() - r.x[1].norm()).abs() < 1e-9);
    }
}
