//! The single-parameter case: `{λ ∈ ℝ : A + λB ⪰ 0}` for indefinite `B`.
//!
//! `g(λ) = λ_min(A + λB)` is concave, so the feasible set is an interval. It is computed
//! by golden-section search for the maximiser of `g` followed by bisection on each side
//! for the zero crossings of `g(λ) + tol·(‖A‖ + |λ|·‖B‖)`.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{PencilError, Result};
use crate::forms::{classify, default_tol, DefKind, HermitianMatrix};
use crate::oracle::{self, Sign};
use crate::report::{CertificateReport, Verdict, Witness};

/// Closed interval `[lo, hi]`, possibly empty. Endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub empty: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            empty: false,
        }
    }

    pub fn empty() -> Self {
        Self {
            lo: f64::NAN,
            hi: f64::NAN,
            empty: true,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        !self.empty && self.lo <= x && x <= self.hi
    }

    pub fn midpoint(&self) -> Option<f64> {
        (!self.empty).then(|| 0.5 * (self.lo + self.hi))
    }

    pub fn width(&self) -> f64 {
        if self.empty {
            0.0
        } else {
            self.hi - self.lo
        }
    }
}

const MAX_DOUBLINGS: usize = 60;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn same_dim(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(PencilError::DimMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

fn require_indefinite(b: &HermitianMatrix) -> Result<()> {
    if classify(b, default_tol(b))?.kind != DefKind::Indefinite {
        return Err(PencilError::NotIndefinite);
    }
    Ok(())
}

/// `{λ : λ_min(A + λB) ≥ −tol·(‖A‖ + |λ|·‖B‖)}` for indefinite `B`.
///
/// Boundary singletons are returned as (possibly very short) non-empty intervals.
pub fn feasible_interval(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<Interval> {
    same_dim(a, b)?;
    require_indefinite(b)?;
    let a_norm = a.spectral_norm();
    let b_norm = b.spectral_norm();
    let g = |l: f64| a.add_scaled(l, b).min_eig();
    let h = |l: f64| -> Result<f64> { Ok(g(l)? + tol * (a_norm + l.abs() * b_norm)) };

    // Bracket the maximiser of the concave g.
    let mut r = 1.0 + a_norm / b_norm;
    let mut doublings = 0;
    loop {
        let right_down = g(r)? < g(0.5 * r)?;
        let left_down = g(-r)? < g(-0.5 * r)?;
        if right_down && left_down {
            break;
        }
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(PencilError::UnboundedBracket);
        }
        r *= 2.0;
    }

    // Golden-section search on [−r, r].
    let (mut lo, mut hi) = (-r, r);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = g(x1)?;
    let mut f2 = g(x2)?;
    while hi - lo > 1e-14 * (1.0 + lo.abs().max(hi.abs())) {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = g(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = g(x1)?;
        }
        if x2 <= x1 {
            break;
        }
    }
    let star = if f1 >= f2 { x1 } else { x2 };
    let hs = h(star)?;
    if hs < 0.0 {
        // The maximiser is localised to within `hi − lo`; g is ‖B‖-Lipschitz, so a
        // deficit below ‖B‖·(hi − lo) is a singleton unresolved by the search.
        if hs + b_norm * (hi - lo) >= 0.0 {
            return Ok(Interval::new(star, star));
        }
        return Ok(Interval::empty());
    }
    let right = crossing(&h, star, 1.0)?;
    let left = crossing(&h, star, -1.0)?;
    Ok(Interval::new(left, right))
}

/// Last point with `h ≥ 0` walking from `start` (where `h ≥ 0`) in direction `dir`.
fn crossing(h: &dyn Fn(f64) -> Result<f64>, start: f64, dir: f64) -> Result<f64> {
    let mut step = start.abs().max(1.0);
    let mut inside = start;
    let mut outside = start + dir * step;
    let mut doublings = 0;
    while h(outside)? >= 0.0 {
        inside = outside;
        step *= 2.0;
        outside = start + dir * step;
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(PencilError::UnboundedBracket);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if h(mid)? >= 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(inside)
}

/// Sampling estimates of the interval endpoints from the ratio characterisation
/// `λ₋ = −inf_{P⁺} ⟨Ax,x⟩/⟨Bx,x⟩`, `λ₊ = −sup_{P⁻} ⟨Ax,x⟩/⟨Bx,x⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioBounds {
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    /// Starting points harvested in `P⁺` and `P⁻`.
    pub starts_plus: usize,
    pub starts_minus: usize,
}

pub fn ratio_bounds(a: &HermitianMatrix, b: &HermitianMatrix, budget: &Budget) -> Result<RatioBounds> {
    same_dim(a, b)?;
    require_indefinite(b)?;
    let inf = oracle::ratio_extremum(a, b, &[], Sign::Plus, &budget.child(1))?;
    let sup = oracle::ratio_extremum(a, b, &[], Sign::Minus, &budget.child(2))?;
    Ok(RatioBounds {
        lambda_minus: -inf.value,
        lambda_plus: -sup.value,
        starts_plus: inf.starts,
        starts_minus: sup.starts,
    })
}

/// Relative threshold below which a neutral minimum of `⟨Ax,x⟩` refutes positivity.
pub const POSITIVITY_TOL: f64 = 1e-7;

/// Minimises `⟨Ax,x⟩` over the unit sphere intersected with every cone in
/// `constraints` and reports whether it stays above `−1e-7·‖A‖`.
///
/// When no restart reaches the variety and the smallest residual `Σ qᵢ²` stays above
/// the feasibility threshold, the intersection is taken to be `{0}` and the report is
/// CONFIRMED with the flag `VACUOUS`.
pub(crate) fn positivity_on_cones(
    property: &str,
    a: &HermitianMatrix,
    constraints: &[HermitianMatrix],
    budget: &Budget,
) -> Result<CertificateReport> {
    let threshold = POSITIVITY_TOL * a.spectral_norm();
    let resolution = format!(
        "{} restarts, penalty ladder 1e1..1e4, {} iterations per stage",
        budget.restarts, budget.iters
    );
    let best = oracle::min_on_sphere(a, constraints, budget)?;
    if !best.feasible {
        let neutral = oracle::min_neutral_residual(constraints, budget)?;
        let limit = oracle::residual_threshold(constraints);
        let report = CertificateReport::new(property, Verdict::Confirmed, budget)
            .with_resolution(resolution)
            .with_value("neutral_residual_min", neutral.value);
        if neutral.value > limit {
            return Ok(report.with_flag("VACUOUS"));
        }
        let mut report = report;
        report.verdict = Verdict::Inconclusive;
        return Ok(report.with_flag("NO_FEASIBLE_RESTART"));
    }
    let report = CertificateReport::new(property, Verdict::Confirmed, budget)
        .with_resolution(resolution)
        .with_value("neutral_min", best.value)
        .with_value("residual", best.residual);
    if best.value < -threshold {
        let mut report = report.with_witness(Witness::NegativeNeutral {
            x: best.argmin,
            value: best.value,
            residual: best.residual,
        });
        report.verdict = Verdict::Refuted;
        return Ok(report);
    }
    Ok(report)
}

/// Whether `⟨Ax,x⟩ ≥ 0` on the neutral cone of `B` (at search resolution).
pub fn neutral_positivity(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    budget: &Budget,
) -> Result<CertificateReport> {
    same_dim(a, b)?;
    positivity_on_cones("neutral_positivity", a, std::slice::from_ref(b), budget)
}
