use num_complex::Complex64;
use rayon::prelude::*;

use super::PencilFamily;
use crate::budget::Budget;
use crate::error::Result;
use crate::forms::{eigenvalues, HermitianMatrix};
use crate::report::{CertificateReport, Verdict, Witness};

/// Combinations with relative indefiniteness margin at or below this are semidefinite.
pub const WEAK_TOL: f64 = 1e-9;

/// `min(−λ_min, λ_max)/‖M‖`: positive iff `M` is indefinite. Zero for the zero matrix.
pub fn indefiniteness_margin(m: &HermitianMatrix) -> Result<f64> {
    let ev = eigenvalues(m)?;
    let lo = ev[0];
    let hi = *ev.last().expect("non-empty spectrum");
    let norm = lo.abs().max(hi.abs());
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok((-lo).min(hi) / norm)
}

/// Margin of `Σ μᵢBᵢ`, zero when the combination vanishes relative to `Σ|μᵢ|‖Bᵢ‖`.
pub fn combination_margin(f: &PencilFamily, mu: &[f64]) -> f64 {
    let m = f.combination(mu);
    let size: f64 = mu.iter().zip(f.norms()).map(|(c, n)| c.abs() * n).sum();
    if m.frobenius_norm() <= 1e-12 * size {
        return 0.0;
    }
    indefiniteness_margin(&m).unwrap_or(f64::NAN)
}

fn normalize(mu: &mut [f64]) {
    let n = mu.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        mu.iter_mut().for_each(|x| *x /= n);
    }
}

/// Quasi-uniform points on the half sphere of `ℝᵐ` (antipodes give the same margin).
pub(crate) fn mu_grid(m: usize, size: usize) -> Vec<Vec<f64>> {
    match m {
        1 => vec![vec![1.0]],
        2 => (0..size.max(1))
            .map(|k| {
                let t = std::f64::consts::PI * k as f64 / size.max(1) as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            // Kronecker (R_d) sequence mapped through Box–Muller.
            let d = 2 * m.div_ceil(2);
            let mut g = 2.0f64;
            for _ in 0..64 {
                g = (1.0 + g).powf(1.0 / (d as f64 + 1.0));
            }
            let alpha: Vec<f64> = (1..=d).map(|k| g.powi(-(k as i32)).fract()).collect();
            (0..size.max(1))
                .map(|i| {
                    let u: Vec<f64> = alpha
                        .iter()
                        .map(|a| (0.5 + a * (i + 1) as f64).fract())
                        .collect();
                    let mut mu = Vec::with_capacity(d);
                    for pair in u.chunks(2) {
                        let r = (-2.0 * pair[0].max(1e-300).ln()).sqrt();
                        let t = 2.0 * std::f64::consts::PI * pair[1];
                        mu.push(r * t.cos());
                        mu.push(r * t.sin());
                    }
                    mu.truncate(m);
                    normalize(&mut mu);
                    mu
                })
                .collect()
        }
    }
}

/// Pattern search on the μ-sphere minimising the margin.
fn refine(f: &PencilFamily, start: &[f64], start_value: f64) -> (Vec<f64>, f64) {
    let m = start.len();
    let mut best = start.to_vec();
    let mut value = start_value;
    let mut step = 0.05;
    while step > 1e-10 && value > 0.0 {
        let mut improved = false;
        for k in 0..m {
            for s in [step, -step] {
                let mut trial = best.clone();
                trial[k] += s;
                normalize(&mut trial);
                let v = combination_margin(f, &trial);
                if v < value {
                    value = v;
                    best = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, value)
}

/// Unit `μ` with `Σ μᵢB̂ᵢ ≈ 0` for the normalised members `B̂ᵢ = Bᵢ/‖Bᵢ‖_F`, if any.
fn dependence(f: &PencilFamily) -> Result<Option<Vec<f64>>> {
    let m = f.len();
    if m == 1 {
        return Ok(None);
    }
    let norms: Vec<f64> = f.members().iter().map(|b| b.frobenius_norm()).collect();
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let s: f64 = f
                        .get(i)
                        .entries()
                        .iter()
                        .zip(f.get(j).entries())
                        .map(|(a, b)| (a * b.conj()).re)
                        .sum();
                    s / (norms[i] * norms[j])
                })
                .collect()
        })
        .collect();
    let gram = HermitianMatrix::from_real_rows(&rows)?;
    let d = crate::forms::eig(&gram)?;
    if d.eigenvalues[0] > 1e-14 {
        return Ok(None);
    }
    let v = &d.eigenvectors[0];
    let pivot = v
        .iter()
        .fold(Complex64::new(0.0, 0.0), |a, z| if z.norm() > a.norm() { *z } else { a });
    let phase = pivot.conj() / pivot.norm();
    let mut mu: Vec<f64> = v.iter().zip(&norms).map(|(z, n)| (z * phase).re / n).collect();
    normalize(&mut mu);
    Ok(Some(mu))
}

/// Searches for `μ ≠ 0` with `Σ μᵢBᵢ` semidefinite.
///
/// The margin `min(−λ_min, λ_max)/‖Σ μᵢBᵢ‖` is evaluated on a deterministic grid of
/// `budget.grid` points of the μ-sphere; the eight smallest are refined by pattern
/// search. A margin at or below [`WEAK_TOL`] refutes with the coefficients as witness;
/// otherwise the smallest margin found is reported as `margin_min`.
pub fn is_weakly_indefinite(f: &PencilFamily, budget: &Budget) -> Result<CertificateReport> {
    let m = f.len();
    let grid = mu_grid(m, budget.grid);
    let values: Vec<f64> = grid.par_iter().map(|mu| combination_margin(f, mu)).collect();
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let refined: Vec<(Vec<f64>, f64)> = order
        .iter()
        .take(8)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&i| refine(f, &grid[i], values[i]))
        .collect();
    let (mu, margin) = refined
        .into_iter()
        .fold(None::<(Vec<f64>, f64)>, |acc, (mu, v)| match acc {
            Some((_, bv)) if bv <= v => acc,
            _ => Some((mu, v)),
        })
        .expect("non-empty grid");
    // A linear dependence gives a vanishing combination the grid cannot hit.
    if let Some(mu) = dependence(f)? {
        let margin = combination_margin(f, &mu);
        if margin <= WEAK_TOL {
            return Ok(
            CertificateReport::new("weakly_indefinite", Verdict::Refuted, budget)
                .with_resolution("members are linearly dependent")
                .with_value("margin_min", margin)
                .with_witness(Witness::Semidefinite { mu, margin }),
            );
        }
    }
    let report = CertificateReport::new("weakly_indefinite", Verdict::Confirmed, budget)
        .with_resolution(format!(
            "{} grid points on the coefficient sphere, 8 refined by pattern search",
            grid.len()
        ))
        .with_value("margin_min", margin);
    if !(margin > WEAK_TOL) {
        let mut report = report.with_witness(Witness::Semidefinite { mu, margin });
        report.verdict = Verdict::Refuted;
        return Ok(report);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(ms: Vec<HermitianMatrix>) -> PencilFamily {
        PencilFamily::new(ms).unwrap()
    }

    #[test]
    fn single_indefinite_member() {
        let r = is_weakly_indefinite(&fam(vec![HermitianMatrix::diag(&[1.0, -1.0])]), &Budget::default())
            .unwrap();
        assert_eq!(r.verdict, Verdict::Confirmed);
        assert!((r.achieved["margin_min"] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn semidefinite_member_refutes() {
        let f = fam(vec![
            HermitianMatrix::diag(&[1.0, -1.0]),
            HermitianMatrix::diag(&[1.0, 1.0]),
        ]);
        let r = is_weakly_indefinite(&f, &Budget::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        let Witness::Semidefinite { mu, margin } = &r.witnesses[0] else {
            panic!()
        };
        assert!(mu[0].abs() < 1e-9 && (mu[1].abs() - 1.0).abs() < 1e-9);
        assert!((r.witnesses[0].recheck(&f, None).unwrap() - margin).abs() < 1e-12);
    }

    #[test]
    fn dependent_members_refute_through_zero_combination() {
        let b = HermitianMatrix::diag(&[1.0, -1.0]);
        let f = fam(vec![b.clone(), b.scaled(-2.0)]);
        let r = is_weakly_indefinite(&f, &Budget::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
    }

    #[test]
    fn grid_points_are_unit() {
        for m in 1..6 {
            for mu in mu_grid(m, 100) {
                let n: f64 = mu.iter().map(|x| x * x).sum();
                assert!((n - 1.0).abs() < 1e-12);
            }
        }
    }
}
