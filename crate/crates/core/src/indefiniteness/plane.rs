//! Restrictions of Hermitian forms to real two-dimensional subspaces.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PencilError, Result};
use crate::forms::vector::{self, CVec};
use crate::forms::HermitianMatrix;

/// Real symmetric 2×2 matrix, row-major.
pub type Sym2 = [[f64; 2]; 2];

/// Real plane `S = {αu + βv : α, β ∈ ℝ}` with `Re⟨u,v⟩ = 0`, `‖u‖ = ‖v‖ = 1`, and the
/// 2×2 matrices of the requested forms on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneSection {
    pub u: CVec,
    pub v: CVec,
    pub restricted_forms: Vec<Sym2>,
}

const ORTHONORMAL_TOL: f64 = 1e-10;

fn restrict(b: &HermitianMatrix, u: &[Complex64], v: &[Complex64]) -> Sym2 {
    let bu = b.apply(u);
    let off = vector::real_inner(&bu, v);
    [[b.form(u), off], [off, b.form(v)]]
}

impl PlaneSection {
    /// Requires `u`, `v` orthonormal for `Re⟨·,·⟩` within 1e-10.
    pub fn new(u: CVec, v: CVec, forms: &[&HermitianMatrix]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(PencilError::DimMismatch {
                expected: u.len(),
                found: v.len(),
            });
        }
        let err = (vector::norm_sqr(&u) - 1.0)
            .abs()
            .max((vector::norm_sqr(&v) - 1.0).abs())
            .max(vector::real_inner(&u, &v).abs());
        if err > ORTHONORMAL_TOL {
            return Err(PencilError::InvalidArgument(format!(
                "plane basis is not orthonormal (error {err:.3e})"
            )));
        }
        for b in forms {
            if b.dim() != u.len() {
                return Err(PencilError::DimMismatch {
                    expected: u.len(),
                    found: b.dim(),
                });
            }
        }
        let restricted_forms = forms.iter().map(|b| restrict(b, &u, &v)).collect();
        Ok(Self {
            u,
            v,
            restricted_forms,
        })
    }

    /// Real Gram–Schmidt on `(a, b)`. Fails when they span less than a plane.
    pub fn from_span(a: &[Complex64], b: &[Complex64], forms: &[&HermitianMatrix]) -> Result<Self> {
        let u = vector::normalized(a);
        let mut v = b.to_vec();
        let d = vector::real_inner(&v, &u);
        vector::axpy(-d, &u, &mut v);
        let nv = vector::norm(&v);
        if !(nv > 1e-8 * vector::norm(b)) {
            return Err(PencilError::InvalidArgument(
                "vectors are real-linearly dependent".into(),
            ));
        }
        v.iter_mut().for_each(|z| *z /= nv);
        Self::new(u, v, forms)
    }

    /// `⟨B(αu+βv), αu+βv⟩` through the restricted matrix of form `idx`.
    pub fn evaluate(&self, idx: usize, alpha: f64, beta: f64) -> f64 {
        let m = &self.restricted_forms[idx];
        alpha * alpha * m[0][0] + 2.0 * alpha * beta * m[0][1] + beta * beta * m[1][1]
    }

    /// `min_{φ} Σ (w(φ)ᵀ Mₜ w(φ) / sₜ)²` over unit `w(φ) = (cos φ, sin φ)`; it vanishes
    /// exactly when the plane meets every cone nontrivially.
    pub fn common_zero_min(&self, scales: &[f64]) -> f64 {
        let f = |phi: f64| -> f64 {
            let (s, c) = phi.sin_cos();
            (0..self.restricted_forms.len())
                .map(|t| (self.evaluate(t, c, s) / scales[t]).powi(2))
                .sum()
        };
        let samples = 720;
        let h = std::f64::consts::PI / samples as f64;
        let mut best = (0.0, f(0.0));
        for k in 1..samples {
            let phi = k as f64 * h;
            let v = f(phi);
            if v < best.1 {
                best = (phi, v);
            }
        }
        let (mut lo, mut hi) = (best.0 - h, best.0 + h);
        for _ in 0..80 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if f(m1) < f(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        best.1.min(f(0.5 * (lo + hi)))
    }
}

fn combine(ms: [&Sym2; 3], l: [f64; 3]) -> Sym2 {
    let mut out = [[0.0; 2]; 2];
    for (m, c) in ms.iter().zip(l) {
        for r in 0..2 {
            for s in 0..2 {
                out[r][s] += c * m[r][s];
            }
        }
    }
    out
}

fn fro(m: &Sym2) -> f64 {
    (m[0][0].powi(2) + 2.0 * m[0][1].powi(2) + m[1][1].powi(2)).sqrt()
}

fn min_eig2(m: &Sym2) -> f64 {
    let h = 0.5 * (m[0][0] + m[1][1]);
    let d = (0.25 * (m[0][0] - m[1][1]).powi(2) + m[0][1].powi(2)).sqrt();
    h - d
}

fn accepts(m: &Sym2, floor: f64) -> bool {
    let n = fro(m);
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[0][1];
    n > floor && tr >= 0.0 && det >= -1e-12 * n * n
}

fn unit3(mut l: [f64; 3]) -> [f64; 3] {
    let n = l.iter().map(|x| x * x).sum::<f64>().sqrt();
    l.iter_mut().for_each(|x| *x /= n);
    l
}

/// Unit `(λ₁, λ₂, λ₃)` with `Σ λᵢMᵢ` positive semidefinite and nonzero, if one is found.
///
/// Tries the signed coordinate directions, then a Fibonacci grid of `grid` points on the
/// 2-sphere, then polishes the best candidate of `λ_min/‖M‖_F` by pattern search.
/// Combinations with `‖M‖_F ≤ 1e-10·max‖Mᵢ‖_F` count as zero.
pub fn psd_in_span_2x2(m1: &Sym2, m2: &Sym2, m3: &Sym2, grid: usize) -> Option<[f64; 3]> {
    let ms = [m1, m2, m3];
    let floor = 1e-10 * ms.iter().map(|m| fro(m)).fold(0.0, f64::max);
    if floor == 0.0 {
        return None;
    }
    let score = |l: [f64; 3]| -> f64 {
        let m = combine(ms, l);
        let n = fro(&m);
        if n <= floor {
            f64::NEG_INFINITY
        } else {
            min_eig2(&m) / n
        }
    };
    for i in 0..3 {
        for s in [1.0, -1.0] {
            let mut l = [0.0; 3];
            l[i] = s;
            if accepts(&combine(ms, l), floor) {
                return Some(l);
            }
        }
    }
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let n = grid.max(1);
    let mut best = ([1.0, 0.0, 0.0], f64::NEG_INFINITY);
    for i in 0..n {
        let z = 1.0 - (2 * i + 1) as f64 / n as f64;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let (s, c) = (i as f64 * golden).sin_cos();
        let l = [r * c, r * s, z];
        let v = score(l);
        if v > best.1 {
            best = (l, v);
        }
    }
    let (mut l, mut value) = best;
    if accepts(&combine(ms, l), floor) {
        return Some(l);
    }
    let mut step = 0.05;
    while step > 1e-12 {
        let mut improved = false;
        for k in 0..3 {
            for s in [step, -step] {
                let mut t = l;
                t[k] += s;
                let t = unit3(t);
                let v = score(t);
                if v > value {
                    l = t;
                    value = v;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    accepts(&combine(ms, l), floor).then_some(l)
}

/// Exact `max λ_min(M)/‖M‖_F` over nonzero `M` in `span{M₁, M₂, M₃}`; −1 when the span
/// is `{0}`. Nonnegative iff the span holds a nonzero PSD matrix.
///
/// Writing `M = [[x+y, z], [z, x−y]]`, the PSD cone is the circular cone `x ≥ ‖(y,z)‖`
/// and the score of a unit `(x,y,z)` at angle `φ` from the axis is `(cos φ − sin φ)/√2`,
/// so the maximum is attained at the smallest angle between the span and the axis.
/// Directions contributing less than 1e-12 of the largest member are treated as zero.
pub fn psd_span_margin(m1: &Sym2, m2: &Sym2, m3: &Sym2) -> f64 {
    let coords = |m: &Sym2| [0.5 * (m[0][0] + m[1][1]), 0.5 * (m[0][0] - m[1][1]), m[0][1]];
    let vs = [coords(m1), coords(m2), coords(m3)];
    let norm = |v: &[f64; 3]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = vs.iter().map(norm).fold(0.0, f64::max);
    if scale == 0.0 {
        return -1.0;
    }
    let mut basis: Vec<[f64; 3]> = Vec::new();
    let mut pool: Vec<[f64; 3]> = vs.to_vec();
    // Greedy pivoting keeps the Gram–Schmidt stable when members are nearly dependent.
    while !pool.is_empty() {
        let (idx, n) = pool
            .iter()
            .enumerate()
            .map(|(i, v)| (i, norm(v)))
            .fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        if n <= 1e-12 * scale {
            break;
        }
        let e = pool.remove(idx).map(|x| x / n);
        for v in pool.iter_mut() {
            let d: f64 = v.iter().zip(&e).map(|(a, b)| a * b).sum();
            for k in 0..3 {
                v[k] -= d * e[k];
            }
        }
        basis.push(e);
    }
    if basis.is_empty() {
        return -1.0;
    }
    let cos = basis.iter().map(|e| e[0] * e[0]).sum::<f64>().sqrt().min(1.0);
    let sin = (1.0 - cos * cos).max(0.0).sqrt();
    (cos - sin) / std::f64::consts::SQRT_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const I2: Sym2 = [[1.0, 0.0], [0.0, 1.0]];
    const D: Sym2 = [[1.0, 0.0], [0.0, -1.0]];
    const X: Sym2 = [[0.0, 1.0], [1.0, 0.0]];

    #[test]
    fn span_examples() {
        assert_eq!(psd_in_span_2x2(&I2, &D, &X, 20_000), Some([1.0, 0.0, 0.0]));
        assert_eq!(psd_in_span_2x2(&D, &X, &I2, 20_000), Some([0.0, 0.0, 1.0]));
        let neg = [[-1.0, 0.0], [0.0, -1.0]];
        assert_eq!(psd_in_span_2x2(&D, &X, &neg, 20_000), Some([0.0, 0.0, -1.0]));
        assert!((psd_span_margin(&D, &X, &neg) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn indefinite_plane_has_no_psd_member() {
        let zero = [[0.0; 2]; 2];
        assert_eq!(psd_in_span_2x2(&D, &zero, &X, 20_000), None);
        assert!(psd_span_margin(&D, &zero, &X) < -0.7);
        assert_eq!(psd_in_span_2x2(&zero, &zero, &zero, 100), None);
    }

    #[test]
    fn grid_search_agrees_with_exact_margin() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut sym = |rng: &mut ChaCha8Rng| -> Sym2 {
            let a: f64 = rng.gen_range(-1.0..1.0);
            let b: f64 = rng.gen_range(-1.0..1.0);
            let c: f64 = rng.gen_range(-1.0..1.0);
            [[a, b], [b, c]]
        };
        for _ in 0..300 {
            let m1 = sym(&mut rng);
            let m2 = sym(&mut rng);
            // rank-2 spans make both outcomes likely
            let w: f64 = rng.gen_range(-1.0..1.0);
            let m3 = combine([&m1, &m2, &m1], [w, 1.0 - w, 0.0]);
            let exact = psd_span_margin(&m1, &m2, &m3);
            if exact.abs() < 1e-6 {
                continue;
            }
            let found = psd_in_span_2x2(&m1, &m2, &m3, 2000);
            assert_eq!(found.is_some(), exact > 0.0, "exact margin {exact}");
        }
    }

    #[test]
    fn restricted_forms_match_direct_evaluation() {
        let b = HermitianMatrix::from_rows(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.3, -0.2)],
            vec![Complex64::new(0.3, 0.2), Complex64::new(-2.0, 0.0)],
        ])
        .unwrap();
        let a = vec![Complex64::new(0.6, 0.1), Complex64::new(-0.2, 0.7)];
        let c = vec![Complex64::new(0.1, -0.5), Complex64::new(0.9, 0.3)];
        let s = PlaneSection::from_span(&a, &c, &[&b]).unwrap();
        for (al, be) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0)] {
            let x = vector::lincomb(
                Complex64::new(al, 0.0),
                &s.u,
                Complex64::new(be, 0.0),
                &s.v,
            );
            assert!((s.evaluate(0, al, be) - b.form(&x)).abs() < 1e-12);
        }
    }
}
