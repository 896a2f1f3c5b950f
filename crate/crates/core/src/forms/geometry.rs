//! Phase selection and neutral-segment roots.
//!
//! Given `y` with `⟨By,y⟩ < 0` and `z` with `⟨Bz,z⟩ > 0`, the segment
//! `γ(t) = t·y + (1−t)·e^{iθ}·z` carries the quadratic
//! `f(t) = t²·p + (1−t)²·q + 2t(1−t)·r` with `p = ⟨By,y⟩`, `q = ⟨Bz,z⟩` and
//! `r = Re⟨By, e^{iθ}z⟩`. Choosing `θ` to kill `r` for one form keeps the whole segment
//! inside that form's neutral cone; the sign change of `f` then yields a neutral point
//! for a second form.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::classify::{classify, default_tol, DefKind};
use super::eigen::eig;
use super::matrix::HermitianMatrix;
use super::vector::{self, CVec};
use crate::error::{PencilError, Result};

fn check_dim(b: &HermitianMatrix, x: &[Complex64]) -> Result<()> {
    if b.dim() != x.len() {
        return Err(PencilError::DimMismatch {
            expected: b.dim(),
            found: x.len(),
        });
    }
    Ok(())
}

/// Unit `x` with `⟨Bx,x⟩ = 0` and `Bx ≠ 0`, built from the extreme eigenpairs as
/// `u₊/√λ_max + u₋/√(−λ_min)`.
pub fn neutral_direction(b: &HermitianMatrix) -> Result<CVec> {
    let class = classify(b, default_tol(b))?;
    if class.kind != DefKind::Indefinite {
        return Err(PencilError::NotIndefinite);
    }
    let d = eig(b)?;
    let lo = d.min();
    let hi = d.max();
    let u_minus = &d.eigenvectors[0];
    let u_plus = d.eigenvectors.last().expect("non-empty spectrum");
    let mut x = vector::lincomb(
        Complex64::new(1.0 / hi.sqrt(), 0.0),
        u_plus,
        Complex64::new(1.0 / (-lo).sqrt(), 0.0),
        u_minus,
    );
    vector::normalize(&mut x);
    Ok(x)
}

/// `θ ∈ [0, π)` with `Re⟨By, e^{iθ}z⟩ = Re(e^{−iθ}⟨By, z⟩) = 0`.
///
/// Returns 0 when `⟨By, z⟩` vanishes (any angle works).
pub fn choose_theta(b: &HermitianMatrix, y: &[Complex64], z: &[Complex64]) -> Result<f64> {
    check_dim(b, y)?;
    check_dim(b, z)?;
    let c = vector::inner(&b.apply(y), z);
    let scale = b.spectral_norm() * vector::norm(y) * vector::norm(z);
    Ok(theta_for(c, scale))
}

pub(crate) fn theta_for(c: Complex64, scale: f64) -> f64 {
    if c.norm() <= 1e-14 * scale || c.norm() == 0.0 {
        return 0.0;
    }
    let mut theta = (c.arg() + PI / 2.0).rem_euclid(PI);
    if theta >= PI {
        theta -= PI;
    }
    theta.max(0.0)
}

/// Root in `(0, 1)` of `t²·p + (1−t)²·q + 2t(1−t)·r` for `p < 0 < q`.
///
/// `f(0) = q > 0` and `f(1) = p < 0`, so there is exactly one root in the interval.
pub fn neutral_root(p: f64, q: f64, r: f64) -> Result<f64> {
    if !(p < 0.0) || !(q > 0.0) {
        return Err(PencilError::BadSigns { p, q });
    }
    let f = |t: f64| t * t * p + (1.0 - t) * (1.0 - t) * q + 2.0 * t * (1.0 - t) * r;
    let mut t = if r == 0.0 {
        let sq = q.sqrt();
        sq / (sq + (-p).sqrt())
    } else {
        // a t² + b t + c with c = q
        let a = p + q - 2.0 * r;
        let b = 2.0 * r - 2.0 * q;
        let c = q;
        let disc = (b * b - 4.0 * a * c).max(0.0);
        let big = -0.5 * (b + b.signum() * disc.sqrt());
        let mut cands = Vec::with_capacity(2);
        if big != 0.0 {
            cands.push(c / big);
            if a != 0.0 {
                cands.push(big / a);
            }
        } else if a != 0.0 {
            cands.push((-c / a).abs().sqrt());
        }
        cands
            .into_iter()
            .filter(|t| *t > 0.0 && *t < 1.0)
            .min_by(|x, y| f(*x).abs().total_cmp(&f(*y).abs()))
            .unwrap_or(f64::NAN)
    };
    let tol = 1e-13 * (p.abs() + q.abs() + r.abs());
    if !(t > 0.0 && t < 1.0) || f(t).abs() > tol {
        // Bisection keeps the bracket [lo, hi] with f(lo) > 0 > f(hi).
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let v = f(mid);
            if v.is_nan() {
                return Err(PencilError::NoRoot);
            }
            if v > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        t = 0.5 * (lo + hi);
    }
    if t > 0.0 && t < 1.0 {
        Ok(t)
    } else {
        Err(PencilError::NoRoot)
    }
}

/// Root `t₀ ∈ (0, 1)` with `⟨Bγ(t₀), γ(t₀)⟩ = 0` on `γ(t) = t·y + (1−t)·z_phased`.
///
/// The cross term `Re⟨By, z_phased⟩` is folded into the quadratic, so the root is exact
/// for any `z_phased`.
pub fn segment_neutral_root(
    b: &HermitianMatrix,
    y: &[Complex64],
    z_phased: &[Complex64],
) -> Result<f64> {
    check_dim(b, y)?;
    check_dim(b, z_phased)?;
    let by = b.apply(y);
    let p = vector::inner(&by, y).re;
    let q = b.form(z_phased);
    let r = vector::real_inner(&by, z_phased);
    neutral_root(p, q, r)
}

/// Vectors realising the segment construction: unit `x₋`, `x₊`, the phase `θ`, the
/// neutral root `t₀` and `γ(t₀) = t₀·x₋ + (1−t₀)·e^{iθ}·x₊`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeWitness {
    pub x_minus: CVec,
    pub x_plus: CVec,
    pub theta: f64,
    pub t0: f64,
    pub segment_point: CVec,
}

impl ConeWitness {
    /// Picks `θ` to neutralise the cross term of `phase_form` and the root `t₀` of
    /// `root_form` along the phased segment.
    pub fn build(
        phase_form: &HermitianMatrix,
        root_form: &HermitianMatrix,
        x_minus: &[Complex64],
        x_plus: &[Complex64],
    ) -> Result<Self> {
        let x_minus = vector::normalized(x_minus);
        let x_plus = vector::normalized(x_plus);
        let theta = choose_theta(phase_form, &x_minus, &x_plus)?;
        let z = vector::scale(Complex64::from_polar(1.0, theta), &x_plus);
        let t0 = segment_neutral_root(root_form, &x_minus, &z)?;
        Ok(Self::from_parts(x_minus, x_plus, theta, t0))
    }

    pub fn from_parts(x_minus: CVec, x_plus: CVec, theta: f64, t0: f64) -> Self {
        let segment_point = segment_point(&x_minus, &x_plus, theta, t0);
        Self {
            x_minus,
            x_plus,
            theta,
            t0,
            segment_point,
        }
    }

    /// `e^{iθ}·x₊`.
    pub fn phased_plus(&self) -> CVec {
        vector::scale(Complex64::from_polar(1.0, self.theta), &self.x_plus)
    }

    /// Point `t·x₋ + (1−t)·e^{iθ}·x₊` of the segment.
    pub fn at(&self, t: f64) -> CVec {
        segment_point(&self.x_minus, &self.x_plus, self.theta, t)
    }
}

fn segment_point(x_minus: &[Complex64], x_plus: &[Complex64], theta: f64, t: f64) -> CVec {
    let e = Complex64::from_polar(1.0 - t, theta);
    vector::lincomb(Complex64::new(t, 0.0), x_minus, e, x_plus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::quadratic_form;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn neutral_direction_diagonal() {
        let b = HermitianMatrix::diag(&[1.0, -1.0]);
        let x = neutral_direction(&b).unwrap();
        assert!(quadratic_form(&b, &x).unwrap().abs() < 1e-15);
        assert!((x[0].norm() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((x[1].norm() - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn neutral_direction_swap_is_a_coordinate_axis() {
        let b = HermitianMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let x = neutral_direction(&b).unwrap();
        assert!(quadratic_form(&b, &x).unwrap().abs() < 1e-15);
        assert!((vector::norm(&b.apply(&x)) - 1.0).abs() < 1e-14);
        let (a0, a1) = (x[0].norm(), x[1].norm());
        assert!((a0 - 1.0).abs() < 1e-12 && a1 < 1e-12 || (a1 - 1.0).abs() < 1e-12 && a0 < 1e-12);
    }

    #[test]
    fn neutral_direction_rejects_semidefinite() {
        let b = HermitianMatrix::diag(&[1.0, 0.0]);
        assert_eq!(neutral_direction(&b), Err(PencilError::NotIndefinite));
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_for(c(0.0, 1.0), 1.0), 0.0);
        assert!((theta_for(c(1.0, 0.0), 1.0) - PI / 2.0).abs() < 1e-15);
        let t = theta_for(c(1.0, 1.0), 1.0);
        assert!((t - 3.0 * PI / 4.0).abs() < 1e-15);
        assert!((Complex64::from_polar(1.0, -t) * c(1.0, 1.0)).re.abs() < 1e-15);
        assert_eq!(theta_for(c(0.0, 0.0), 1.0), 0.0);
    }

    #[test]
    fn choose_theta_through_a_matrix() {
        // B = I, y = e1, z = e1 → ⟨By, z⟩ = 1 → θ = π/2.
        let b = HermitianMatrix::identity(2);
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        assert!((choose_theta(&b, &e1, &e1).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!(choose_theta(&b, &e1, &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn root_examples() {
        assert!((neutral_root(-1.0, 1.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((neutral_root(-4.0, 1.0, 0.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((neutral_root(-1.0, 4.0, 0.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(matches!(neutral_root(1.0, 1.0, 0.0), Err(PencilError::BadSigns { .. })));
        assert!(matches!(neutral_root(-1.0, 0.0, 0.0), Err(PencilError::BadSigns { .. })));
    }

    #[test]
    fn root_with_cross_term() {
        for &(p, q, r) in &[(-1.0, 1.0, 0.7), (-3.0, 0.2, -5.0), (-1e-3, 10.0, 2.0), (-2.0, 2.0, 1.0)] {
            let t = neutral_root(p, q, r).unwrap();
            let f = t * t * p + (1.0 - t) * (1.0 - t) * q + 2.0 * t * (1.0 - t) * r;
            assert!(t > 0.0 && t < 1.0);
            assert!(f.abs() <= 1e-12 * (p.abs() + q.abs() + r.abs()), "f = {f}");
        }
    }

    #[test]
    fn cone_witness_segment_point_is_recomputable() {
        let b1 = HermitianMatrix::diag(&[1.0, -1.0, 0.5]);
        let b2 = HermitianMatrix::diag(&[0.0, 0.0, 1.0]);
        let xm = vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let xp = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let w = ConeWitness::build(&b2, &b1, &xm, &xp).unwrap();
        assert!(w.t0 > 0.0 && w.t0 < 1.0);
        assert_eq!(w.at(w.t0), w.segment_point);
        assert!(b1.form(&w.segment_point).abs() < 1e-15);
    }
}
