//! Dense complex vectors as plain slices.

use num_complex::Complex64;

pub type CVec = Vec<Complex64>;

/// `⟨u, v⟩ = Σ uₖ·conj(vₖ)`.
#[inline]
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

/// `Re⟨u, v⟩`, the Euclidean inner product of `u, v` viewed in ℝ²ⁿ.
#[inline]
pub fn real_inner(u: &[Complex64], v: &[Complex64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a.re * b.re + a.im * b.im).sum()
}

#[inline]
pub fn norm_sqr(u: &[Complex64]) -> f64 {
    u.iter().map(|a| a.norm_sqr()).sum()
}

#[inline]
pub fn norm(u: &[Complex64]) -> f64 {
    norm_sqr(u).sqrt()
}

/// Scales `u` to unit length in place; returns the previous norm.
pub fn normalize(u: &mut [Complex64]) -> f64 {
    let n = norm(u);
    if n > 0.0 {
        let inv = 1.0 / n;
        for a in u.iter_mut() {
            *a *= inv;
        }
    }
    n
}

pub fn normalized(u: &[Complex64]) -> CVec {
    let mut v = u.to_vec();
    normalize(&mut v);
    v
}

/// `y ← y + alpha·x`.
#[inline]
pub fn axpy(alpha: f64, x: &[Complex64], y: &mut [Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += xi * alpha;
    }
}

pub fn scale(alpha: Complex64, x: &[Complex64]) -> CVec {
    x.iter().map(|a| a * alpha).collect()
}

/// `s·x + t·y`.
pub fn lincomb(s: Complex64, x: &[Complex64], t: Complex64, y: &[Complex64]) -> CVec {
    x.iter().zip(y).map(|(a, b)| a * s + b * t).collect()
}

pub fn sub(x: &[Complex64], y: &[Complex64]) -> CVec {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// Drops imaginary parts in place.
pub fn make_real(x: &mut [Complex64]) {
    for a in x.iter_mut() {
        a.im = 0.0;
    }
}

pub fn from_real(x: &[f64]) -> CVec {
    x.iter().map(|&a| Complex64::new(a, 0.0)).collect()
}

/// Projective distance `1 − |⟨u, v⟩|` between unit vectors; 0 iff they span the same
/// complex line.
pub fn projective_distance(u: &[Complex64], v: &[Complex64]) -> f64 {
    (1.0 - inner(u, v).norm()).max(0.0)
}
