//! Descent on the unit sphere and on neutral varieties `{‖x‖ = 1, ⟨Cᵢx,x⟩ = 0}`.
//!
//! Complex vectors are treated as points of ℝ²ⁿ with inner product `Re⟨·,·⟩`. The
//! gradient of `x ↦ ⟨Mx,x⟩` is `2Mx`; on the sphere it becomes
//! `2(Mx − ⟨Mx,x⟩x)`.
//!
//! Three stages are combined by the public searches:
//! 1. exterior penalty `f + ρ·Σ qᵢ²` with ρ = 10, 10², 10³, 10⁴ and projected-gradient
//!    inner loops (Barzilai–Borwein steps with Armijo backtracking);
//! 2. Gauss–Newton restoration onto the variety;
//! 3. descent along the variety (tangent projection + restoration) to polish the
//!    objective at exact feasibility.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::linalg::solve_ridge;
use crate::budget::Field;
use crate::forms::vector::{self, CVec};
use crate::forms::HermitianMatrix;

pub(crate) const PENALTY_LADDER: [f64; 4] = [10.0, 1e2, 1e3, 1e4];

/// Max |qᵢ| (normalised forms, unit x) accepted as "on the variety".
pub(crate) const RESTORE_TOL: f64 = 1e-13;

pub(crate) fn random_unit<R: Rng>(rng: &mut R, n: usize, field: Field) -> CVec {
    let mut x: CVec = (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = match field {
                Field::Complex => rng.sample(StandardNormal),
                Field::Real => 0.0,
            };
            Complex64::new(re, im)
        })
        .collect();
    vector::normalize(&mut x);
    x
}

/// Smooth objective on the sphere. Gradients are Euclidean (ℝ²ⁿ) gradients at unit `x`.
pub(crate) trait Objective: Sync {
    fn value(&self, x: &[Complex64]) -> f64;
    fn grad(&self, x: &[Complex64]) -> CVec;
    fn admissible(&self, _x: &[Complex64]) -> bool {
        true
    }
}

pub(crate) struct Zero;

impl Objective for Zero {
    fn value(&self, _x: &[Complex64]) -> f64 {
        0.0
    }
    fn grad(&self, x: &[Complex64]) -> CVec {
        vec![Complex64::new(0.0, 0.0); x.len()]
    }
}

/// `weight·⟨Mx,x⟩`.
pub(crate) struct Form<'a> {
    pub m: &'a HermitianMatrix,
    pub weight: f64,
}

impl Objective for Form<'_> {
    fn value(&self, x: &[Complex64]) -> f64 {
        self.weight * self.m.form(x)
    }
    fn grad(&self, x: &[Complex64]) -> CVec {
        let mut g = self.m.apply(x);
        for v in g.iter_mut() {
            *v *= 2.0 * self.weight;
        }
        g
    }
}

/// `weight·⟨Ax,x⟩/⟨Bx,x⟩` restricted to `class·⟨Bx,x⟩ > delta`.
pub(crate) struct Ratio<'a> {
    pub num: &'a HermitianMatrix,
    pub den: &'a HermitianMatrix,
    pub weight: f64,
    pub class: f64,
    pub delta: f64,
}

impl Objective for Ratio<'_> {
    fn value(&self, x: &[Complex64]) -> f64 {
        self.weight * self.num.form(x) / self.den.form(x)
    }
    fn grad(&self, x: &[Complex64]) -> CVec {
        let ax = self.num.apply(x);
        let bx = self.den.apply(x);
        let qa = vector::real_inner(&ax, x);
        let qb = vector::real_inner(&bx, x);
        let r = qa / qb;
        let f = 2.0 * self.weight / qb;
        ax.iter().zip(&bx).map(|(a, b)| (a - b * r) * f).collect()
    }
    fn admissible(&self, x: &[Complex64]) -> bool {
        self.class * self.den.form(x) > self.delta
    }
}

/// Objective plus `rho·Σ qᵢ(x)²`.
struct Penalized<'a, O: Objective + ?Sized> {
    base: &'a O,
    cons: &'a [HermitianMatrix],
    rho: f64,
}

impl<O: Objective + ?Sized> Objective for Penalized<'_, O> {
    fn value(&self, x: &[Complex64]) -> f64 {
        self.base.value(x) + self.rho * self.cons.iter().map(|c| c.form(x).powi(2)).sum::<f64>()
    }
    fn grad(&self, x: &[Complex64]) -> CVec {
        let mut g = self.base.grad(x);
        for c in self.cons {
            let cx = c.apply(x);
            let q = vector::real_inner(&cx, x);
            vector::axpy(4.0 * self.rho * q, &cx, &mut g);
        }
        g
    }
    fn admissible(&self, x: &[Complex64]) -> bool {
        self.base.admissible(x)
    }
}

/// Sum of squared normalised constraint values at unit `x`.
pub(crate) fn residual(cons: &[HermitianMatrix], x: &[Complex64]) -> f64 {
    cons.iter().map(|c| c.form(x).powi(2)).sum()
}

fn max_abs_residual(cons: &[HermitianMatrix], x: &[Complex64]) -> f64 {
    cons.iter().fold(0.0f64, |m, c| m.max(c.form(x).abs()))
}

/// Removes from `g` its components along `normals` (least squares, `Re⟨·,·⟩`).
fn project_out(g: &mut CVec, normals: &[CVec]) {
    let k = normals.len();
    if k == 0 {
        return;
    }
    let mut gram = vec![0.0; k * k];
    let mut rhs = vec![0.0; k];
    let mut trace = 0.0;
    for a in 0..k {
        for b in a..k {
            let v = vector::real_inner(&normals[a], &normals[b]);
            gram[a * k + b] = v;
            gram[b * k + a] = v;
        }
        trace += gram[a * k + a];
        rhs[a] = vector::real_inner(&normals[a], g);
    }
    let w = solve_ridge(&gram, &rhs, 1e-14 * trace / k as f64 + f64::MIN_POSITIVE);
    for (wa, na) in w.iter().zip(normals) {
        vector::axpy(-wa, na, g);
    }
}

fn restrict(v: &mut CVec, field: Field) {
    if field == Field::Real {
        vector::make_real(v);
    }
}

/// Gauss–Newton projection of `x` onto the variety. Returns the final max |qᵢ|.
pub(crate) fn restore(x: &mut CVec, cons: &[HermitianMatrix], field: Field) -> f64 {
    restrict(x, field);
    vector::normalize(x);
    if cons.is_empty() {
        return 0.0;
    }
    let m = cons.len();
    let mut best = max_abs_residual(cons, x);
    for _ in 0..40 {
        if best <= RESTORE_TOL * 1e-2 {
            break;
        }
        let mut grads = Vec::with_capacity(m);
        let mut res = Vec::with_capacity(m);
        for c in cons {
            let mut g = c.apply(x);
            let q = vector::real_inner(&g, x);
            // tangent part of 2Cx on the sphere
            for (gi, xi) in g.iter_mut().zip(x.iter()) {
                *gi = (*gi - xi * q) * 2.0;
            }
            restrict(&mut g, field);
            grads.push(g);
            res.push(q);
        }
        let mut gram = vec![0.0; m * m];
        let mut trace = 0.0;
        for a in 0..m {
            for b in a..m {
                let v = vector::real_inner(&grads[a], &grads[b]);
                gram[a * m + b] = v;
                gram[b * m + a] = v;
            }
            trace += gram[a * m + a];
        }
        if trace == 0.0 {
            break;
        }
        let w = solve_ridge(&gram, &res, 1e-12 * trace / m as f64);
        let mut delta = vec![Complex64::new(0.0, 0.0); x.len()];
        for (wa, ga) in w.iter().zip(&grads) {
            vector::axpy(-wa, ga, &mut delta);
        }
        let dn = vector::norm(&delta);
        let damp = if dn > 0.5 { 0.5 / dn } else { 1.0 };
        let mut trial = x.clone();
        vector::axpy(damp, &delta, &mut trial);
        vector::normalize(&mut trial);
        let r = max_abs_residual(cons, &trial);
        if r < best {
            *x = trial;
            best = r;
        } else {
            // Retry with a shorter step before giving up.
            let mut trial = x.clone();
            vector::axpy(0.25 * damp, &delta, &mut trial);
            vector::normalize(&mut trial);
            let r = max_abs_residual(cons, &trial);
            if r < best {
                *x = trial;
                best = r;
            } else {
                break;
            }
        }
    }
    best
}

/// Projected-gradient descent on the sphere (no constraints other than ‖x‖ = 1).
pub(crate) fn sphere_descent<O: Objective + ?Sized>(
    obj: &O,
    x: &mut CVec,
    iters: usize,
    field: Field,
) {
    let riemann = |x: &[Complex64]| {
        let mut g = obj.grad(x);
        restrict(&mut g, field);
        let d = vector::real_inner(&g, x);
        vector::axpy(-d, x, &mut g);
        g
    };
    let mut f = obj.value(x);
    let mut g = riemann(x);
    let mut step = 1.0 / (vector::norm(&g).max(1e-300));
    let mut prev: Option<(CVec, CVec)> = None;
    for _ in 0..iters {
        let gn2 = vector::norm_sqr(&g);
        if gn2 <= 1e-30 * (1.0 + f.abs()).powi(2) {
            break;
        }
        if let Some((px, pg)) = &prev {
            let s = vector::sub(x, px);
            let y = vector::sub(&g, pg);
            let sy = vector::real_inner(&s, &y);
            if sy > 0.0 {
                step = (vector::norm_sqr(&s) / sy).clamp(1e-12, 1e6);
            }
        }
        let mut accepted = false;
        let mut a = step;
        for _ in 0..50 {
            let mut trial = x.clone();
            vector::axpy(-a, &g, &mut trial);
            vector::normalize(&mut trial);
            let ft = obj.value(&trial);
            if obj.admissible(&trial) && ft <= f - 1e-4 * a * gn2 {
                prev = Some((std::mem::replace(x, trial), g));
                f = ft;
                g = riemann(x);
                accepted = true;
                break;
            }
            a *= 0.5;
        }
        if !accepted {
            break;
        }
        step = a;
    }
}

/// Descent along the variety: tangent projection, step, restoration.
///
/// `stop` is checked on the objective value after every accepted step.
pub(crate) fn variety_descent<O: Objective + ?Sized>(
    obj: &O,
    cons: &[HermitianMatrix],
    x: &mut CVec,
    iters: usize,
    field: Field,
    stop: Option<&dyn Fn(f64) -> bool>,
) {
    let tangent = |x: &[Complex64]| {
        let mut g = obj.grad(x);
        restrict(&mut g, field);
        let mut normals = Vec::with_capacity(cons.len() + 1);
        normals.push(x.to_vec());
        for c in cons {
            let mut n = c.apply(x);
            restrict(&mut n, field);
            normals.push(n);
        }
        project_out(&mut g, &normals);
        g
    };
    let mut f = obj.value(x);
    if let Some(s) = stop {
        if s(f) {
            return;
        }
    }
    let mut g = tangent(x);
    let mut step = 1.0 / (vector::norm(&g).max(1e-300));
    let mut prev: Option<(CVec, CVec)> = None;
    let mut stall = 0;
    for _ in 0..iters {
        let gn2 = vector::norm_sqr(&g);
        if gn2 <= 1e-30 * (1.0 + f.abs()).powi(2) {
            break;
        }
        if let Some((px, pg)) = &prev {
            let s = vector::sub(x, px);
            let y = vector::sub(&g, pg);
            let sy = vector::real_inner(&s, &y);
            if sy > 0.0 {
                step = (vector::norm_sqr(&s) / sy).clamp(1e-12, 1e6);
            }
        }
        let mut accepted = false;
        let mut a = step;
        for _ in 0..40 {
            let mut trial = x.clone();
            vector::axpy(-a, &g, &mut trial);
            let r = restore(&mut trial, cons, field);
            if r <= RESTORE_TOL && obj.admissible(&trial) {
                let ft = obj.value(&trial);
                if ft <= f - 1e-4 * a * gn2 {
                    if f - ft <= 1e-15 * (1.0 + f.abs()) {
                        stall += 1;
                    } else {
                        stall = 0;
                    }
                    prev = Some((std::mem::replace(x, trial), g));
                    f = ft;
                    g = tangent(x);
                    accepted = true;
                    break;
                }
            }
            a *= 0.5;
        }
        if !accepted || stall >= 10 {
            break;
        }
        if let Some(s) = stop {
            if s(f) {
                break;
            }
        }
        step = a;
    }
}

/// Penalty ladder followed by restoration. Returns the max |qᵢ| after restoration.
pub(crate) fn penalty_then_restore<O: Objective + ?Sized>(
    obj: &O,
    cons: &[HermitianMatrix],
    x: &mut CVec,
    iters: usize,
    field: Field,
) -> f64 {
    if !cons.is_empty() {
        for &rho in PENALTY_LADDER.iter() {
            let pen = Penalized {
                base: obj,
                cons,
                rho,
            };
            sphere_descent(&pen, x, iters, field);
        }
    } else {
        sphere_descent(obj, x, iters, field);
    }
    restore(x, cons, field)
}

/// Minimises `Σ qᵢ²` on the sphere and then attempts exact restoration.
pub(crate) fn neutral_residual_descent(
    cons: &[HermitianMatrix],
    x: &mut CVec,
    iters: usize,
    field: Field,
) -> f64 {
    let pen = Penalized {
        base: &Zero,
        cons,
        rho: 1.0,
    };
    sphere_descent(&pen, x, iters, field);
    let mut trial = x.clone();
    restore(&mut trial, cons, field);
    if residual(cons, &trial) < residual(cons, x) {
        *x = trial;
    }
    residual(cons, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn restore_lands_on_the_neutral_cone() {
        let c = HermitianMatrix::diag(&[1.0, -1.0, 0.5]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let mut x = random_unit(&mut rng, 3, Field::Complex);
            let r = restore(&mut x, std::slice::from_ref(&c), Field::Complex);
            assert!(r <= RESTORE_TOL, "residual {r}");
            assert!((vector::norm(&x) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rayleigh_minimum_on_sphere() {
        let m = HermitianMatrix::diag(&[-1.0, 1.0, 3.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut x = random_unit(&mut rng, 3, Field::Complex);
        sphere_descent(&Form { m: &m, weight: 1.0 }, &mut x, 500, Field::Complex);
        assert!((m.form(&x) + 1.0).abs() < 1e-10);
    }

    #[test]
    fn real_field_stays_real() {
        let c = HermitianMatrix::diag(&[1.0, -2.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut x = random_unit(&mut rng, 2, Field::Real);
        restore(&mut x, std::slice::from_ref(&c), Field::Real);
        assert!(x.iter().all(|z| z.im == 0.0));
    }
}
