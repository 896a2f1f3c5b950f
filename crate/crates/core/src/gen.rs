//! Reproducible instance generators.
//!
//! Every generator is a pure function of its parameters and seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{PencilError, Result};
use crate::forms::vector::{self, CVec};
use crate::forms::HermitianMatrix;
use crate::indefiniteness::{is_weakly_indefinite, PencilFamily};
use crate::oracle::Sign;

/// Weak-indefiniteness margin required of generated pairs.
const PAIR_MARGIN: f64 = 1e-2;
const MAX_ATTEMPTS: usize = 200;

/// Generated instance: an optional base matrix, a family and the ground truth used to
/// build it.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub a: Option<HermitianMatrix>,
    pub family: PencilFamily,
    /// `λ*` with `A + Σ λ*ᵢBᵢ ⪰ 0`, for feasible instances.
    pub lambda_star: Option<Vec<f64>>,
}

/// A vector the construction places in `P_index^{sign} ∩ ⋂_{i≠index} Qᵢ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignWitness {
    pub index: usize,
    pub sign: Sign,
    pub x: CVec,
}

fn real_rows(rows: [[f64; 4]; 4]) -> HermitianMatrix {
    HermitianMatrix::from_real_rows(&rows).expect("symmetric literal")
}

/// The four real symmetric 4×4 matrices of the classic maximal indefinite set whose
/// common neutral set over ℝ⁴ is trivial.
pub fn example34() -> PencilFamily {
    PencilFamily::new(vec![
        real_rows([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ]),
        real_rows([
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ]),
        real_rows([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ]),
        real_rows([
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
        ]),
    ])
    .expect("valid family")
}

/// The eight published sign witnesses of [`example34`], two per member.
pub fn example34_witnesses() -> Vec<SignWitness> {
    let s = std::f64::consts::SQRT_2;
    let rows: [(usize, Sign, [f64; 4]); 8] = [
        (0, Sign::Minus, [1.0 - s, -1.0, 1.0 - s, 1.0]),
        (0, Sign::Plus, [3.0 - s, 1.0 + 2.0 * s, -1.0 + 5.0 * s, 7.0]),
        (1, Sign::Minus, [1.0 - s, 1.0, -1.0 + s, 1.0]),
        (1, Sign::Plus, [1.0 + s, 1.0, -1.0 - s, 1.0]),
        (2, Sign::Minus, [1.0 - s, -1.0, -1.0 + s, 1.0]),
        (2, Sign::Plus, [1.0 - s, -1.0 + 2.0 * s, 3.0 - s, 1.0]),
        (3, Sign::Minus, [1.0 - 5.0 * s, -1.0 - 2.0 * s, -3.0 + s, 7.0]),
        (3, Sign::Plus, [-1.0 + s, 1.0, -1.0 + s, 1.0]),
    ];
    rows.into_iter()
        .map(|(index, sign, x)| SignWitness {
            index,
            sign,
            x: vector::from_real(&x),
        })
        .collect()
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    (0..n).map(|_| gaussian(rng)).collect()
}

/// Haar-distributed unitary (Gram–Schmidt of a complex Gaussian matrix), as columns.
fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> Vec<CVec> {
    let mut cols: Vec<CVec> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = gaussian_vec(rng, n);
        for c in &cols {
            let d = vector::inner(&v, c);
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= d * ci;
            }
        }
        if vector::normalize(&mut v) > 1e-8 {
            cols.push(v);
        }
    }
    cols
}

/// `U·diag(d)·U*` for a random unitary `U`.
fn random_with_spectrum(rng: &mut ChaCha8Rng, d: &[f64]) -> HermitianMatrix {
    HermitianMatrix::diag(d).conjugated(&random_unitary(rng, d.len()))
}

/// Random spectrum in `±[0.5, 2]` with at least one eigenvalue of each sign.
fn mixed_spectrum(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let neg = rng.gen_range(1..n);
    (0..n)
        .map(|i| {
            let mag: f64 = rng.gen_range(0.5..2.0);
            if i < neg {
                -mag
            } else {
                mag
            }
        })
        .collect()
}

fn check_dims(m: usize, n: usize, min_m: usize) -> Result<()> {
    if m < min_m || n < 2 {
        return Err(PencilError::InvalidArgument(format!(
            "need m ≥ {min_m} and n ≥ 2, got m = {m}, n = {n}"
        )));
    }
    Ok(())
}

/// Hermitian matrix with independent standard complex Gaussian entries.
pub fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4755_4548);
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        data[i * n + i] = Complex64::new(rng.sample(StandardNormal), 0.0);
        for j in i + 1..n {
            let z = gaussian(&mut rng);
            data[i * n + j] = z;
            data[j * n + i] = z.conj();
        }
    }
    HermitianMatrix::new(n, data).expect("Hermitian by construction")
}

/// Random indefinite matrix with spectrum in `±[0.5, 2]`.
pub fn random_indefinite(n: usize, seed: u64) -> Result<HermitianMatrix> {
    check_dims(1, n, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x494e_4445);
    let d = mixed_spectrum(&mut rng, n);
    Ok(random_with_spectrum(&mut rng, &d))
}

/// Single-parameter instance `A = P − λ*B + σH` with `B` indefinite, `H` a random
/// Hermitian matrix and `σ ∈ [0, 1)`. Roughly half of the instances are feasible.
pub fn single(n: usize, seed: u64) -> Result<Generated> {
    let b = random_indefinite(n, seed)?;
    let h = random_hermitian(n, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5349_4e47);
    let p = random_pd(&mut rng, n);
    let l: f64 = rng.gen_range(-1.0..1.0);
    let sigma: f64 = rng.gen_range(0.0..1.0);
    let a = p.add_scaled(-l, &b).add_scaled(sigma, &h);
    Ok(Generated {
        a: Some(a),
        family: PencilFamily::new(vec![b])?,
        lambda_star: None,
    })
}

/// A weakly indefinite pair of random indefinite matrices (margin at least 1e-2 on a
/// 1024-point coefficient grid).
pub fn indefinite_pair(n: usize, seed: u64) -> Result<PencilFamily> {
    check_dims(2, n, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5041_4952);
    let budget = Budget {
        grid: 1024,
        ..Budget::default()
    };
    for _ in 0..MAX_ATTEMPTS {
        let d1 = mixed_spectrum(&mut rng, n);
        let d2 = mixed_spectrum(&mut rng, n);
        let f = PencilFamily::new(vec![
            random_with_spectrum(&mut rng, &d1),
            random_with_spectrum(&mut rng, &d2),
        ])?;
        let r = is_weakly_indefinite(&f, &budget)?;
        if r.is_confirmed() && r.achieved["margin_min"] >= PAIR_MARGIN {
            return Ok(f);
        }
    }
    Err(PencilError::InvalidArgument(format!(
        "no weakly indefinite pair found for n = {n}"
    )))
}

/// Family `Bᵢ = uᵢv* + v·uᵢ*` sharing the vector `v`.
///
/// With `{v, iv, u₁, …, uₘ}` real-linearly independent (needs `2n ≥ m + 2`) every
/// nonzero combination `wv* + vw*` is indefinite. Normalising the phase of `v*x` to be
/// real makes every cross term `⟨Bⱼx₊, x₋⟩` on the joint neutral set a real multiple
/// of a common phase, so the common-phase condition holds by construction.
pub fn strongly_indefinite(m: usize, n: usize, seed: u64) -> Result<PencilFamily> {
    check_dims(m, n, 2)?;
    if 2 * n < m + 2 {
        return Err(PencilError::InvalidArgument(format!(
            "the shared-vector construction needs 2n ≥ m + 2, got m = {m}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5354_524f);
    let v = vector::normalized(&gaussian_vec(&mut rng, n));
    let members = (0..m)
        .map(|_| {
            let scale: f64 = rng.gen_range(0.5..2.0);
            let u: CVec = vector::normalized(&gaussian_vec(&mut rng, n))
                .into_iter()
                .map(|z| z * scale)
                .collect();
            HermitianMatrix::sym_outer(&u, &v)
        })
        .collect();
    PencilFamily::new(members)
}

/// Random positive definite `P = GG*/n + 0.05·I`.
fn random_pd(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
    let g: Vec<CVec> = (0..n).map(|_| gaussian_vec(rng, n)).collect();
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let s: Complex64 = (0..n).map(|k| g[i][k] * g[j][k].conj()).sum();
            data[i * n + j] = s / n as f64;
        }
        data[i * n + i] += 0.05;
    }
    HermitianMatrix::new(n, data).expect("Hermitian by construction")
}

fn neg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|l| -l).collect()
}

fn feasible_from(family: PencilFamily, rng: &mut ChaCha8Rng) -> Generated {
    let n = family.dim();
    let p = random_pd(rng, n);
    let mut lambda_star: Vec<f64> = (0..family.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut a = HermitianMatrix::combination(Some(&p), &neg(&lambda_star), family.members());
    // λ* is stretched until A itself is not PSD, so λ = 0 is never a solution.
    for _ in 0..30 {
        if a.min_eig().map_or(true, |e| e < 0.0) {
            break;
        }
        lambda_star.iter_mut().for_each(|l| *l *= 2.0);
        a = HermitianMatrix::combination(Some(&p), &neg(&lambda_star), family.members());
    }
    Generated {
        a: Some(a),
        family,
        lambda_star: Some(lambda_star),
    }
}

/// `A = P − Σ λ*ᵢBᵢ` over a strongly indefinite family, `P` positive definite and `A`
/// itself not PSD.
pub fn feasible(m: usize, n: usize, seed: u64) -> Result<Generated> {
    let family = strongly_indefinite(m, n, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4645_4153);
    Ok(feasible_from(family, &mut rng))
}

/// `A = P − λ*₁B₁ − λ*₂B₂` over a weakly indefinite random pair.
pub fn feasible_m2(n: usize, seed: u64) -> Result<Generated> {
    let family = indefinite_pair(n, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4d32_4d32);
    Ok(feasible_from(family, &mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{classify, default_tol, DefKind};

    #[test]
    fn example_first_row() {
        let f = example34();
        assert_eq!(f.get(0).rows()[0], vector::from_real(&[1.0, 0.0, 0.0, 0.0]));
        for b in f.members() {
            assert_eq!(classify(b, default_tol(b)).unwrap().kind, DefKind::Indefinite);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(feasible(3, 5, 7).unwrap(), feasible(3, 5, 7).unwrap());
        assert_eq!(indefinite_pair(4, 2).unwrap(), indefinite_pair(4, 2).unwrap());
        assert_ne!(feasible(3, 5, 7).unwrap(), feasible(3, 5, 8).unwrap());
    }

    #[test]
    fn feasible_ground_truth_verifies() {
        let g = feasible(3, 6, 1).unwrap();
        let m = HermitianMatrix::combination(
            g.a.as_ref(),
            g.lambda_star.as_ref().unwrap(),
            g.family.members(),
        );
        assert!(m.min_eig().unwrap() > 0.0);
    }

    #[test]
    fn shared_vector_construction_needs_room() {
        assert!(strongly_indefinite(5, 3, 0).is_err());
        assert!(strongly_indefinite(4, 3, 0).is_ok());
    }
}
