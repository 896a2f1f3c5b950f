//! Fixed benchmark instances.

use pencil_core::gen::{self, Generated};
use pencil_core::HermitianMatrix;

pub const SEED: u64 = 2024;

pub fn hermitian(n: usize) -> HermitianMatrix {
    gen::random_hermitian(n, SEED)
}

pub fn single(n: usize) -> Generated {
    gen::single(n, SEED).expect("valid dimensions")
}

pub fn feasible(m: usize, n: usize) -> Generated {
    if m == 2 {
        gen::feasible_m2(n, SEED)
    } else {
        gen::feasible(m, n, SEED)
    }
    .expect("valid dimensions")
}
