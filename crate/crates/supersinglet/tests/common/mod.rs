//! Shared builders for the integration suites.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use supersinglet::{ComplexMatrix, ComplexVector, Cplx};

pub fn c(re: f64, im: f64) -> Cplx {
    Cplx::new(re, im)
}

pub fn cr(re: f64) -> Cplx {
    Cplx::new(re, 0.0)
}

/// Matrix from rows of (re, im) pairs.
pub fn cmat(rows: &[&[(f64, f64)]]) -> ComplexMatrix {
    let nr = rows.len();
    let nc = rows[0].len();
    ComplexMatrix::from_fn(nr, nc, |i, j| c(rows[i][j].0, rows[i][j].1))
}

pub fn cvec(entries: &[(f64, f64)]) -> ComplexVector {
    ComplexVector::from_iterator(entries.len(), entries.iter().map(|&(re, im)| c(re, im)))
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn sigma_x() -> ComplexMatrix {
    cmat(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]])
}

pub fn sigma_y() -> ComplexMatrix {
    cmat(&[&[(0.0, 0.0), (0.0, -1.0)], &[(0.0, 1.0), (0.0, 0.0)]])
}

pub fn sigma_z() -> ComplexMatrix {
    cmat(&[&[(1.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (-1.0, 0.0)]])
}

pub fn seeded_rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Uniform complex entries in the unit square, centered.
pub fn random_cmat(rng: &mut ChaCha12Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    })
}

pub fn random_hermitian(rng: &mut ChaCha12Rng, n: usize) -> ComplexMatrix {
    let g = random_cmat(rng, n, n);
    (&g + g.adjoint()) * cr(0.5)
}

/// Random state amplitudes of dimension `len`, normalized.
pub fn random_state_amps(rng: &mut ChaCha12Rng, len: usize) -> ComplexVector {
    let v = ComplexVector::from_fn(len, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    let n = v.norm();
    v / cr(n)
}
