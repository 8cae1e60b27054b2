//! Seeded random matrices for sampling tests and optimizer restarts.

use crate::linalg::{self, CMat};
use faer::{c64, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    Mat::from_fn(rows, cols, |_, _| {
        c64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Hermitian matrix with Gaussian entries.
pub fn hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    linalg::hermitian_part(ginibre(d, d, rng).as_ref())
}

/// Density matrix G G† / tr from a d × d Ginibre matrix; full rank almost surely.
pub fn density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    density_rank(d, d, rng)
}

pub fn density_rank<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> CMat {
    let g = ginibre(d, rank, rng);
    let p = &g * g.adjoint();
    let tr = linalg::trace(p.as_ref());
    linalg::hermitian_part(linalg::scaled(p.as_ref(), linalg::ONE / tr).as_ref())
}

/// Haar-random unitary via QR of a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = ginibre(d, d, rng);
    let qr = g.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    let mut out = q.to_owned();
    for j in 0..d {
        let x = r[(j, j)];
        let phase = if x.norm() > 0.0 { x / x.norm() } else { linalg::ONE };
        for i in 0..d {
            out[(i, j)] *= phase;
        }
    }
    out
}

pub fn real_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}
