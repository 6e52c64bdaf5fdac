//! Seeded samplers for states and unitaries.

use faer::{c64, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::operators::HermitianOperator;

/// Default seed for every randomized command.
pub const DEFAULT_SEED: u64 = 0x5eed_2023;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` derived from `seed`, so that sample `j` is
/// the same whatever order samples are drawn in.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> c64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64::new(re, im)
}

/// Unit vector drawn from the unitarily invariant measure.
pub fn haar_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<c64> {
    let mut v: Vec<c64> = (0..dim).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `R`'s
/// diagonal divided out.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Mat<c64> {
    let g = Mat::<c64>::from_fn(dim, dim, |_, _| complex_normal(rng));
    let qr = g.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    Mat::from_fn(dim, dim, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64::new(1.0, 0.0) };
        q[(i, j)] * phase
    })
}

/// Random density operator `G G† / Tr(G G†)` with `G` a `dim × rank`
/// Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> HermitianOperator {
    let g = Mat::<c64>::from_fn(dim, rank, |_, _| complex_normal(rng));
    let rho = &g * g.adjoint();
    let tr: f64 = (0..dim).map(|i| rho[(i, i)].re).sum();
    HermitianOperator::from_mat_symmetrized(Mat::from_fn(dim, dim, |i, j| rho[(i, j)] / tr))
}
