#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qlink_core::state::{CMatrix, CVector, DensityMatrix, PureStateVector};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Random PSD matrix `G G^dagger` of the given rank.
pub fn random_psd<R: Rng>(dim: usize, rank: usize, rng: &mut R) -> CMatrix {
    let g = DMatrix::from_fn(dim, rank, |_, _| gaussian(rng));
    &g * g.adjoint()
}

/// Random mixed state of random rank (1..=dim).
pub fn random_density<R: Rng>(dim: usize, rng: &mut R) -> DensityMatrix {
    let rank = rng.random_range(1..=dim);
    let m = random_psd(dim, rank, rng);
    let t = m.trace().re;
    DensityMatrix::new(m.unscale(t)).expect("normalized Gram matrix is a state")
}

pub fn random_pure<R: Rng>(dim: usize, rng: &mut R) -> DensityMatrix {
    let v = CVector::from_fn(dim, |_, _| gaussian(rng));
    PureStateVector::normalize(v).unwrap().to_density()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Smallest eigenvalue of a 2x2 Hermitian matrix in closed form.
pub fn min_eig_2x2(m: &CMatrix) -> f64 {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d).powi(2) + b.norm_sqr()).sqrt();
    mean - half_gap
}
