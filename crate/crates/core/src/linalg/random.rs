//! Seeded random matrices and states.
//!
//! Every stochastic routine draws from [`Rng`], ChaCha8 seeded from a `u64`.
//! ChaCha is counter-based: independent substreams are selected with
//! [`stream_rng`], which keeps per-case randomness reproducible no matter how
//! many cases run or in which order.

use num_complex::Complex;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{inner, vec_norm, CMat};
use super::state::{DensityMatrix, PureState};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for substream `stream` of the master `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed for case `index` of a sweep with master `seed` (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn gaussian<T: Real>(rng: &mut Rng) -> T {
    let x: f64 = rng.sample(StandardNormal);
    T::lit(x)
}

pub fn uniform<T: Real>(rng: &mut Rng) -> T {
    T::lit(rng.random::<f64>())
}

pub fn complex_gaussian<T: Real>(rng: &mut Rng) -> Complex<T> {
    Complex::new(gaussian(rng), gaussian(rng))
}

pub fn gaussian_vector<T: Real>(dim: usize, rng: &mut Rng) -> Vec<Complex<T>> {
    (0..dim).map(|_| complex_gaussian(rng)).collect()
}

/// Unit vector with Haar-distributed direction.
pub fn random_unit_vector<T: Real>(dim: usize, rng: &mut Rng) -> Vec<Complex<T>> {
    loop {
        let v = gaussian_vector::<T>(dim, rng);
        let n = vec_norm(&v);
        if n > T::lit(1e-8) {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Haar-random pure state of dimension `dim` from `seed`.
pub fn haar_random_pure<T: Real>(dim: usize, seed: u64) -> Result<PureState<T>> {
    if dim == 0 {
        return Err(Error::Dimension("pure state of dimension 0".into()));
    }
    let mut rng = rng_from_seed(seed);
    PureState::new(random_unit_vector(dim, &mut rng))
}

/// Haar-random unitary via Gram-Schmidt on a complex Ginibre matrix.
pub fn random_unitary<T: Real>(dim: usize, rng: &mut Rng) -> CMat<T> {
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = gaussian_vector::<T>(dim, rng);
        // Two passes of modified Gram-Schmidt.
        for _ in 0..2 {
            for u in &cols {
                let proj = inner(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi = *vi - *ui * proj;
                }
            }
        }
        let n = vec_norm(&v);
        if n > T::lit(1e-6) {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    CMat::from_columns(&cols)
}

pub fn random_hermitian<T: Real>(dim: usize, rng: &mut Rng) -> CMat<T> {
    let g = CMat::from_fn(dim, dim, |_, _| complex_gaussian::<T>(rng));
    g.hermitian_part()
}

/// Random mixed state `G G^dag / Tr` with a `dim x rank` Ginibre factor.
pub fn random_density<T: Real>(dim: usize, rank: usize, rng: &mut Rng) -> DensityMatrix<T> {
    let rank = rank.max(1);
    let g = CMat::from_fn(dim, rank, |_, _| complex_gaussian::<T>(rng));
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::from_hermitian_unchecked(m.scale_real(T::one() / tr), vec![dim])
}

/// Random probability vector, uniform on the simplex.
pub fn random_distribution<T: Real>(n: usize, rng: &mut Rng) -> Vec<T> {
    let w: Vec<T> = (0..n)
        .map(|_| -uniform::<T>(rng).max(T::lit(1e-300)).ln())
        .collect();
    let s: T = w.iter().copied().sum();
    w.into_iter().map(|x| x / s).collect()
}
