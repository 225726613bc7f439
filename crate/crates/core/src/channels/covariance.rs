use serde::Serialize;

use super::weyl_channel::channel_weyl_spectrum;
use super::{KrausChannel, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::random::{random_density, stream_rng, uniform};
use crate::linalg::CMat;
use crate::scalar::Real;
use crate::weyl::{fourier_basis, group_element, Basis};

const SPECTRAL_TOL: f64 = 1e-10;

/// Pinching `x -> sum_j P_j x P_j` onto the diagonal algebra of a basis.
#[derive(Debug, Clone)]
pub struct ConditionalExpectation<T> {
    basis: Basis<T>,
}

impl<T: Real> ConditionalExpectation<T> {
    pub fn basis(&self) -> &Basis<T> {
        &self.basis
    }
}

impl<T: Real> QuantumChannel<T> for ConditionalExpectation<T> {
    fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn kraus(&self) -> Vec<CMat<T>> {
        (0..self.basis.dim()).map(|j| self.basis.projector(j)).collect()
    }

    fn map(&self, x: &CMat<T>) -> CMat<T> {
        self.basis.pinch(x)
    }
}

pub fn conditional_expectation<T: Real>(basis: &Basis<T>) -> ConditionalExpectation<T> {
    ConditionalExpectation { basis: basis.clone() }
}

#[derive(Debug, Clone, Serialize)]
pub struct CovarianceReport {
    /// `max || Phi(U rho U^dag) - U Phi(rho) U^dag ||` over the sampled pairs.
    pub max_deviation: f64,
    pub spectral_criterion: bool,
    pub samples: usize,
    pub seed: u64,
}

/// Spectral covariance test for the group diagonal in `group`.
///
/// The channel is moved into the frame `V = sum_j |f_j><b_j|` that sends the
/// group basis to the Fourier basis, where the group is spanned by the shifts
/// `U_{m,0}`. The criterion holds iff the rotated channel is diagonal on Weyl
/// operators and `lambda_{st}` does not depend on `s` for every `t >= 1`.
pub fn spectral_criterion<T: Real, C: QuantumChannel<T> + ?Sized>(ch: &C, group: &Basis<T>) -> Result<bool> {
    let d = ch.dim();
    if group.dim() != d {
        return Err(Error::Dimension(format!(
            "group basis of dimension {} for a channel on C^{d}",
            group.dim()
        )));
    }
    let f = fourier_basis::<T>(d);
    let mut v = CMat::zeros(d, d);
    for j in 0..d {
        v = &v + &CMat::outer(f.vector(j), group.vector(j));
    }
    let rotated = KrausChannel::frame_changed(ch, &v);
    let (lambda, residual) = channel_weyl_spectrum(&rotated);
    let tol = T::lit(SPECTRAL_TOL).max(T::validation_tol());
    if residual > tol {
        return Ok(false);
    }
    for t in 1..d {
        let first = lambda[0][t];
        if (1..d).any(|s| (lambda[s][t] - first).norm() > tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Samples `samples` pairs of a random group element over `group` and a
/// random state; sample `i` draws from substream `i` of `seed`.
pub fn check_covariance<T: Real, C: QuantumChannel<T> + ?Sized>(
    ch: &C,
    group: &Basis<T>,
    samples: usize,
    seed: u64,
) -> Result<CovarianceReport> {
    let spectral = spectral_criterion(ch, group)?;
    let d = ch.dim();
    let mut worst = T::zero();
    for i in 0..samples {
        let mut rng = stream_rng(seed, i as u64);
        let phases: Vec<T> = (0..d).map(|_| T::TAU() * uniform::<T>(&mut rng)).collect();
        let u = group_element(group, &phases)?;
        let rho = random_density::<T>(d, d, &mut rng);
        let lhs = ch.map(&u.conjugate(rho.mat()));
        let rhs = u.conjugate(&ch.map(rho.mat()));
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(CovarianceReport {
        max_deviation: worst.as_f64(),
        spectral_criterion: spectral,
        samples,
        seed,
    })
}
