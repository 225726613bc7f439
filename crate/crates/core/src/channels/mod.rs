//! Quantum channels on `C^d`: Weyl channels, phase dampings, Pauli channels,
//! conditional expectations, covariance checks and convex decompositions.
//!
//! Every channel exposes Kraus operators through [`QuantumChannel`]; channel
//! equality is certified on the `d^2` matrix units (see
//! [`channel_distance`]), which is complete by linearity.

mod covariance;
mod decompose;
mod pauli;
mod weyl_channel;

pub use covariance::{
    check_covariance, conditional_expectation, spectral_criterion, ConditionalExpectation, CovarianceReport,
};
pub use decompose::{decompose_prop7, Decomposition, DecompositionTerm, Prop7Decomposition};
pub use pauli::{
    decompose_tp2, decompose_two_pauli, evaluate_pauli_mixture, mix_pauli, pauli_transfer, solve_pauli_mixture, MixtureSolution, PauliCoeffs,
    PauliOp, PauliTransfer, TwoPauliDecomposition,
};
pub(crate) use weyl_channel::check_distribution;
pub use weyl_channel::{
    channel_weyl_spectrum, make_standard_channel, weyl_spectrum, ChannelKind, PhaseDamping, StandardChannel,
    WeylChannel,
};

use num_complex::Complex;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{CMat, DensityMatrix};
use crate::scalar::Real;

const TRACE_PRESERVING_TOL: f64 = 1e-10;

/// A completely positive trace-preserving map `C^{d x d} -> C^{d x d}`.
pub trait QuantumChannel<T: Real>: Send + Sync {
    fn dim(&self) -> usize;

    fn kraus(&self) -> Vec<CMat<T>>;

    /// Action on an arbitrary `d x d` matrix.
    fn map(&self, x: &CMat<T>) -> CMat<T> {
        let d = self.dim();
        let mut out = CMat::zeros(d, d);
        for k in self.kraus() {
            out = &out + &k.conjugate(x);
        }
        out
    }
}

/// Channel given directly by Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausChannel<T> {
    dim: usize,
    ops: Vec<CMat<T>>,
}

impl<T: Real> KrausChannel<T> {
    /// Checks `sum K^dag K = I` within `1e-10`.
    pub fn new(ops: Vec<CMat<T>>) -> Result<Self> {
        let dim = ops
            .first()
            .map(|k| k.cols())
            .ok_or_else(|| Error::Contract("channel needs at least one Kraus operator".into()))?;
        if ops.iter().any(|k| k.rows() != dim || k.cols() != dim) {
            return Err(Error::Dimension("Kraus operators must all be d x d".into()));
        }
        let mut sum = CMat::zeros(dim, dim);
        for k in &ops {
            sum = &sum + &k.adjoint().matmul(k);
        }
        let defect = sum.max_abs_diff(&CMat::identity(dim));
        if defect > T::lit(TRACE_PRESERVING_TOL).max(T::validation_tol()) {
            return Err(Error::Contract(format!(
                "Kraus operators not trace preserving (defect {:e})",
                defect.as_f64()
            )));
        }
        Ok(Self { dim, ops })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            ops: vec![CMat::identity(dim)],
        }
    }

    /// Snapshot of any channel.
    pub fn from_channel<C: QuantumChannel<T> + ?Sized>(ch: &C) -> Self {
        Self {
            dim: ch.dim(),
            ops: ch.kraus(),
        }
    }

    /// `a (x) b`, Kraus operators pairwise tensored.
    pub fn tensor<A, B>(a: &A, b: &B) -> Self
    where
        A: QuantumChannel<T> + ?Sized,
        B: QuantumChannel<T> + ?Sized,
    {
        let kb = b.kraus();
        let ops = a
            .kraus()
            .iter()
            .flat_map(|ka| kb.iter().map(move |k| ka.kron(k)))
            .collect();
        Self {
            dim: a.dim() * b.dim(),
            ops,
        }
    }

    /// `x -> V ch(x) V^dag`.
    pub fn post_conjugated<C: QuantumChannel<T> + ?Sized>(ch: &C, v: &CMat<T>) -> Self {
        Self {
            dim: ch.dim(),
            ops: ch.kraus().iter().map(|k| v.matmul(k)).collect(),
        }
    }

    /// `x -> V ch(V^dag x V) V^dag`: the channel seen in the frame rotated by `V`.
    pub fn frame_changed<C: QuantumChannel<T> + ?Sized>(ch: &C, v: &CMat<T>) -> Self {
        let vd = v.adjoint();
        Self {
            dim: ch.dim(),
            ops: ch.kraus().iter().map(|k| v.matmul(k).matmul(&vd)).collect(),
        }
    }

    pub fn ops(&self) -> &[CMat<T>] {
        &self.ops
    }
}

impl<T: Real> QuantumChannel<T> for KrausChannel<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn kraus(&self) -> Vec<CMat<T>> {
        self.ops.clone()
    }

    fn map(&self, x: &CMat<T>) -> CMat<T> {
        let mut out = CMat::zeros(self.dim, self.dim);
        for k in &self.ops {
            out = &out + &k.conjugate(x);
        }
        out
    }
}

/// `ch(rho)`.
pub fn apply<T: Real, C: QuantumChannel<T> + ?Sized>(ch: &C, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    if rho.dim() != ch.dim() {
        return Err(Error::Dimension(format!(
            "channel on C^{} applied to a {}-dim state",
            ch.dim(),
            rho.dim()
        )));
    }
    Ok(DensityMatrix::from_hermitian_unchecked(ch.map(rho.mat()), rho.factors().to_vec()))
}

/// `(ch (x) Id_K)(x)` for `x` on `H (x) K` with `dim H = ch.dim()`.
pub fn apply_tensor_id<T: Real, C: QuantumChannel<T> + ?Sized>(
    ch: &C,
    x: &DensityMatrix<T>,
) -> Result<DensityMatrix<T>> {
    let (dh, dk) = x.bipartite_dims()?;
    if dh != ch.dim() {
        return Err(Error::Dimension(format!(
            "channel on C^{} lifted onto a first factor of dimension {dh}",
            ch.dim()
        )));
    }
    let id = CMat::identity(dk);
    let n = dh * dk;
    let mut out = CMat::zeros(n, n);
    for k in ch.kraus() {
        out = &out + &k.kron(&id).conjugate(x.mat());
    }
    Ok(DensityMatrix::from_hermitian_unchecked(out, vec![dh, dk]))
}

/// Matrix unit `|i><j|`.
pub fn matrix_unit<T: Real>(d: usize, i: usize, j: usize) -> CMat<T> {
    let mut e = CMat::zeros(d, d);
    e[(i, j)] = Complex::one();
    e
}

/// Largest entry deviation between two linear maps over all matrix units.
pub fn channel_distance<T, A, B>(a: &A, b: &B) -> Result<T>
where
    T: Real,
    A: QuantumChannel<T> + ?Sized,
    B: QuantumChannel<T> + ?Sized,
{
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!("channels on C^{} and C^{}", a.dim(), b.dim())));
    }
    channel_distance_to_map(a, |x| b.map(x))
}

/// Like [`channel_distance`] against an arbitrary linear map.
pub fn channel_distance_to_map<T, A>(a: &A, target: impl Fn(&CMat<T>) -> CMat<T>) -> Result<T>
where
    T: Real,
    A: QuantumChannel<T> + ?Sized,
{
    let d = a.dim();
    let mut worst = T::zero();
    for i in 0..d {
        for j in 0..d {
            let e = matrix_unit(d, i, j);
            worst = worst.max(a.map(&e).max_abs_diff(&target(&e)));
        }
    }
    Ok(worst)
}
