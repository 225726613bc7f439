//! Weyl channels covariant under maximum commutative groups of unitaries.
//!
//! The crate builds the discrete Weyl operators `U_{m,n}`, the `d + 1`
//! mutually unbiased bases of a prime dimension, Weyl and Pauli channels with
//! their phase-damping decompositions, and numerically checks the output
//! entropy lower bounds for phase dampings, the depolarizing channel and the
//! qubit "two-Pauli" channel. A multi-start optimizer estimates minimal output
//! entropies and their additivity on small tensor products.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the tolerances in the
//! checks are calibrated for. Entropies are in nats.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod channels;
mod error;
pub mod linalg;
pub mod minent;
pub mod orbits;
mod scalar;
pub mod weyl;

pub use error::{Error, Result};
pub use scalar::{cis, root_of_unity, Real};

pub type CMat64 = linalg::CMat<f64>;
pub type DensityMatrix64 = linalg::DensityMatrix<f64>;
pub type PureState64 = linalg::PureState<f64>;
pub type Basis64 = weyl::Basis<f64>;
pub type MubFamily64 = weyl::MubFamily<f64>;
pub type WeylChannel64 = channels::WeylChannel<f64>;
pub type PauliCoeffs64 = channels::PauliCoeffs<f64>;
pub type PhaseDamping64 = channels::PhaseDamping<f64>;
pub type KrausChannel64 = channels::KrausChannel<f64>;
pub type StandardChannel64 = channels::StandardChannel<f64>;
pub type Decomposition64 = channels::Decomposition<f64>;
pub type BoundReport64 = bounds::BoundReport<f64>;
pub type ProofTrace64 = bounds::ProofTrace<f64>;
pub type MinEntResult64 = minent::MinEntResult<f64>;
