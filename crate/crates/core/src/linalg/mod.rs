//! Dense complex linear algebra: matrices, states, spectra and entropies.

mod eigen;
mod entropy;
mod matrix;
pub mod random;
mod state;

pub use eigen::{eig_hermitian, HermitianEigen};
pub use entropy::{matrix_entropy, relative_entropy, shannon_entropy, von_neumann_entropy};
pub use matrix::{inner, tensor, tensor_vec, vec_norm, CMat};
pub use random::haar_random_pure;
pub use state::{compress_first_factor, conditional_state, partial_trace, DensityMatrix, PureState};
