//! Discrete Weyl operators, mutually unbiased bases and the maximum
//! commutative groups they generate.
//!
//! `U_{m,n} = sum_k e^{2 pi i k n / d} |k + m mod d><k|` acts on `C^d` with the
//! computational basis `|k>`. For `d = 2` the literal matrices are
//!
//! | index | matrix      |
//! |-------|-------------|
//! | (0,0) | `I`         |
//! | (1,0) | `sigma_x`   |
//! | (0,1) | `sigma_z`   |
//! | (1,1) | `-i sigma_y`|
//!
//! Qubit channels elsewhere in the crate are written with literal Pauli
//! matrices; [`pauli_label`] gives the lookup used when a Weyl index has to be
//! read as a Pauli conjugation (phases drop out of `U x U^dag`).

mod group;
mod mub;

pub use group::{expand_in_shift_algebra, group_element, shift_expansion_residual, GroupElement};
pub use mub::{fourier_basis, is_prime, mub_family, mub_projector, shift_power, shift_power_phase, Basis, BasisLabel, MubFamily};

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::scalar::{root_of_unity, Real};

/// Index `(m, n)` of the Weyl operator `U_{m,n}` on `C^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylIndex {
    pub d: usize,
    pub m: usize,
    pub n: usize,
}

impl WeylIndex {
    pub fn new(d: usize, m: usize, n: usize) -> Result<Self> {
        if d == 0 || m >= d || n >= d {
            return Err(Error::Dimension(format!("Weyl index ({m},{n}) invalid for d = {d}")));
        }
        Ok(Self { d, m, n })
    }

    /// Reduces arbitrary integers mod `d`.
    pub fn wrapping(d: usize, m: i64, n: i64) -> Self {
        let di = d as i64;
        Self {
            d,
            m: m.rem_euclid(di) as usize,
            n: n.rem_euclid(di) as usize,
        }
    }

    /// All `d^2` indices in row-major `(m, n)` order.
    pub fn all(d: usize) -> impl Iterator<Item = WeylIndex> {
        (0..d).flat_map(move |m| (0..d).map(move |n| WeylIndex { d, m, n }))
    }
}

/// `U_{m,n}`.
pub fn weyl_operator<T: Real>(idx: WeylIndex) -> CMat<T> {
    let d = idx.d;
    let mut u = CMat::zeros(d, d);
    for k in 0..d {
        u[((k + idx.m) % d, k)] = root_of_unity((k * idx.n) as i64, d);
    }
    u
}

/// Applies `U_{m,n}` to a vector without forming the matrix.
pub fn weyl_apply<T: Real>(idx: WeylIndex, v: &[Complex<T>]) -> Vec<Complex<T>> {
    let d = idx.d;
    let mut out = vec![Complex::zero(); d];
    for k in 0..d {
        out[(k + idx.m) % d] = v[k] * root_of_unity::<T>((k * idx.n) as i64, d);
    }
    out
}

/// `e^{2 pi i (m' n - m n') / d}`, the scalar with `U_a U_b = phase U_b U_a`.
pub fn commutation_phase<T: Real>(a: WeylIndex, b: WeylIndex) -> Result<Complex<T>> {
    if a.d != b.d {
        return Err(Error::Dimension(format!(
            "commutation phase between d = {} and d = {}",
            a.d, b.d
        )));
    }
    let k = (b.m * a.n) as i64 - (a.m * b.n) as i64;
    Ok(root_of_unity(k, a.d))
}

/// Largest deviation from the commutation relation over all index pairs.
pub fn commutation_defect<T: Real>(d: usize) -> T {
    let ops: Vec<(WeylIndex, CMat<T>)> = WeylIndex::all(d).map(|i| (i, weyl_operator(i))).collect();
    let mut worst = T::zero();
    for (a, ua) in &ops {
        for (b, ub) in &ops {
            let phase = commutation_phase::<T>(*a, *b).expect("same dimension");
            let lhs = ua.matmul(ub);
            let rhs = ub.matmul(ua).scale(phase);
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
    }
    worst
}

/// Pauli label of a qubit Weyl index, ignoring the global phase.
pub fn pauli_label(idx: WeylIndex) -> Option<char> {
    match (idx.d, idx.m, idx.n) {
        (2, 0, 0) => Some('I'),
        (2, 1, 0) => Some('x'),
        (2, 0, 1) => Some('z'),
        (2, 1, 1) => Some('y'),
        _ => None,
    }
}

pub fn pauli_x<T: Real>() -> CMat<T> {
    CMat::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_y<T: Real>() -> CMat<T> {
    let i = Complex::new(T::zero(), T::one());
    CMat::from_fn(2, 2, |r, c| match (r, c) {
        (0, 1) => -i,
        (1, 0) => i,
        _ => Complex::zero(),
    })
}

pub fn pauli_z<T: Real>() -> CMat<T> {
    CMat::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}
