use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::decompose::{Decomposition, DecompositionTerm};
use super::weyl_channel::{check_distribution, WeylChannel};
use super::{KrausChannel, QuantumChannel};
use crate::error::{out_of_range, Error, Result};
use crate::linalg::{eig_hermitian, CMat};
use crate::scalar::Real;
use crate::weyl::{pauli_x, pauli_y, pauli_z};

const TRANSFER_TOL: f64 = 1e-10;
const NEGATIVE_WEIGHT_TOL: f64 = 1e-10;
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [PauliOp::I, PauliOp::X, PauliOp::Y, PauliOp::Z];

    pub fn index(self) -> usize {
        match self {
            Self::I => 0,
            Self::X => 1,
            Self::Y => 2,
            Self::Z => 3,
        }
    }

    /// `(x, z)` bits, with `Y ~ XZ`.
    fn bits(self) -> (u8, u8) {
        match self {
            Self::I => (0, 0),
            Self::X => (1, 0),
            Self::Y => (1, 1),
            Self::Z => (0, 1),
        }
    }

    fn from_bits(x: u8, z: u8) -> Self {
        match (x, z) {
            (0, 0) => Self::I,
            (1, 0) => Self::X,
            (1, 1) => Self::Y,
            _ => Self::Z,
        }
    }

    /// Label of `self * other` up to phase.
    pub fn product(self, other: PauliOp) -> PauliOp {
        let (a, b) = self.bits();
        let (c, e) = other.bits();
        Self::from_bits(a ^ c, b ^ e)
    }

    pub fn matrix<T: Real>(self) -> CMat<T> {
        match self {
            Self::I => CMat::identity(2),
            Self::X => pauli_x(),
            Self::Y => pauli_y(),
            Self::Z => pauli_z(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Self::I => 'I',
            Self::X => 'x',
            Self::Y => 'y',
            Self::Z => 'z',
        }
    }
}

/// Pauli channel `x -> w_I x + w_x s_x x s_x + w_y s_y x s_y + w_z s_z x s_z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliCoeffs<T> {
    w: [T; 4],
}

impl<T: Real> PauliCoeffs<T> {
    pub fn new(w: [T; 4]) -> Result<Self> {
        check_distribution("Pauli weights", &w)?;
        Ok(Self { w })
    }

    /// Weights without validation; used for intermediate linear algebra.
    pub fn raw(w: [T; 4]) -> Self {
        Self { w }
    }

    pub fn identity() -> Self {
        Self {
            w: [T::one(), T::zero(), T::zero(), T::zero()],
        }
    }

    /// `(1 - 2p, 0, p, p)` for `0 < p < 1/2`.
    pub fn two_pauli(p: T) -> Result<Self> {
        if !(p > T::zero() && p < T::lit(0.5)) {
            return Err(out_of_range("p", p.as_f64(), "(0, 1/2)"));
        }
        Self::new([T::one() - p - p, T::zero(), p, p])
    }

    /// Damping `(1 - p) x + p P x P`.
    pub fn damping(axis: PauliOp, p: T) -> Result<Self> {
        let mut w = [T::zero(); 4];
        w[0] = T::one() - p;
        w[axis.index()] = w[axis.index()] + p;
        Self::new(w)
    }

    pub fn weights(&self) -> [T; 4] {
        self.w
    }

    pub fn weight(&self, op: PauliOp) -> T {
        self.w[op.index()]
    }

    /// `(s_x, s_y, s_z)`: the factors by which the Bloch components are scaled.
    pub fn bloch_scalings(&self) -> [T; 3] {
        let [i, x, y, z] = self.w;
        [i + x - y - z, i - x + y - z, i - x - y + z]
    }

    pub fn from_bloch_scalings(s: [T; 3]) -> Self {
        let q = T::lit(0.25);
        let [a, b, c] = s;
        let one = T::one();
        Self {
            w: [
                (one + a + b + c) * q,
                (one + a - b - c) * q,
                (one - a + b - c) * q,
                (one - a - b + c) * q,
            ],
        }
    }

    /// Weights of `x -> P Phi(x) P`.
    pub fn conjugated(&self, by: PauliOp) -> Self {
        let mut w = [T::zero(); 4];
        for op in PauliOp::ALL {
            w[by.product(op).index()] = self.w[op.index()];
        }
        Self { w }
    }

    /// Weyl form with `U_{1,0} ~ sigma_x`, `U_{0,1} ~ sigma_z`, `U_{1,1} ~ sigma_y`.
    pub fn to_weyl(&self) -> WeylChannel<T> {
        let [i, x, y, z] = self.w;
        WeylChannel::new(2, vec![vec![i, z], vec![x, y]]).expect("valid Pauli weights")
    }

    pub fn from_weyl(w: &WeylChannel<T>) -> Self {
        Self {
            w: [w.prob(0, 0), w.prob(1, 0), w.prob(1, 1), w.prob(0, 1)],
        }
    }

    fn max_diff(&self, other: &Self) -> T {
        (0..4).fold(T::zero(), |acc, k| acc.max((self.w[k] - other.w[k]).abs()))
    }
}

impl<T: Real> QuantumChannel<T> for PauliCoeffs<T> {
    fn dim(&self) -> usize {
        2
    }

    fn kraus(&self) -> Vec<CMat<T>> {
        PauliOp::ALL
            .iter()
            .filter(|op| self.w[op.index()] > T::zero())
            .map(|op| op.matrix::<T>().scale_real(self.w[op.index()].sqrt()))
            .collect()
    }

    fn map(&self, x: &CMat<T>) -> CMat<T> {
        let mut out = CMat::zeros(2, 2);
        for op in PauliOp::ALL {
            let w = self.w[op.index()];
            if w != T::zero() {
                out.add_scaled(&op.matrix::<T>().conjugate(x), Complex::new(w, T::zero()));
            }
        }
        out
    }
}

/// Pauli transfer data of a Pauli-diagonal qubit channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTransfer<T> {
    pub coeffs: PauliCoeffs<T>,
    pub scalings: [T; 3],
}

/// Reads `R_ij = Tr(s_i Phi(s_j))/2`; rejects channels with off-diagonal
/// transfer entries above `1e-10`.
pub fn pauli_transfer<T: Real, C: QuantumChannel<T> + ?Sized>(ch: &C) -> Result<PauliTransfer<T>> {
    if ch.dim() != 2 {
        return Err(Error::Dimension(format!("Pauli transfer of a channel on C^{}", ch.dim())));
    }
    let half = T::lit(0.5);
    let mut r = [[T::zero(); 4]; 4];
    let mut off = T::zero();
    for j in PauliOp::ALL {
        let out = ch.map(&j.matrix());
        for i in PauliOp::ALL {
            let e = i.matrix::<T>().matmul(&out).trace() * half;
            if i == j {
                off = off.max(e.im.abs());
                r[i.index()][j.index()] = e.re;
            } else {
                off = off.max(e.norm());
            }
        }
    }
    if off > T::lit(TRANSFER_TOL).max(T::validation_tol()) || (r[0][0] - T::one()).abs() > T::lit(TRANSFER_TOL) {
        return Err(Error::Contract(format!(
            "channel is not Pauli diagonal (off-diagonal transfer {:e})",
            off.as_f64()
        )));
    }
    let scalings = [r[1][1], r[2][2], r[3][3]];
    Ok(PauliTransfer {
        coeffs: PauliCoeffs::from_bloch_scalings(scalings),
        scalings,
    })
}

/// Outcome of matching a target Pauli channel by conjugated components.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSolution<T> {
    pub weights: Vec<T>,
    /// Largest deviation of the mixed Pauli weights from the target.
    pub residual: T,
    /// No weight below `-1e-10`.
    pub convex: bool,
    /// Residual at most `1e-10`.
    pub feasible: bool,
}

/// Pauli weights of `sum_k weights_k P_k Phi_k P_k`.
pub fn mix_pauli<T: Real>(components: &[(PauliOp, PauliCoeffs<T>)], weights: &[T]) -> PauliCoeffs<T> {
    let mut w = [T::zero(); 4];
    for ((op, c), &a) in components.iter().zip(weights) {
        let cw = c.conjugated(*op).weights();
        for k in 0..4 {
            w[k] = w[k] + a * cw[k];
        }
    }
    PauliCoeffs::raw(w)
}

/// Residual and flags of a given weight vector.
pub fn evaluate_pauli_mixture<T: Real>(
    target: &PauliCoeffs<T>,
    components: &[(PauliOp, PauliCoeffs<T>)],
    weights: &[T],
) -> MixtureSolution<T> {
    let residual = mix_pauli(components, weights).max_diff(target);
    MixtureSolution {
        weights: weights.to_vec(),
        residual,
        convex: weights.iter().all(|&w| w >= -T::lit(NEGATIVE_WEIGHT_TOL)),
        feasible: residual <= T::lit(RESIDUAL_TOL).max(T::validation_tol()),
    }
}

/// Least-squares weights for the 4 x n system matching the Pauli weights of
/// the conjugated components to the target (minimum-norm pseudo-inverse).
pub fn solve_pauli_mixture<T: Real>(
    target: &PauliCoeffs<T>,
    components: &[(PauliOp, PauliCoeffs<T>)],
) -> MixtureSolution<T> {
    let n = components.len();
    if n == 0 {
        return evaluate_pauli_mixture(target, components, &[]);
    }
    let cols: Vec<[T; 4]> = components.iter().map(|(op, c)| c.conjugated(*op).weights()).collect();
    let b = target.weights();
    let gram = CMat::from_fn(n, n, |i, j| {
        Complex::new((0..4).map(|k| cols[i][k] * cols[j][k]).sum(), T::zero())
    });
    let atb: Vec<T> = cols.iter().map(|c| (0..4).map(|k| c[k] * b[k]).sum()).collect();
    let eig = eig_hermitian(&gram).expect("Gram matrix is symmetric");
    let cutoff = T::lit(1e-13) * eig.values.last().copied().unwrap_or(T::one()).max(T::one());
    let mut x = vec![T::zero(); n];
    for (k, &l) in eig.values.iter().enumerate() {
        if l <= cutoff {
            continue;
        }
        let v = eig.vector(k);
        let proj = v
            .iter()
            .zip(&atb)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (vi, &a)| acc + vi.conj() * a);
        for (xi, vi) in x.iter_mut().zip(&v) {
            *xi = *xi + (*vi * proj).re / l;
        }
    }
    evaluate_pauli_mixture(target, components, &x)
}

/// Decompositions of the two-Pauli channel into Pauli-conjugated dampings.
#[derive(Debug, Clone)]
pub struct TwoPauliDecomposition<T> {
    pub p: T,
    /// `{Phi_1, sigma_z Phi_0 sigma_z}` with weights `((1-2p)/(1-p), p/(1-p))`,
    /// where `Phi_0 = (1-p, p, 0, 0)` and `Phi_1 = (1-p, 0, p, 0)`.
    pub corrected: Decomposition<T>,
    pub corrected_solution: MixtureSolution<T>,
    /// The split `((1-3p)/(1-p)) Phi_1 + (2p/(1-p)) sigma_z Psi_1 sigma_z` with
    /// `Psi_1 = (p, (1-p)/2, 0, (1-p)/2)`; exact only at `p = 1/3`.
    pub printed: MixtureSolution<T>,
}

fn pauli_term<T: Real>(weight: T, op: PauliOp, component: &PauliCoeffs<T>, label: String) -> DecompositionTerm<T> {
    DecompositionTerm {
        weight,
        conjugator: op.matrix(),
        component: KrausChannel::from_channel(component),
        label,
    }
}

fn check_tp_range<T: Real>(p: T) -> Result<()> {
    let third = T::one() / T::lit(3.0);
    if !(p > T::zero() && p <= third + T::lit(1e-15)) {
        return Err(out_of_range("p", p.as_f64(), "(0, 1/3]"));
    }
    Ok(())
}

pub fn decompose_two_pauli<T: Real>(p: T) -> Result<TwoPauliDecomposition<T>> {
    check_tp_range(p)?;
    let one = T::one();
    let target = PauliCoeffs::two_pauli(p)?;
    let phi0 = PauliCoeffs::damping(PauliOp::X, p)?;
    let phi1 = PauliCoeffs::damping(PauliOp::Y, p)?;

    let components = [(PauliOp::I, phi1), (PauliOp::Z, phi0)];
    let solution = solve_pauli_mixture(&target, &components);
    if !(solution.feasible && solution.convex) {
        return Err(Error::Contract(format!(
            "two-Pauli mixture not found (residual {:e})",
            solution.residual.as_f64()
        )));
    }
    let corrected = Decomposition::new(
        vec![
            pauli_term(solution.weights[0], PauliOp::I, &phi1, "Phi_1".into()),
            pauli_term(solution.weights[1], PauliOp::Z, &phi0, "sigma_z Phi_0 sigma_z".into()),
        ],
        KrausChannel::from_channel(&target),
    )?;

    let half = (one - p) * T::lit(0.5);
    let psi1 = PauliCoeffs::raw([p, half, T::zero(), half]);
    let printed = evaluate_pauli_mixture(
        &target,
        &[(PauliOp::I, phi1), (PauliOp::Z, psi1)],
        &[(one - T::lit(3.0) * p) / (one - p), (p + p) / (one - p)],
    );

    Ok(TwoPauliDecomposition {
        p,
        corrected,
        corrected_solution: solution,
        printed,
    })
}

/// `Psi_1 = (p, (1-p)/2, 0, (1-p)/2)` as the mixture
/// `{Phi_0, sigma_x Phi_1 sigma_x, sigma_z Phi_1 sigma_z}` with weights
/// `(p/(1-p), (1-3p)/(2(1-2p)), remainder)`.
pub fn decompose_tp2<T: Real>(p: T) -> Result<(Decomposition<T>, MixtureSolution<T>)> {
    check_tp_range(p)?;
    let one = T::one();
    let half = (one - p) * T::lit(0.5);
    let target = PauliCoeffs::new([p, half, T::zero(), half])?;
    let phi0 = PauliCoeffs::damping(PauliOp::X, p)?;
    let phi1 = PauliCoeffs::damping(PauliOp::Y, p)?;
    let components = [(PauliOp::I, phi0), (PauliOp::X, phi1), (PauliOp::Z, phi1)];
    let solution = solve_pauli_mixture(&target, &components);
    if !(solution.feasible && solution.convex) {
        return Err(Error::Contract(format!(
            "mixture for (p, (1-p)/2, 0, (1-p)/2) not found (residual {:e})",
            solution.residual.as_f64()
        )));
    }
    let labels = ["Phi_0", "sigma_x Phi_1 sigma_x", "sigma_z Phi_1 sigma_z"];
    let terms = components
        .iter()
        .zip(&solution.weights)
        .zip(labels)
        .map(|(((op, c), &w), l)| pauli_term(w, *op, c, l.into()))
        .collect();
    let dec = Decomposition::new(terms, KrausChannel::from_channel(&target))?;
    Ok((dec, solution))
}
