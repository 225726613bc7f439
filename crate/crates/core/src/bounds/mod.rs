//! Numerical verifiers for the output entropy lower bounds.
//!
//! Each check evaluates both sides of a bound on a concrete bipartite state
//! `x` on `H (x) K`: the left side is `S((Phi (x) Id)(x))`, the right side an
//! entropy constant of the channel plus an average of conditional entropies
//! `S(x_j)`, `x_j = d Tr_H((|e_j><e_j| (x) I) x)`, over one or more bases of
//! `H`. Reports carry every ingredient so a failing case can be replayed.

mod trace;

pub use trace::{proof_trace, ProofTrace};

use num_complex::Complex;
use rayon::prelude::*;

use crate::channels::{
    apply_tensor_id, check_distribution, decompose_prop7, decompose_tp2, decompose_two_pauli, KrausChannel, PauliCoeffs,
    Prop7Decomposition, QuantumChannel, WeylChannel,
};
use crate::error::{out_of_range, Error, Result};
use crate::linalg::random::derive_seed;
use crate::linalg::{
    compress_first_factor, eig_hermitian, haar_random_pure, matrix_entropy, partial_trace, relative_entropy,
    shannon_entropy, von_neumann_entropy, CMat, DensityMatrix,
};
use crate::orbits::{admissibility_defect, balance_marginal_qubit};
use crate::scalar::{root_of_unity, Real};
use crate::weyl::{is_prime, mub_family, Basis, BasisLabel};

const HYPOTHESIS_TOL: f64 = 1e-9;
const CONDITIONAL_TRACE_TOL: f64 = 1e-9;

/// Both sides of a bound and everything that went into the right side.
#[derive(Debug, Clone)]
pub struct BoundReport<T> {
    pub lhs: T,
    pub rhs: T,
    pub margin: T,
    pub entropy_constant: T,
    /// `S(x_j^s)`, basis by basis.
    pub conditional_entropies: Vec<T>,
    /// `Tr x_j^s`, in the same order.
    pub conditional_traces: Vec<T>,
    pub bases_used: Vec<Basis<T>>,
    /// Conjugating unitaries (`W`, then `W~` where applicable).
    pub witnesses: Vec<CMat<T>>,
    /// Phase-damping decomposition of the depolarizing channel (`theorem2_check`).
    pub decomposition: Option<Prop7Decomposition<T>>,
    /// Intermediate entropies along the two-Pauli argument (`theorem3_check`).
    pub branches: Option<Theorem3Branches<T>>,
}

/// Entropy of one weighted branch of a channel mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchValue<T> {
    pub label: String,
    pub weight: T,
    pub entropy: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem3Branches<T> {
    /// Branches of the two-Pauli mixture applied to the `W`-rotated state.
    pub mixture: Vec<BranchValue<T>>,
    /// Smallest branch entropy; concavity bounds `lhs` below by it.
    pub mixture_min: T,
    /// `S((Psi_1 (x) Id)(rho~~))` with `Psi_1 = (p, (1-p)/2, 0, (1-p)/2)`.
    pub psi1_entropy: T,
    /// Branches of `Psi_1` on the doubly rotated state.
    pub psi1_mixture: Vec<BranchValue<T>>,
    /// Per-basis right sides `h(p) + (S(x_1^s) + S(x_2^s))/2`, `s = 1, 2, 3`.
    pub basis_bounds: [T; 3],
}

fn conditional_block<T: Real>(x: &DensityMatrix<T>, e: &[Complex<T>]) -> Result<(T, T)> {
    let (dh, _) = x.bipartite_dims()?;
    let block = compress_first_factor(x, e)?.scale_real(T::from_count(dh));
    let tr = block.trace().re;
    if (tr - T::one()).abs() > T::lit(CONDITIONAL_TRACE_TOL).max(T::validation_tol()) {
        return Err(Error::Hypothesis(format!("conditional state has trace {tr}")));
    }
    Ok((matrix_entropy(&block)?, tr))
}

struct Conditionals<T> {
    entropies: Vec<T>,
    traces: Vec<T>,
}

fn conditionals<T: Real>(x: &DensityMatrix<T>, bases: &[Basis<T>]) -> Result<Conditionals<T>> {
    let mut entropies = Vec::new();
    let mut traces = Vec::new();
    for b in bases {
        for e in b.vectors() {
            let (s, t) = conditional_block(x, e)?;
            entropies.push(s);
            traces.push(t);
        }
    }
    Ok(Conditionals { entropies, traces })
}

/// Phase damping `x -> sum_k lambda_k U^k x U^{-k}` with
/// `U = sum_j e^{2 pi i j/d} |e_j><e_j|`.
pub fn basis_phase_damping<T: Real>(lambda: &[T], basis: &Basis<T>) -> Result<KrausChannel<T>> {
    let d = basis.dim();
    if lambda.len() != d {
        return Err(Error::Shape(format!("{} weights for a basis of dimension {d}", lambda.len())));
    }
    check_distribution("damping weights", lambda)?;
    let ops = (0..d)
        .filter(|&k| lambda[k] > T::zero())
        .map(|k| {
            let mut u = CMat::zeros(d, d);
            for (j, e) in basis.vectors().iter().enumerate() {
                u.add_scaled(&CMat::projector(e), root_of_unity((j * k) as i64, d));
            }
            u.scale_real(lambda[k].sqrt())
        })
        .collect();
    KrausChannel::new(ops)
}

pub(crate) fn check_admissible<T: Real>(x: &DensityMatrix<T>, basis: &Basis<T>) -> Result<()> {
    let defect = admissibility_defect(x, basis)?;
    if defect > T::lit(HYPOTHESIS_TOL).max(T::validation_tol()) {
        return Err(Error::Hypothesis(format!(
            "marginal does not pinch to I/d (defect {:e})",
            defect.as_f64()
        )));
    }
    Ok(())
}

/// Phase damping in `basis`:
/// `S((Phi (x) Id) x) >= H(lambda) + (1/d) sum_j S(x_j)` when the first
/// marginal of `x` pinches to `I/d` in `basis`.
pub fn theorem1_check<T: Real>(lambda: &[T], basis: &Basis<T>, x: &DensityMatrix<T>) -> Result<BoundReport<T>> {
    let (dh, _) = x.bipartite_dims()?;
    if dh != basis.dim() {
        return Err(Error::Dimension(format!(
            "basis of dimension {} for a first factor of dimension {dh}",
            basis.dim()
        )));
    }
    check_admissible(x, basis)?;
    let ch = basis_phase_damping(lambda, basis)?;
    let lhs = von_neumann_entropy(&apply_tensor_id(&ch, x)?);
    let cond = conditionals(x, std::slice::from_ref(basis))?;
    let constant = shannon_entropy(lambda);
    let avg = cond.entropies.iter().copied().sum::<T>() / T::from_count(dh);
    let rhs = constant + avg;
    Ok(BoundReport {
        lhs,
        rhs,
        margin: lhs - rhs,
        entropy_constant: constant,
        conditional_entropies: cond.entropies,
        conditional_traces: cond.traces,
        bases_used: vec![basis.clone()],
        witnesses: Vec::new(),
        decomposition: None,
        branches: None,
    })
}

/// Depolarizing channel on prime `d`:
/// `S((Phi (x) Id) x) >= H(lambda_0, p/d, ..., p/d) + (1/d^2) sum_{s<d, j} S(x_j^s)`
/// with `x_j^s` taken in the bases `W^dag e^s`, where `W` sends the eigenvectors
/// of `Tr_K x` to the Fourier basis `e^d`.
pub fn theorem2_check<T: Real>(d: usize, p: T, x: &DensityMatrix<T>) -> Result<BoundReport<T>> {
    if !is_prime(d) {
        return Err(Error::NonPrime(d));
    }
    let (dh, _) = x.bipartite_dims()?;
    if dh != d {
        return Err(Error::Dimension(format!("first factor {dh} for d = {d}")));
    }
    let ch = WeylChannel::depolarizing(d, p)?;
    let fam = mub_family::<T>(d)?;
    let marginal = partial_trace(x, 0)?;
    let eig = eig_hermitian(marginal.mat())?;
    let fourier = fam.basis(d);
    let mut w = CMat::zeros(d, d);
    for j in 0..d {
        w = &w + &CMat::outer(fourier.vector(j), &eig.vector(j));
    }
    let wd = w.adjoint();
    let bases: Vec<Basis<T>> = (0..d)
        .map(|s| fam.basis(s).transformed(&wd).with_label(BasisLabel::Named(format!("W^dag e^{s}"))))
        .collect();
    let cond = conditionals(x, &bases)?;

    let df = T::from_count(d);
    let lambda0 = T::one() - (df - T::one()) * p / df;
    let mut spectrum = vec![lambda0];
    spectrum.extend(std::iter::repeat_n(p / df, d - 1));
    let constant = shannon_entropy(&spectrum);
    let rhs = constant + cond.entropies.iter().copied().sum::<T>() / (df * df);
    let lhs = von_neumann_entropy(&apply_tensor_id(&ch, x)?);
    let decomposition = decompose_prop7(&ch).ok();
    Ok(BoundReport {
        lhs,
        rhs,
        margin: lhs - rhs,
        entropy_constant: constant,
        conditional_entropies: cond.entropies,
        conditional_traces: cond.traces,
        bases_used: bases,
        witnesses: vec![w],
        decomposition,
        branches: None,
    })
}

fn lifted<T: Real>(x: &DensityMatrix<T>, u: &CMat<T>) -> Result<DensityMatrix<T>> {
    let (_, dk) = x.bipartite_dims()?;
    Ok(x.conjugated(&u.kron(&CMat::identity(dk))))
}

fn branch_values<T: Real>(x: &DensityMatrix<T>, dec: &crate::channels::Decomposition<T>) -> Result<Vec<BranchValue<T>>> {
    dec.terms()
        .iter()
        .map(|t| {
            let ch = KrausChannel::post_conjugated(&t.component, &t.conjugator);
            Ok(BranchValue {
                label: t.label.clone(),
                weight: t.weight,
                entropy: von_neumann_entropy(&apply_tensor_id(&ch, x)?),
            })
        })
        .collect()
}

/// Two-Pauli channel, `0 < p <= 1/3`:
/// `S((Phi (x) Id) rho) >= h(p) + (1/6) sum_{s=1..3} sum_k S(x_k^s)` with the
/// three bases `W^dag e^y`, `W^dag W~^dag e^x`, `W^dag W~^dag e^y`.
pub fn theorem3_check<T: Real>(p: T, rho: &DensityMatrix<T>) -> Result<BoundReport<T>> {
    let third = T::one() / T::lit(3.0);
    if !(p > T::zero() && p <= third + T::lit(1e-15)) {
        return Err(out_of_range("p", p.as_f64(), "(0, 1/3]"));
    }
    let (dh, _) = rho.bipartite_dims()?;
    if dh != 2 {
        return Err(Error::Dimension(format!("first factor must be a qubit, got {dh}")));
    }
    let ch = PauliCoeffs::two_pauli(p)?;
    let marginal = partial_trace(rho, 0)?;
    let w = balance_marginal_qubit(&marginal, 'x')?.matrix();
    let marginal1 = marginal.conjugated(&w);
    let wt = balance_marginal_qubit(&marginal1, 'y')?.matrix();
    let wd = w.adjoint();
    let wwd = wd.matmul(&wt.adjoint());
    let (ex, ey) = (Basis::pauli('x')?, Basis::pauli('y')?);
    let bases = vec![
        ey.transformed(&wd).with_label(BasisLabel::Named("W^dag e^y".into())),
        ex.transformed(&wwd).with_label(BasisLabel::Named("W^dag W~^dag e^x".into())),
        ey.transformed(&wwd).with_label(BasisLabel::Named("W^dag W~^dag e^y".into())),
    ];
    let cond = conditionals(rho, &bases)?;
    let constant = shannon_entropy(&[T::one() - p, p]);
    let rhs = constant + cond.entropies.iter().copied().sum::<T>() / T::lit(6.0);
    let lhs = von_neumann_entropy(&apply_tensor_id(&ch, rho)?);

    let half = T::lit(0.5);
    let e = &cond.entropies;
    let basis_bounds = [
        constant + (e[0] + e[1]) * half,
        constant + (e[2] + e[3]) * half,
        constant + (e[4] + e[5]) * half,
    ];
    let rho1 = lifted(rho, &w)?;
    let rho2 = lifted(&rho1, &wt)?;
    let mixture = branch_values(&rho1, &decompose_two_pauli(p)?.corrected)?;
    let mixture_min = mixture.iter().map(|b| b.entropy).fold(T::infinity(), T::min);
    let (tp2, _) = decompose_tp2(p)?;
    let psi1_entropy = von_neumann_entropy(&apply_tensor_id(tp2.target(), &rho2)?);
    let psi1_mixture = branch_values(&rho2, &tp2)?;

    Ok(BoundReport {
        lhs,
        rhs,
        margin: lhs - rhs,
        entropy_constant: constant,
        conditional_entropies: cond.entropies,
        conditional_traces: cond.traces,
        bases_used: bases,
        witnesses: vec![w, wt],
        decomposition: None,
        branches: Some(Theorem3Branches {
            mixture,
            mixture_min,
            psi1_entropy,
            psi1_mixture,
            basis_bounds,
        }),
    })
}

/// `(S(rho, tau), S(Phi rho, Phi tau))`.
pub fn dpi_check<T: Real, C: QuantumChannel<T> + ?Sized>(
    ch: &C,
    rho: &DensityMatrix<T>,
    tau: &DensityMatrix<T>,
) -> Result<(T, T)> {
    if rho.dim() != ch.dim() || tau.dim() != ch.dim() {
        return Err(Error::Dimension(format!(
            "states of dimensions {} and {} for a channel on C^{}",
            rho.dim(),
            tau.dim(),
            ch.dim()
        )));
    }
    let before = relative_entropy(rho, tau)?;
    let out = |s: &DensityMatrix<T>| DensityMatrix::from_hermitian_unchecked(ch.map(s.mat()), vec![ch.dim()]);
    let after = relative_entropy(&out(rho), &out(tau))?;
    Ok((before, after))
}

/// A sweep case whose margin fell below the tolerance.
#[derive(Debug, Clone)]
pub struct Counterexample<T> {
    pub case: usize,
    pub seed: u64,
    pub p: T,
    pub margin: T,
    pub state: DensityMatrix<T>,
}

#[derive(Debug, Clone)]
pub struct SweepCase<T> {
    pub case: usize,
    pub seed: u64,
    pub p: T,
    pub report: BoundReport<T>,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome<T> {
    pub cases: Vec<SweepCase<T>>,
    pub counterexamples: Vec<Counterexample<T>>,
    pub min_margin: T,
}

/// Runs `check` on `samples` Haar-random pure states of `C^{dh} (x) C^{dk}`
/// for every `p`. Case `i` uses the state seeded by `derive_seed(seed, i)`;
/// cases run in parallel and are collected in case order. Margins below
/// `-tol` are returned as counterexamples rather than errors.
pub fn bound_sweep<T, F>(
    dims: (usize, usize),
    ps: &[T],
    samples: usize,
    seed: u64,
    tol: T,
    check: F,
) -> Result<SweepOutcome<T>>
where
    T: Real,
    F: Fn(T, &DensityMatrix<T>) -> Result<BoundReport<T>> + Sync,
{
    let (dh, dk) = dims;
    let jobs: Vec<(usize, T)> = ps
        .iter()
        .flat_map(|&p| (0..samples).map(move |i| (i, p)))
        .collect();
    let cases: Vec<SweepCase<T>> = jobs
        .par_iter()
        .enumerate()
        .map(|(case, &(i, p))| {
            let case_seed = derive_seed(seed, i as u64);
            let psi = haar_random_pure::<T>(dh * dk, case_seed)?;
            let x = DensityMatrix::from_pure(&psi).with_factors(vec![dh, dk])?;
            Ok(SweepCase {
                case,
                seed: case_seed,
                p,
                report: check(p, &x)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counterexamples = Vec::new();
    let mut min_margin = T::infinity();
    for c in &cases {
        min_margin = min_margin.min(c.report.margin);
        if c.report.margin < -tol {
            let psi = haar_random_pure::<T>(dh * dk, c.seed)?;
            counterexamples.push(Counterexample {
                case: c.case,
                seed: c.seed,
                p: c.p,
                margin: c.report.margin,
                state: DensityMatrix::from_pure(&psi).with_factors(vec![dh, dk])?,
            });
        }
    }
    Ok(SweepOutcome {
        cases,
        counterexamples,
        min_margin,
    })
}
