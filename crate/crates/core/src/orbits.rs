//! Phase solvers that rotate a state inside a maximum commutative group until
//! it is unbiased with respect to a complementary basis, and samplers for
//! states whose marginal pinches to the maximally mixed state.
//!
//! For `d = 2` every vector can be balanced; for `d = 3` the solver needs the
//! moduli products `|a_0 a_1|, |a_0 a_2|, |a_1 a_2|` to form a triangle.
//! Every solution is re-checked by substitution before it is returned.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::random::{random_distribution, random_unit_vector, stream_rng};
use crate::linalg::{inner, partial_trace, CMat, DensityMatrix, PureState};
use crate::scalar::{cis, root_of_unity, Real};
use crate::weyl::{Basis, GroupElement};

const NORM_TOL: f64 = 1e-12;
const LEMMA1_TOL: f64 = 1e-12;
const LEMMA2_TOL: f64 = 1e-10;
const TRIANGLE_SLACK: f64 = 1e-14;
const UNBIASED_TOL: f64 = 1e-10;
const BLOCH_TOL: f64 = 1e-12;

/// Phases found by a solver, with the residual of the substitution check.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSolution<T> {
    pub phases: Vec<T>,
    pub residual: T,
    pub feasible: bool,
    /// For two coordinates: `alpha` with `e^{i phi} a - e^{i psi} b = e^{i alpha}`.
    pub alpha: Option<T>,
}

impl<T: Real> PhaseSolution<T> {
    fn infeasible(d: usize) -> Self {
        Self {
            phases: vec![T::zero(); d],
            residual: T::infinity(),
            feasible: false,
            alpha: None,
        }
    }
}

fn check_norm<T: Real>(coords: &[Complex<T>]) -> Result<()> {
    let n: T = coords.iter().map(|z| z.norm_sqr()).sum();
    if (n - T::one()).abs() > T::lit(NORM_TOL).max(T::noise_floor()) {
        return Err(Error::Contract(format!("coordinates have squared norm {n}, expected 1")));
    }
    Ok(())
}

/// Phases `(phi, psi)` with `e^{i phi} a + e^{i psi} b = 1` and
/// `|e^{i phi} a - e^{i psi} b| = 1`, for `|a|^2 + |b|^2 = 1`.
pub fn lemma1_phases<T: Real>(a: Complex<T>, b: Complex<T>) -> Result<PhaseSolution<T>> {
    check_norm(&[a, b])?;
    let (ma, mb) = (a.norm(), b.norm());
    // cos phi~ = sin psi~ = |a|, -sin phi~ = cos psi~ = |b|.
    let phi_t = -mb.atan2(ma);
    let psi_t = ma.atan2(mb);
    let phi = phi_t - a.arg();
    let psi = psi_t - b.arg();
    let pa = cis(phi) * a;
    let pb = cis(psi) * b;
    let residual = ((pa + pb) - Complex::new(T::one(), T::zero()))
        .norm()
        .max(((pa - pb).norm() - T::one()).abs());
    Ok(PhaseSolution {
        phases: vec![phi, psi],
        residual,
        feasible: residual <= T::lit(LEMMA1_TOL).max(T::validation_tol()),
        alpha: Some(phi_t + phi_t),
    })
}

fn side_products<T: Real>(alpha: &[Complex<T>; 3]) -> (T, T, T) {
    let m: Vec<T> = alpha.iter().map(|z| z.norm()).collect();
    (m[0] * m[1], m[0] * m[2], m[1] * m[2])
}

/// Whether `|a_0 a_1|, |a_0 a_2|, |a_1 a_2|` satisfy the three strict
/// triangle inequalities (each compared with slack `-1e-14`).
pub fn triangle_condition<T: Real>(alpha: &[Complex<T>; 3]) -> bool {
    let (a01, a02, a12) = side_products(alpha);
    let slack = -T::lit(TRIANGLE_SLACK);
    a02 + a12 - a01 > slack && a01 + a12 - a02 > slack && a01 + a02 - a12 > slack
}

/// `max_k ||I_k| - 1|` with `I_k = sum_j e^{i(phi_j + 2 pi j k/3)} alpha_j`.
pub fn lemma2_residual<T: Real>(alpha: &[Complex<T>; 3], phases: &[T]) -> T {
    (0..3)
        .map(|k| {
            let s = (0..3).fold(Complex::<T>::zero(), |acc, j| {
                acc + cis(phases[j]) * root_of_unity::<T>((j * k) as i64, 3) * alpha[j]
            });
            (s.norm() - T::one()).abs()
        })
        .fold(T::zero(), T::max)
}

fn clamped_angle<T: Real>(opposite: T, s1: T, s2: T) -> T {
    let den = (s1 + s1) * s2;
    if den <= T::zero() {
        return T::zero();
    }
    ((s1 * s1 + s2 * s2 - opposite * opposite) / den)
        .max(-T::one())
        .min(T::one())
        .acos()
}

/// Phases making all three `|I_k|` equal to one. Infeasible (not an error)
/// when the triangle condition fails.
pub fn lemma2_phases<T: Real>(alpha: &[Complex<T>; 3]) -> Result<PhaseSolution<T>> {
    check_norm(alpha)?;
    if !triangle_condition(alpha) {
        return Ok(PhaseSolution::infeasible(3));
    }
    let (a01, a02, a12) = side_products(alpha);
    let mut phases = if a01.max(a02).max(a12) == T::zero() {
        // A single nonzero coordinate; every choice works.
        vec![T::zero(); 3]
    } else {
        let g2 = clamped_angle(a02, a01, a12);
        let g3 = clamped_angle(a12, a01, a02);
        let three = T::lit(3.0);
        let pi = T::PI();
        vec![
            T::zero(),
            (pi + pi) / three + g2 / three - g3 / three,
            pi / three - g2 / three - (g3 + g3) / three,
        ]
    };
    for (p, a) in phases.iter_mut().zip(alpha) {
        if !a.is_zero() {
            *p = *p - a.arg();
        }
    }
    let residual = lemma2_residual(alpha, &phases);
    Ok(PhaseSolution {
        feasible: residual <= T::lit(LEMMA2_TOL).max(T::validation_tol()),
        phases,
        residual,
        alpha: None,
    })
}

/// Result of [`unbias_state`].
#[derive(Debug, Clone)]
pub struct UnbiasOutcome<T> {
    pub element: GroupElement<T>,
    /// `max_j ||<f_j|U g>| - 1/sqrt(d)|`.
    pub residual: T,
    pub feasible: bool,
}

/// Finds `U` diagonal in `source` such that `U g` has overlaps `1/sqrt(d)`
/// with every vector of `target`. The bases must be mutually unbiased;
/// `d` must be 2 or 3.
pub fn unbias_state<T: Real>(g: &PureState<T>, source: &Basis<T>, target: &Basis<T>) -> Result<UnbiasOutcome<T>> {
    let d = source.dim();
    if g.dim() != d || target.dim() != d {
        return Err(Error::Dimension(format!(
            "state of dimension {} with bases of dimensions {d} and {}",
            g.dim(),
            target.dim()
        )));
    }
    if d != 2 && d != 3 {
        return Err(Error::Unsupported(format!("orbit solver for d = {d}")));
    }
    if source.unbiasedness_defect(target) > T::lit(UNBIASED_TOL).max(T::validation_tol()) {
        return Err(Error::Contract("source and target bases are not mutually unbiased".into()));
    }
    let sqrt_d = T::from_count(d).sqrt();
    // Absorb the phases of the first target row into the coordinates.
    let coords: Vec<Complex<T>> = (0..d)
        .map(|j| {
            let m0j = inner(target.vector(0), source.vector(j)) * sqrt_d;
            inner(source.vector(j), g.vector()) * cis(m0j.arg())
        })
        .collect();
    let sol = if d == 2 {
        lemma1_phases(coords[0], coords[1])?
    } else {
        lemma2_phases(&[coords[0], coords[1], coords[2]])?
    };
    let element = GroupElement::new(source.clone(), sol.phases.clone())?;
    if !sol.feasible {
        return Ok(UnbiasOutcome {
            element,
            residual: T::infinity(),
            feasible: false,
        });
    }
    let ug = element.matrix().mat_vec(g.vector());
    let target_amp = T::one() / sqrt_d;
    let residual = target
        .vectors()
        .iter()
        .map(|f| (inner(f, &ug).norm() - target_amp).abs())
        .fold(T::zero(), T::max);
    Ok(UnbiasOutcome {
        element,
        residual,
        feasible: residual <= T::lit(UNBIASED_TOL).max(T::validation_tol()),
    })
}

/// Bloch vector `(Tr rho s_x, Tr rho s_y, Tr rho s_z)` of a qubit operator.
pub fn bloch_vector<T: Real>(rho: &CMat<T>) -> [T; 3] {
    let r01 = rho[(0, 1)];
    [r01.re + r01.re, -(r01.im + r01.im), rho[(0, 0)].re - rho[(1, 1)].re]
}

/// Rotation `e^{-i theta s_axis / 2}` about `x` or `y` that zeroes the Bloch
/// component along `y` (axis `x`) or `x` (axis `y`).
pub fn balance_marginal_qubit<T: Real>(rho: &DensityMatrix<T>, axis: char) -> Result<GroupElement<T>> {
    if rho.dim() != 2 {
        return Err(Error::Dimension(format!("qubit state expected, got dimension {}", rho.dim())));
    }
    let [x, y, z] = bloch_vector(rho.mat());
    let theta = match axis {
        'x' => y.atan2(z),
        'y' => (-x).atan2(z),
        other => return Err(Error::Unsupported(format!("rotation axis '{other}'"))),
    };
    let half = theta * T::lit(0.5);
    let w = GroupElement::new(Basis::pauli(axis)?, vec![-half, half])?;
    let rotated = bloch_vector(&w.matrix().conjugate(rho.mat()));
    let zeroed = if axis == 'x' { rotated[1] } else { rotated[0] };
    if zeroed.abs() > T::lit(BLOCH_TOL).max(T::noise_floor()) {
        return Err(Error::Contract(format!(
            "rotation left a Bloch component of {:e}",
            zeroed.as_f64()
        )));
    }
    Ok(w)
}

/// Bipartite state whose first marginal pinches to `I/d` in `basis`.
#[derive(Debug, Clone)]
pub struct AdmissibleState<T> {
    pub x: DensityMatrix<T>,
    pub basis: Basis<T>,
    /// `max_j |<e_j|Tr_K x|e_j> - 1/d|`.
    pub defect: T,
}

/// `max_j |<e_j|Tr_K x|e_j> - 1/d|`.
pub fn admissibility_defect<T: Real>(x: &DensityMatrix<T>, basis: &Basis<T>) -> Result<T> {
    let marginal = partial_trace(x, 0)?;
    if marginal.dim() != basis.dim() {
        return Err(Error::Dimension(format!(
            "basis of dimension {} for a first factor of dimension {}",
            basis.dim(),
            marginal.dim()
        )));
    }
    let inv_d = T::one() / T::from_count(basis.dim());
    Ok(basis
        .vectors()
        .iter()
        .map(|e| (inner(e, &marginal.mat().mat_vec(e)).re - inv_d).abs())
        .fold(T::zero(), T::max))
}

/// `sum_i w_i |psi_i><psi_i|` with `psi_i = d^{-1/2} sum_j e_j (x) v_{ij}`.
pub fn admissible_from_vectors<T: Real>(
    basis: &Basis<T>,
    vectors: &[Vec<Vec<Complex<T>>>],
    weights: &[T],
) -> Result<AdmissibleState<T>> {
    let d = basis.dim();
    let dk = vectors
        .first()
        .and_then(|v| v.first())
        .map(|v| v.len())
        .ok_or_else(|| Error::Contract("no vectors given".into()))?;
    if vectors.len() != weights.len() || vectors.iter().any(|vs| vs.len() != d || vs.iter().any(|v| v.len() != dk)) {
        return Err(Error::Shape("need d vectors in K for every mixture weight".into()));
    }
    let n = d * dk;
    let amp = T::one() / T::from_count(d).sqrt();
    let mut mat = CMat::zeros(n, n);
    for (vs, &w) in vectors.iter().zip(weights) {
        let mut psi = vec![Complex::zero(); n];
        for (e, v) in basis.vectors().iter().zip(vs) {
            for (i, ei) in e.iter().enumerate() {
                for (k, vk) in v.iter().enumerate() {
                    psi[i * dk + k] = psi[i * dk + k] + *ei * *vk * amp;
                }
            }
        }
        mat.add_scaled(&CMat::projector(&psi), Complex::new(w, T::zero()));
    }
    let x = DensityMatrix::new(mat, vec![d, dk])?;
    let defect = admissibility_defect(&x, basis)?;
    Ok(AdmissibleState {
        x,
        basis: basis.clone(),
        defect,
    })
}

/// Random admissible state in `basis`: `mix` pure terms with Haar-random
/// `v_j` in `C^{dim_k}` and random weights drawn from substream `mix` of `seed`.
pub fn sample_admissible_in<T: Real>(
    basis: &Basis<T>,
    dim_k: usize,
    mix: usize,
    seed: u64,
) -> Result<AdmissibleState<T>> {
    if dim_k == 0 || mix == 0 {
        return Err(Error::Dimension("dimK and mix must be at least 1".into()));
    }
    let d = basis.dim();
    let mut rng = stream_rng(seed, 0);
    let vectors: Vec<Vec<Vec<Complex<T>>>> = (0..mix)
        .map(|_| (0..d).map(|_| random_unit_vector(dim_k, &mut rng)).collect())
        .collect();
    let weights = random_distribution::<T>(mix, &mut stream_rng(seed, mix as u64));
    admissible_from_vectors(basis, &vectors, &weights)
}

/// [`sample_admissible_in`] for the computational basis of `C^d`.
pub fn sample_admissible<T: Real>(d: usize, dim_k: usize, mix: usize, seed: u64) -> Result<AdmissibleState<T>> {
    if d == 0 {
        return Err(Error::Dimension("d must be at least 1".into()));
    }
    sample_admissible_in(&Basis::computational(d), dim_k, mix, seed)
}
