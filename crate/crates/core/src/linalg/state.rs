use num_complex::Complex;
use num_traits::Zero;

use super::eigen::{eig_hermitian, HermitianEigen};
use super::matrix::{vec_norm, CMat};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Positive unit-trace matrix with declared tensor factor dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    mat: CMat<T>,
    factors: Vec<usize>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity at [`Real::VALIDATION_TOL`].
    pub fn new(mat: CMat<T>, factors: Vec<usize>) -> Result<Self> {
        check_factors(&mat, &factors)?;
        if !mat.is_finite() {
            return Err(Error::NonFinite);
        }
        let tol = T::validation_tol();
        let herm = mat.hermitian_defect();
        if herm > tol {
            return Err(Error::NotHermitian(herm.as_f64()));
        }
        let tr = mat.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidTrace(tr.re.as_f64()));
        }
        let min = eig_hermitian(&mat)?.values.first().copied().unwrap_or(T::zero());
        if min < -tol {
            return Err(Error::NotPositive(min.as_f64()));
        }
        Ok(Self {
            mat: mat.hermitian_part(),
            factors,
        })
    }

    /// Single-factor state.
    pub fn from_matrix(mat: CMat<T>) -> Result<Self> {
        let n = mat.rows();
        Self::new(mat, vec![n])
    }

    /// Skips the positivity and trace checks; the matrix is symmetrized.
    ///
    /// For outputs of maps already known to be trace preserving and
    /// completely positive.
    pub fn from_hermitian_unchecked(mat: CMat<T>, factors: Vec<usize>) -> Self {
        debug_assert_eq!(factors.iter().product::<usize>(), mat.rows());
        Self {
            mat: mat.hermitian_part(),
            factors,
        }
    }

    pub fn from_pure(psi: &PureState<T>) -> Self {
        let d = psi.dim();
        Self {
            mat: CMat::projector(psi.vector()),
            factors: vec![d],
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            mat: CMat::identity(d).scale_real(T::one() / T::from_count(d)),
            factors: vec![d],
        }
    }

    /// `(1/sqrt d) sum_j |j> (x) |j>`.
    pub fn maximally_entangled(d: usize) -> Self {
        let amp = T::one() / T::from_count(d).sqrt();
        let mut v = vec![Complex::zero(); d * d];
        for j in 0..d {
            v[j * d + j] = Complex::new(amp, T::zero());
        }
        Self {
            mat: CMat::projector(&v),
            factors: vec![d, d],
        }
    }

    pub fn mat(&self) -> &CMat<T> {
        &self.mat
    }

    pub fn into_mat(self) -> CMat<T> {
        self.mat
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// Re-declares the tensor structure.
    pub fn with_factors(self, factors: Vec<usize>) -> Result<Self> {
        check_factors(&self.mat, &factors)?;
        Ok(Self {
            mat: self.mat,
            factors,
        })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Self {
            mat: self.mat.kron(&other.mat),
            factors,
        }
    }

    pub fn eigen(&self) -> HermitianEigen<T> {
        eig_hermitian(&self.mat).expect("density matrices are Hermitian")
    }

    pub fn spectrum(&self) -> Vec<T> {
        self.eigen().values
    }

    /// `U rho U^dag`, keeping the factor structure.
    pub fn conjugated(&self, u: &CMat<T>) -> Self {
        Self::from_hermitian_unchecked(u.conjugate(&self.mat), self.factors.clone())
    }

    /// Bipartite dims `(d_H, d_K)`.
    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.factors.as_slice() {
            [a, b] => Ok((*a, *b)),
            other => Err(Error::Dimension(format!(
                "expected 2 tensor factors, found {}",
                other.len()
            ))),
        }
    }
}

fn check_factors<T: Real>(mat: &CMat<T>, factors: &[usize]) -> Result<()> {
    if !mat.is_square() {
        return Err(Error::Dimension(format!(
            "density matrix must be square, got {}x{}",
            mat.rows(),
            mat.cols()
        )));
    }
    let prod: usize = factors.iter().product();
    if factors.is_empty() || prod != mat.rows() {
        return Err(Error::Dimension(format!(
            "factors {factors:?} do not multiply to side {}",
            mat.rows()
        )));
    }
    Ok(())
}

/// Unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    vec: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    /// Accepts vectors whose norm is within `1e-12`-scaled noise of one.
    pub fn new(vec: Vec<Complex<T>>) -> Result<Self> {
        if vec.is_empty() {
            return Err(Error::Dimension("pure state of dimension 0".into()));
        }
        let n = vec_norm(&vec);
        if (n - T::one()).abs() > T::noise_floor() {
            return Err(Error::Contract(format!("state norm {} is not 1", n.as_f64())));
        }
        Ok(Self { vec })
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(vec: Vec<Complex<T>>) -> Result<Self> {
        let n = vec_norm(&vec);
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::Contract("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            vec: vec.into_iter().map(|z| z / n).collect(),
        })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut vec = vec![Complex::zero(); dim];
        vec[k] = Complex::new(T::one(), T::zero());
        Self { vec }
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn vector(&self) -> &[Complex<T>] {
        &self.vec
    }

    pub fn into_vector(self) -> Vec<Complex<T>> {
        self.vec
    }
}

/// Reduced state on factor `keep` of a bipartite state.
pub fn partial_trace<T: Real>(x: &DensityMatrix<T>, keep: usize) -> Result<DensityMatrix<T>> {
    let (dh, dk) = x.bipartite_dims()?;
    let m = x.mat();
    let out = match keep {
        0 => CMat::from_fn(dh, dh, |i, j| {
            (0..dk).fold(Complex::zero(), |acc, k| acc + m[(i * dk + k, j * dk + k)])
        }),
        1 => CMat::from_fn(dk, dk, |k, l| {
            (0..dh).fold(Complex::zero(), |acc, i| acc + m[(i * dk + k, i * dk + l)])
        }),
        _ => {
            return Err(Error::Dimension(format!(
                "factor index {keep} out of range for a bipartite state"
            )))
        }
    };
    let d = out.rows();
    Ok(DensityMatrix::from_hermitian_unchecked(out, vec![d]))
}

/// `Tr_H((|e><e| (x) I_K) x)` for a bipartite `x`; not normalized.
pub fn compress_first_factor<T: Real>(x: &DensityMatrix<T>, e: &[Complex<T>]) -> Result<CMat<T>> {
    let (dh, dk) = x.bipartite_dims()?;
    if e.len() != dh {
        return Err(Error::Dimension(format!(
            "vector of length {} against first factor {dh}",
            e.len()
        )));
    }
    let m = x.mat();
    Ok(CMat::from_fn(dk, dk, |k, l| {
        let mut acc = Complex::zero();
        for i in 0..dh {
            let ei = e[i].conj();
            if ei.is_zero() {
                continue;
            }
            for j in 0..dh {
                acc = acc + ei * m[(i * dk + k, j * dk + l)] * e[j];
            }
        }
        acc
    }))
}

/// Conditional state `d_H * Tr_H((|e><e| (x) I) x)`.
pub fn conditional_state<T: Real>(x: &DensityMatrix<T>, e: &[Complex<T>]) -> Result<DensityMatrix<T>> {
    let (dh, dk) = x.bipartite_dims()?;
    let block = compress_first_factor(x, e)?.scale_real(T::from_count(dh));
    DensityMatrix::new(block, vec![dk])
}
