//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Output is canonical: eigenvalues ascending, and every eigenvector scaled so
//! that its first component of modulus above `PHASE_CUTOFF` is real positive.
//! Ties in the eigenvalues keep the order produced by the sweep, which is a
//! deterministic function of the input.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::CMat;
use crate::error::{Error, Result};
use crate::scalar::Real;

const HERMITIAN_TOL: f64 = 1e-8;
const PHASE_CUTOFF: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// `a = V diag(values) V^dag` with `V` unitary.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    /// Eigenvectors stored as columns.
    pub vectors: CMat<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.vectors.column(k)
    }

    pub fn reconstruct(&self) -> CMat<T> {
        let d = CMat::diag_real(&self.values);
        self.vectors.matmul(&d).matmul(&self.vectors.adjoint())
    }

    /// Applies a scalar function to the spectrum: `V f(diag) V^dag`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> CMat<T> {
        let vals: Vec<T> = self.values.iter().map(|&x| f(x)).collect();
        self.vectors
            .matmul(&CMat::diag_real(&vals))
            .matmul(&self.vectors.adjoint())
    }
}

/// Eigendecomposition of a Hermitian matrix (Hermitian within `1e-8`, relative;
/// the scalar's validation tolerance when that is looser).
pub fn eig_hermitian<T: Real>(a: &CMat<T>) -> Result<HermitianEigen<T>> {
    if !a.is_square() {
        return Err(Error::Contract(format!(
            "eigendecomposition of a non-square {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = a.hermitian_defect();
    let scale = T::one().max(a.max_abs());
    if defect > T::lit(HERMITIAN_TOL).max(T::validation_tol()) * scale {
        return Err(Error::Contract(format!(
            "eigendecomposition needs a Hermitian matrix (defect {:e})",
            defect.as_f64()
        )));
    }
    Ok(jacobi(a.hermitian_part()))
}

fn jacobi<T: Real>(mut a: CMat<T>) -> HermitianEigen<T> {
    let n = a.rows();
    let mut v = CMat::<T>::identity(n);
    let eps = T::epsilon();
    let total = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<T>()
            .sqrt();
        if off <= eps * total || off.is_zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal));

    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    let cutoff = T::lit(PHASE_CUTOFF);
    for (new_col, &old_col) in order.iter().enumerate() {
        let col = v.column(old_col);
        let phase = col
            .iter()
            .find(|z| z.norm() > cutoff)
            .map(|z| z.conj() / z.norm())
            .unwrap_or(Complex::new(T::one(), T::zero()));
        for (i, z) in col.iter().enumerate() {
            vectors[(i, new_col)] = *z * phase;
        }
    }
    HermitianEigen { values, vectors }
}

/// One rotation zeroing `a[p][q]`, accumulated into `v`.
fn rotate<T: Real>(a: &mut CMat<T>, v: &mut CMat<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b <= T::min_positive_value() {
        return;
    }
    // Remove the phase of a[p][q], then solve the real symmetric 2x2 problem.
    let phase = apq / b;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (b + b);
    let t = if theta.is_infinite() {
        T::zero()
    } else {
        let sgn = if theta >= T::zero() { T::one() } else { -T::one() };
        sgn / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    // Column transform G on (p, q):
    //   G_pp = c, G_pq = s, G_qp = -s conj(phase), G_qq = c conj(phase)
    let gpp = Complex::new(c, T::zero());
    let gpq = Complex::new(s, T::zero());
    let gqp = phase.conj() * (-s);
    let gqq = phase.conj() * c;

    let n = a.rows();
    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    // A <- G^dag A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());
    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}
