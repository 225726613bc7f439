use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{weyl_operator, WeylIndex};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, inner, CMat};
use crate::scalar::{cis, root_of_unity, Real};

const ORTHONORMAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisLabel {
    /// Basis `s` of a mutually unbiased family, `s` in `0..=d`.
    Mub(usize),
    Named(String),
}

/// Orthonormal basis of `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis<T> {
    vectors: Vec<Vec<Complex<T>>>,
    label: BasisLabel,
}

impl<T: Real> Basis<T> {
    /// Checks pairwise inner products against `delta` within `1e-10`.
    pub fn new(vectors: Vec<Vec<Complex<T>>>, label: BasisLabel) -> Result<Self> {
        let d = vectors.len();
        if d == 0 || vectors.iter().any(|v| v.len() != d) {
            return Err(Error::Dimension(format!(
                "basis needs d vectors of length d (got {d} vectors)"
            )));
        }
        let basis = Self { vectors, label };
        let defect = basis.orthonormality_defect();
        if defect > T::lit(ORTHONORMAL_TOL).max(T::validation_tol()) {
            return Err(Error::Contract(format!(
                "basis not orthonormal (defect {:e})",
                defect.as_f64()
            )));
        }
        Ok(basis)
    }

    pub fn computational(d: usize) -> Self {
        let vectors = (0..d)
            .map(|j| {
                let mut v = vec![Complex::zero(); d];
                v[j] = Complex::one();
                v
            })
            .collect();
        Self {
            vectors,
            label: BasisLabel::Named("computational".into()),
        }
    }

    /// Columns of a unitary matrix.
    pub fn from_unitary(u: &CMat<T>, label: BasisLabel) -> Result<Self> {
        Self::new((0..u.cols()).map(|j| u.column(j)).collect(), label)
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn label(&self) -> &BasisLabel {
        &self.label
    }

    pub fn vectors(&self) -> &[Vec<Complex<T>>] {
        &self.vectors
    }

    pub fn vector(&self, j: usize) -> &[Complex<T>] {
        &self.vectors[j]
    }

    pub fn projector(&self, j: usize) -> CMat<T> {
        CMat::projector(&self.vectors[j])
    }

    /// Unitary whose columns are the basis vectors.
    pub fn matrix(&self) -> CMat<T> {
        CMat::from_columns(&self.vectors)
    }

    /// `{U e_j}`, keeping the label.
    pub fn transformed(&self, u: &CMat<T>) -> Self {
        Self {
            vectors: self.vectors.iter().map(|v| u.mat_vec(v)).collect(),
            label: self.label.clone(),
        }
    }

    pub fn with_label(mut self, label: BasisLabel) -> Self {
        self.label = label;
        self
    }

    /// Coordinates `<e_j|v>`.
    pub fn coordinates(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        self.vectors.iter().map(|e| inner(e, v)).collect()
    }

    /// Largest entry of `|G - I|` for the Gram matrix `G`.
    pub fn orthonormality_defect(&self) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                let g = inner(&self.vectors[i], &self.vectors[j]);
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((g - Complex::new(target, T::zero())).norm());
            }
        }
        worst
    }

    /// Largest deviation of `|<e_j|f_k>|^2` from `1/d`.
    pub fn unbiasedness_defect(&self, other: &Self) -> T {
        let inv_d = T::one() / T::from_count(self.dim());
        let mut worst = T::zero();
        for e in &self.vectors {
            for f in &other.vectors {
                worst = worst.max((inner(e, f).norm_sqr() - inv_d).abs());
            }
        }
        worst
    }

    /// `sum_j <e_j|x|e_j> |e_j><e_j|`.
    pub fn pinch(&self, x: &CMat<T>) -> CMat<T> {
        let d = self.dim();
        let mut out = CMat::zeros(d, d);
        for e in &self.vectors {
            let w = inner(e, &x.mat_vec(e));
            out.add_scaled(&CMat::projector(e), w);
        }
        out
    }

    /// Qubit eigenbasis of `sigma_x`, `sigma_y` or `sigma_z`, `+1` eigenvector first.
    pub fn pauli(axis: char) -> Result<Self> {
        let h = T::FRAC_1_SQRT_2();
        let r = |x: T| Complex::new(x, T::zero());
        let i = Complex::new(T::zero(), h);
        let vectors = match axis {
            'x' => vec![vec![r(h), r(h)], vec![r(h), r(-h)]],
            'y' => vec![vec![r(h), i], vec![r(h), -i]],
            'z' => vec![vec![r(T::one()), r(T::zero())], vec![r(T::zero()), r(T::one())]],
            other => return Err(Error::Unsupported(format!("Pauli axis '{other}'"))),
        };
        Ok(Self {
            vectors,
            label: BasisLabel::Named(format!("sigma_{axis}")),
        })
    }
}

/// Eigenbasis of the shift: `f_j = d^{-1/2} sum_l e^{2 pi i j l / d} |l>`, with
/// `U_{1,0} f_j = e^{-2 pi i j / d} f_j`. Defined for every `d`.
pub fn fourier_basis<T: Real>(d: usize) -> Basis<T> {
    let amp = T::one() / T::from_count(d).sqrt();
    let vectors = (0..d)
        .map(|j| (0..d).map(|l| root_of_unity::<T>((j * l) as i64, d) * amp).collect())
        .collect();
    Basis {
        vectors,
        label: BasisLabel::Named("fourier".into()),
    }
}

/// `d + 1` mutually unbiased bases of a prime dimension.
#[derive(Debug, Clone)]
pub struct MubFamily<T> {
    d: usize,
    bases: Vec<Basis<T>>,
}

impl<T: Real> MubFamily<T> {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Basis `s`, `0 <= s <= d`.
    pub fn basis(&self, s: usize) -> &Basis<T> {
        &self.bases[s]
    }

    pub fn bases(&self) -> &[Basis<T>] {
        &self.bases
    }

    /// Largest deviation of any cross overlap squared from `1/d`.
    pub fn max_unbiasedness_defect(&self) -> T {
        let mut worst = T::zero();
        for s in 0..self.bases.len() {
            for t in (s + 1)..self.bases.len() {
                worst = worst.max(self.bases[s].unbiasedness_defect(&self.bases[t]));
            }
        }
        worst
    }
}

pub fn is_prime(d: usize) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= d {
        if d.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Phase-corrected power `V_s^k` of the generator of the cyclic group `{U_{sk,k}}`.
///
/// For `s < d`, `V_s = zeta_s U_{s,1}` with `zeta_s = 1` for odd `d` and
/// `i^s` for `d = 2`, so that `V_s^d = I` and
/// `V_s^k = zeta_s^k e^{2 pi i s k(k-1) / (2d)} U_{sk,k}`. For `s = d`,
/// `V_d^k = U_{k,0}`.
pub fn shift_power<T: Real>(d: usize, s: usize, k: usize) -> CMat<T> {
    if s == d {
        return weyl_operator(WeylIndex { d, m: k % d, n: 0 });
    }
    let u = weyl_operator::<T>(WeylIndex {
        d,
        m: (s * k) % d,
        n: k % d,
    });
    u.scale(shift_power_phase(d, s, k))
}

/// The scalar `c` with `V_s^k = c U_{sk,k}`.
pub fn shift_power_phase<T: Real>(d: usize, s: usize, k: usize) -> Complex<T> {
    if s == d {
        return Complex::one();
    }
    let zeta: Complex<T> = if d.is_multiple_of(2) {
        cis(T::FRAC_PI_2() * T::from_count(s % 4))
    } else {
        Complex::one()
    };
    // k(k-1)/2 is an integer; reduce s * k(k-1)/2 mod d. For d = 2 the
    // quadratic phase is absorbed into zeta.
    let quad = if d.is_multiple_of(2) {
        Complex::one()
    } else {
        root_of_unity::<T>(((s * (k * (k.max(1) - 1) / 2)) % d) as i64, d)
    };
    zeta.powu(k as u32) * quad
}

/// `P_j^s = (1/d) sum_k e^{2 pi i j k / d} V_s^k`.
pub fn mub_projector<T: Real>(d: usize, s: usize, j: usize) -> CMat<T> {
    let mut p = CMat::zeros(d, d);
    for k in 0..d {
        p.add_scaled(&shift_power::<T>(d, s, k), root_of_unity((j * k) as i64, d));
    }
    p.scale_real(T::one() / T::from_count(d))
}

/// The `d + 1` bases of spectral projectors of `{V_s}`; `d` must be prime.
pub fn mub_family<T: Real>(d: usize) -> Result<MubFamily<T>> {
    if !is_prime(d) {
        return Err(Error::NonPrime(d));
    }
    let mut bases = Vec::with_capacity(d + 1);
    for s in 0..=d {
        let mut vectors = Vec::with_capacity(d);
        for j in 0..d {
            let p = mub_projector::<T>(d, s, j);
            let eig = eig_hermitian(&p)?;
            vectors.push(eig.vector(d - 1));
        }
        bases.push(Basis::new(vectors, BasisLabel::Mub(s))?);
    }
    Ok(MubFamily { d, bases })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{pauli_x, pauli_y, pauli_z};

    #[test]
    fn primality() {
        let primes: Vec<usize> = (0..20).filter(|&d| is_prime(d)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn composite_dimension_rejected() {
        let err = mub_family::<f64>(4).unwrap_err();
        assert_eq!(err, Error::NonPrime(4));
        assert!(err.to_string().contains("prime"));
    }

    #[test]
    fn qubit_family_is_z_y_x_eigenbases() {
        let fam = mub_family::<f64>(2).unwrap();
        let check = |basis: &Basis<f64>, op: CMat<f64>| {
            for v in basis.vectors() {
                let w = op.mat_vec(v);
                let lambda = inner(v, &w);
                let residual = w
                    .iter()
                    .zip(v)
                    .map(|(a, b)| (a - lambda * b).norm())
                    .fold(0.0, f64::max);
                assert!(residual < 1e-12);
            }
        };
        check(fam.basis(0), pauli_z());
        check(fam.basis(1), pauli_y());
        check(fam.basis(2), pauli_x());
        assert!(fam.max_unbiasedness_defect() < 1e-12);
    }

    #[test]
    fn literal_last_formula_is_fourier_not_computational() {
        // The s = d projectors built from U_{k,0} are eigenprojectors of the
        // shift: the Fourier basis, unbiased to |j>.
        let d = 3;
        let fam = mub_family::<f64>(d).unwrap();
        let comp = Basis::<f64>::computational(d);
        assert!(fam.basis(d).unbiasedness_defect(&comp) < 1e-12);
        // The s = 0 basis is the computational one, up to order and phase.
        for v in fam.basis(0).vectors() {
            let big = v.iter().filter(|z| z.norm() > 0.5).count();
            assert_eq!(big, 1);
        }
    }

    #[test]
    fn projectors_rank_one_and_complete() {
        for d in [2usize, 3, 5, 7] {
            for s in 0..=d {
                let mut sum = CMat::<f64>::zeros(d, d);
                for j in 0..d {
                    let p = mub_projector::<f64>(d, s, j);
                    assert!(p.hermitian_defect() < 1e-12);
                    assert!(p.matmul(&p).max_abs_diff(&p) < 1e-10);
                    assert!((p.trace().re - 1.0).abs() < 1e-12);
                    sum = &sum + &p;
                }
                assert!(sum.max_abs_diff(&CMat::identity(d)) <= 1e-12, "d={d} s={s}");
            }
        }
    }

    #[test]
    fn eigen_relation_with_phase() {
        for d in [2usize, 3, 5] {
            let fam = mub_family::<f64>(d).unwrap();
            for s in 0..=d {
                for k in 0..d {
                    let idx = if s == d {
                        WeylIndex { d, m: k, n: 0 }
                    } else {
                        WeylIndex { d, m: (s * k) % d, n: k }
                    };
                    let u = weyl_operator::<f64>(idx);
                    let mut rebuilt = CMat::zeros(d, d);
                    for j in 0..d {
                        rebuilt.add_scaled(&fam.basis(s).projector(j), root_of_unity(-((j * k) as i64), d));
                    }
                    let c = shift_power_phase::<f64>(d, s, k);
                    assert!(u.scale(c).max_abs_diff(&rebuilt) <= 1e-10, "d={d} s={s} k={k}");
                }
            }
        }
    }

    #[test]
    fn families_are_unbiased() {
        for d in [2usize, 3, 5, 7] {
            let fam = mub_family::<f64>(d).unwrap();
            assert_eq!(fam.bases().len(), d + 1);
            assert!(fam.max_unbiasedness_defect() <= 1e-10, "d = {d}");
            for b in fam.bases() {
                assert!(b.orthonormality_defect() <= 1e-10);
            }
        }
    }

    #[test]
    fn non_orthonormal_basis_rejected() {
        let v = vec![
            vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)],
            vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)],
        ];
        assert!(Basis::<f64>::new(v, BasisLabel::Named("bad".into())).is_err());
    }
}
