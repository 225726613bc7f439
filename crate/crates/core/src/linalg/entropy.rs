//! Von Neumann and Umegaki relative entropy, in nats.

use super::eigen::eig_hermitian;
use super::matrix::{inner, CMat};
use super::state::DensityMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `-sum p ln p`, with entries at or below the noise floor contributing zero.
pub fn shannon_entropy<T: Real>(p: &[T]) -> T {
    let floor = T::noise_floor();
    p.iter()
        .filter(|&&x| x > floor)
        .map(|&x| -x * x.ln())
        .sum()
}

/// Entropy of a state from its spectrum.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    shannon_entropy(&rho.spectrum())
}

/// Entropy of a Hermitian unit-trace matrix without state validation.
pub fn matrix_entropy<T: Real>(m: &CMat<T>) -> Result<T> {
    Ok(shannon_entropy(&eig_hermitian(m)?.values))
}

/// `S(rho, tau) = Tr rho ln rho - Tr rho ln tau`.
///
/// Evaluated in the two eigenbases:
/// `sum_i p_i ln p_i - sum_{i,j} p_i |<u_i|v_j>|^2 ln q_j`.
/// Returns `+inf` when the support of `rho` is not inside that of `tau`.
pub fn relative_entropy<T: Real>(rho: &DensityMatrix<T>, tau: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != tau.dim() {
        return Err(Error::Dimension(format!(
            "relative entropy of {}-dim and {}-dim states",
            rho.dim(),
            tau.dim()
        )));
    }
    let floor = T::noise_floor();
    let er = rho.eigen();
    let et = tau.eigen();
    let n = rho.dim();

    let mut value = -shannon_entropy(&er.values);
    for i in 0..n {
        let p = er.values[i];
        if p <= floor {
            continue;
        }
        let u = er.vector(i);
        for j in 0..n {
            let v = et.vector(j);
            let w = p * inner(&u, &v).norm_sqr();
            let q = et.values[j];
            if q <= floor {
                if w > floor {
                    return Ok(T::infinity());
                }
                continue;
            }
            value = value - w * q.ln();
        }
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_density, random_unitary, rng_from_seed};
    use crate::linalg::state::PureState;
    use num_complex::Complex;

    #[test]
    fn maximally_mixed_qubit_is_ln2() {
        let s = von_neumann_entropy(&DensityMatrix::<f64>::maximally_mixed(2));
        assert!((s - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn pure_state_has_zero_entropy() {
        let v = vec![Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)];
        let rho = DensityMatrix::from_pure(&PureState::<f64>::new(v).unwrap());
        assert!(von_neumann_entropy(&rho).abs() < 1e-12);
    }

    #[test]
    fn diagonal_three_quarters() {
        let rho = DensityMatrix::from_matrix(CMat::<f64>::diag_real(&[0.75, 0.25])).unwrap();
        let expected = -(0.75f64 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
        assert!((von_neumann_entropy(&rho) - expected).abs() < 1e-15);
        assert!((expected - 0.562335).abs() < 1e-6);
    }

    #[test]
    fn relative_entropy_identical_is_zero() {
        let mut rng = rng_from_seed(4);
        for _ in 0..10 {
            let rho = random_density::<f64>(3, 3, &mut rng);
            assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn relative_entropy_against_mixed() {
        let rho = DensityMatrix::from_matrix(CMat::<f64>::diag_real(&[0.75, 0.25])).unwrap();
        let tau = DensityMatrix::maximally_mixed(2);
        let expected = std::f64::consts::LN_2 - 0.562_335_144_618_808_5;
        assert!((relative_entropy(&rho, &tau).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.130812).abs() < 1e-6);
    }

    #[test]
    fn orthogonal_pure_states_diverge() {
        let a = DensityMatrix::from_pure(&PureState::<f64>::basis(2, 0));
        let b = DensityMatrix::from_pure(&PureState::<f64>::basis(2, 1));
        assert_eq!(relative_entropy(&a, &b).unwrap(), f64::INFINITY);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = DensityMatrix::<f64>::maximally_mixed(2);
        let b = DensityMatrix::<f64>::maximally_mixed(3);
        assert!(relative_entropy(&a, &b).is_err());
    }

    #[test]
    fn unitary_invariance() {
        let mut rng = rng_from_seed(12);
        for _ in 0..10 {
            let rho = random_density::<f64>(4, 2, &mut rng);
            let u = random_unitary::<f64>(4, &mut rng);
            let diff = von_neumann_entropy(&rho) - von_neumann_entropy(&rho.conjugated(&u));
            assert!(diff.abs() <= 1e-10);
        }
    }
}
