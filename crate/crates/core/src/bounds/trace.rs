use num_complex::Complex;

use super::{basis_phase_damping, check_admissible, conditionals};
use crate::channels::apply_tensor_id;
use crate::error::{Error, Result};
use crate::linalg::{compress_first_factor, relative_entropy, shannon_entropy, von_neumann_entropy, CMat, DensityMatrix};
use crate::scalar::{root_of_unity, Real};
use crate::weyl::Basis;

/// Replay of the relative-entropy argument behind the phase-damping bound.
///
/// With `Xi_x(rho) = sum_j Tr((|e_j><e_j| (x) I) rho) (U^j (x) I) x (U^{-j} (x) I)`,
/// `rho = sum_j lambda_j |e_j><e_j| (x) y` and `rho_bar = I/d (x) y`:
/// `Xi_x(rho) = (Phi (x) Id)(x)` and `Xi_x(rho_bar) = E~(x)`, the pinching of
/// the first factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofTrace<T> {
    /// `S(rho, rho_bar)`.
    pub rel_before: T,
    /// `S(Xi_x(rho), Xi_x(rho_bar))`.
    pub rel_after: T,
    /// `S((Phi (x) Id) x)`.
    pub entropy_out: T,
    /// `S(E~(x))`.
    pub entropy_e: T,
    /// `|| E~((Phi (x) Id) x) - E~(x) ||_max`.
    pub fixed_point_defect: T,
    /// `|rel_before - (sum lambda ln lambda + ln d)|`.
    pub before_residual: T,
    /// `|rel_after - (S(E~ x) - S((Phi (x) Id) x))|`.
    pub ee1_residual: T,
    /// `|S(E~ x) - ln d - (1/d) sum_j S(x_j)|`.
    pub ee3_residual: T,
}

impl<T: Real> ProofTrace<T> {
    /// Monotonicity plus both identities within `tol`.
    pub fn holds(&self, tol: T) -> bool {
        self.rel_after <= self.rel_before + tol
            && self.ee1_residual <= tol
            && self.ee3_residual <= tol
            && self.before_residual <= tol
    }
}

fn xi<T: Real>(x: &DensityMatrix<T>, basis: &Basis<T>, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    let (d, dk) = x.bipartite_dims()?;
    let n = d * dk;
    let id = CMat::identity(dk);
    let mut out = CMat::zeros(n, n);
    for j in 0..d {
        let weight = compress_first_factor(rho, basis.vector(j))?.trace();
        let mut u = CMat::zeros(d, d);
        for (k, e) in basis.vectors().iter().enumerate() {
            u.add_scaled(&CMat::projector(e), root_of_unity((j * k) as i64, d));
        }
        out.add_scaled(&u.kron(&id).conjugate(x.mat()), weight);
    }
    Ok(DensityMatrix::from_hermitian_unchecked(out, vec![d, dk]))
}

/// Evaluates every quantity of the argument independently. `y` defaults to
/// `I/dim K`.
pub fn proof_trace<T: Real>(
    lambda: &[T],
    basis: &Basis<T>,
    x: &DensityMatrix<T>,
    y: Option<&DensityMatrix<T>>,
) -> Result<ProofTrace<T>> {
    let (d, dk) = x.bipartite_dims()?;
    if basis.dim() != d {
        return Err(Error::Dimension(format!("basis of dimension {} for d = {d}", basis.dim())));
    }
    check_admissible(x, basis)?;
    let default_y = DensityMatrix::maximally_mixed(dk);
    let y = y.unwrap_or(&default_y);
    if y.dim() != dk {
        return Err(Error::Dimension(format!("reference state of dimension {} for K = C^{dk}", y.dim())));
    }
    let ch = basis_phase_damping(lambda, basis)?;

    let mut diag = CMat::zeros(d, d);
    for (e, &l) in basis.vectors().iter().zip(lambda) {
        diag.add_scaled(&CMat::projector(e), Complex::new(l, T::zero()));
    }
    let rho = DensityMatrix::from_hermitian_unchecked(diag.kron(y.mat()), vec![d, dk]);
    let rho_bar = DensityMatrix::maximally_mixed(d).tensor(y);

    let out = xi(x, basis, &rho)?;
    let e_x = xi(x, basis, &rho_bar)?;
    let rel_before = relative_entropy(&rho, &rho_bar)?;
    let rel_after = relative_entropy(&out, &e_x)?;
    let entropy_out = von_neumann_entropy(&out);
    let entropy_e = von_neumann_entropy(&e_x);

    let direct = apply_tensor_id(&ch, x)?;
    let pinch = |m: &CMat<T>| {
        let full = DensityMatrix::from_hermitian_unchecked(m.clone(), vec![d, dk]);
        xi(&full, basis, &rho_bar).map(|r| r.into_mat())
    };
    let fixed_point_defect = pinch(direct.mat())?
        .max_abs_diff(e_x.mat())
        .max(direct.mat().max_abs_diff(out.mat()));

    let ln_d = T::from_count(d).ln();
    let cond = conditionals(x, std::slice::from_ref(basis))?;
    let avg = cond.entropies.iter().copied().sum::<T>() / T::from_count(d);
    Ok(ProofTrace {
        rel_before,
        rel_after,
        entropy_out,
        entropy_e,
        fixed_point_defect,
        before_residual: (rel_before - (ln_d - shannon_entropy(lambda))).abs(),
        ee1_residual: (rel_after - (entropy_e - entropy_out)).abs(),
        ee3_residual: (entropy_e - ln_d - avg).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_density, random_distribution, rng_from_seed};
    use crate::orbits::sample_admissible_in;
    use crate::weyl::mub_family;

    #[test]
    fn equality_case_is_tight() {
        let b = Basis::<f64>::computational(2);
        let t = proof_trace(&[0.8, 0.2], &b, &DensityMatrix::maximally_entangled(2), None).unwrap();
        assert!((t.rel_before - 0.192745).abs() < 1e-6);
        assert!((t.rel_after - t.rel_before).abs() < 1e-9);
        assert!(t.holds(1e-9));
        assert!(t.fixed_point_defect <= 1e-10);
    }

    #[test]
    fn uniform_damping() {
        let b = Basis::<f64>::computational(3);
        let s = sample_admissible_in(&b, 2, 2, 3).unwrap();
        let t = proof_trace(&[1.0 / 3.0; 3], &b, &s.x, None).unwrap();
        assert!(t.rel_before.abs() <= 1e-12);
        assert!(t.rel_after <= 1e-9);
    }

    #[test]
    fn identities_for_random_references() {
        let mut rng = rng_from_seed(17);
        let fam = mub_family::<f64>(3).unwrap();
        for seed in 0..3 {
            let s = sample_admissible_in(fam.basis(2), 2, 3, seed).unwrap();
            let lambda = random_distribution::<f64>(3, &mut rng);
            let base = proof_trace(&lambda, fam.basis(2), &s.x, None).unwrap();
            assert!(base.holds(1e-9) && base.fixed_point_defect <= 1e-10);
            for _ in 0..3 {
                let y = random_density::<f64>(2, 2, &mut rng);
                let t = proof_trace(&lambda, fam.basis(2), &s.x, Some(&y)).unwrap();
                assert!(t.holds(1e-9));
                assert!((t.rel_after - base.rel_after).abs() <= 1e-9);
            }
        }
    }
}
