use super::weyl_channel::{PhaseDamping, WeylChannel};
use super::{channel_distance_to_map, KrausChannel, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::scalar::Real;
use crate::weyl::{is_prime, weyl_operator, WeylIndex};

const WEIGHT_FLOOR: f64 = 1e-12;
const WEIGHT_SUM_TOL: f64 = 1e-10;
const RECONSTRUCTION_TOL: f64 = 1e-10;
const SHAPE_TOL: f64 = 1e-12;

/// `weight * V Phi(x) V^dag`.
#[derive(Debug, Clone)]
pub struct DecompositionTerm<T> {
    pub weight: T,
    pub conjugator: CMat<T>,
    pub component: KrausChannel<T>,
    pub label: String,
}

impl<T: Real> DecompositionTerm<T> {
    fn apply(&self, x: &CMat<T>) -> CMat<T> {
        self.conjugator
            .conjugate(&self.component.map(x))
            .scale_real(self.weight)
    }
}

/// Convex mixture of conjugated channels, verified against its target on
/// every matrix unit.
#[derive(Debug, Clone)]
pub struct Decomposition<T> {
    terms: Vec<DecompositionTerm<T>>,
    target: KrausChannel<T>,
    residual: T,
}

impl<T: Real> Decomposition<T> {
    pub fn new(terms: Vec<DecompositionTerm<T>>, target: KrausChannel<T>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Contract("decomposition has no terms".into()));
        }
        let d = target.dim();
        if terms.iter().any(|t| t.component.dim() != d || t.conjugator.rows() != d) {
            return Err(Error::Dimension("decomposition terms do not match the target".into()));
        }
        if let Some(t) = terms.iter().find(|t| t.weight < -T::lit(WEIGHT_FLOOR)) {
            return Err(Error::Contract(format!("negative weight {} on {}", t.weight, t.label)));
        }
        let total: T = terms.iter().map(|t| t.weight).sum();
        if (total - T::one()).abs() > T::lit(WEIGHT_SUM_TOL).max(T::noise_floor()) {
            return Err(Error::Contract(format!("weights sum to {total}")));
        }
        let mut dec = Self {
            terms,
            target,
            residual: T::zero(),
        };
        dec.residual = channel_distance_to_map(&dec.target, |x| dec.apply(x))?;
        if dec.residual > T::lit(RECONSTRUCTION_TOL).max(T::validation_tol()) {
            return Err(Error::Contract(format!(
                "decomposition does not reproduce the target (residual {:e})",
                dec.residual.as_f64()
            )));
        }
        Ok(dec)
    }

    pub fn terms(&self) -> &[DecompositionTerm<T>] {
        &self.terms
    }

    pub fn target(&self) -> &KrausChannel<T> {
        &self.target
    }

    /// Largest matrix-unit deviation of the mixture from the target.
    pub fn residual(&self) -> T {
        self.residual
    }

    pub fn weight_sum(&self) -> T {
        self.terms.iter().map(|t| t.weight).sum()
    }

    /// The mixture applied to `x`.
    pub fn apply(&self, x: &CMat<T>) -> CMat<T> {
        let d = x.rows();
        self.terms
            .iter()
            .fold(CMat::zeros(d, d), |acc, t| &acc + &t.apply(x))
    }
}

/// Phase-damping decomposition of a Weyl channel with
/// `pi_{m,0} = r_m` and `pi_{m,n} = p_n` for `n >= 1`.
#[derive(Debug, Clone)]
pub struct Prop7Decomposition<T> {
    /// `lambda[0] = 1 - d sum p_n`, `lambda[n] = d p_n`.
    pub lambda: Vec<T>,
    /// `c_m = r_m / (d lambda_0)`.
    pub c: Vec<T>,
    /// Terms `c_m U_{m,0} Phi_k U_{m,0}^dag` over `k, m` in `0..d`, where
    /// `Phi_k` damps with `lambda` along `{U_{nk,n}}`. Zero weights are omitted.
    pub decomposition: Decomposition<T>,
}

pub fn decompose_prop7<T: Real>(ch: &WeylChannel<T>) -> Result<Prop7Decomposition<T>> {
    let d = ch.dim();
    if !is_prime(d) {
        return Err(Error::NonPrime(d));
    }
    let tol = T::lit(SHAPE_TOL).max(T::noise_floor());
    for n in 1..d {
        let p = ch.prob(0, n);
        if let Some(m) = (1..d).find(|&m| (ch.prob(m, n) - p).abs() > tol) {
            return Err(Error::Shape(format!(
                "pi[{m}][{n}] = {} differs from pi[0][{n}] = {p}",
                ch.prob(m, n)
            )));
        }
    }
    let df = T::from_count(d);
    let p_sum: T = (1..d).map(|n| ch.prob(0, n)).sum();
    let lambda0 = T::one() - df * p_sum;
    if lambda0 <= T::zero() {
        return Err(Error::Contract(format!("lambda_0 = {lambda0} is not positive")));
    }
    let mut lambda = vec![lambda0];
    lambda.extend((1..d).map(|n| df * ch.prob(0, n)));
    let c: Vec<T> = (0..d).map(|m| ch.prob(m, 0) / (df * lambda0)).collect();

    let mut terms = Vec::new();
    for k in 0..d {
        let component = KrausChannel::from_channel(&PhaseDamping::new(d, lambda.clone(), k)?);
        for (m, &cm) in c.iter().enumerate() {
            if cm == T::zero() {
                continue;
            }
            terms.push(DecompositionTerm {
                weight: cm,
                conjugator: weyl_operator(WeylIndex { d, m, n: 0 }),
                component: component.clone(),
                label: format!("U_{{{m},0}} Phi_{k}"),
            });
        }
    }
    let decomposition = Decomposition::new(terms, KrausChannel::from_channel(ch))?;
    Ok(Prop7Decomposition { lambda, c, decomposition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_distribution, rng_from_seed, uniform};

    fn chan(d: usize, r: &[f64], p: &[f64]) -> WeylChannel<f64> {
        let pi = (0..d)
            .map(|m| (0..d).map(|n| if n == 0 { r[m] } else { p[n] }).collect())
            .collect();
        WeylChannel::new(d, pi).unwrap()
    }

    #[test]
    fn qubit_instance() {
        let dec = decompose_prop7(&chan(2, &[0.7, 0.1], &[0.0, 0.1])).unwrap();
        assert!((dec.lambda[0] - 0.8).abs() < 1e-15 && (dec.lambda[1] - 0.2).abs() < 1e-15);
        assert!((dec.c[0] - 0.4375).abs() < 1e-15 && (dec.c[1] - 0.0625).abs() < 1e-15);
        assert!(dec.decomposition.residual() <= 1e-12);
    }

    #[test]
    fn depolarizing_coefficients() {
        for d in [2usize, 3, 5] {
            for p in [0.1, 0.5, 0.9] {
                let ch = WeylChannel::<f64>::depolarizing(d, p).unwrap();
                let dec = decompose_prop7(&ch).unwrap();
                let df = d as f64;
                let l0 = 1.0 - (df - 1.0) * p / df;
                assert!((dec.lambda[0] - l0).abs() < 1e-14);
                assert!(dec.lambda[1..].iter().all(|&l| (l - p / df).abs() < 1e-14));
                let c0 = (1.0 - (df * df - 1.0) * p / (df * df)) / (df * l0);
                assert!((dec.c[0] - c0).abs() < 1e-14);
                let cm = p / (df.powi(3) * l0);
                assert!(dec.c[1..].iter().all(|&c| (c - cm).abs() < 1e-14));
                assert!(dec.decomposition.residual() <= 1e-12);
            }
        }
    }

    #[test]
    fn identity_channel() {
        let dec = decompose_prop7(&WeylChannel::<f64>::identity(3)).unwrap();
        assert_eq!(dec.lambda, vec![1.0, 0.0, 0.0]);
        assert!((dec.c[0] - 1.0 / 3.0).abs() < 1e-15 && dec.c[1] == 0.0);
        assert!(dec.decomposition.residual() <= 1e-15);
    }

    #[test]
    fn random_shaped_channels() {
        let mut rng = rng_from_seed(77);
        for d in [2usize, 3, 5] {
            for _ in 0..10 {
                // Keep lambda_0 positive: sum p_n < 1/d.
                let scale = 0.9 * uniform::<f64>(&mut rng) / d as f64;
                let p_dist = random_distribution::<f64>(d - 1, &mut rng);
                let mut p = vec![0.0];
                p.extend(p_dist.iter().map(|x| x * scale));
                let rest = 1.0 - d as f64 * scale;
                let r: Vec<f64> = random_distribution::<f64>(d, &mut rng).iter().map(|x| x * rest).collect();
                let dec = decompose_prop7(&chan(d, &r, &p)).unwrap();
                assert!(dec.decomposition.residual() <= 1e-12);
                let csum: f64 = dec.c.iter().sum();
                assert!((csum - 1.0 / d as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let mut pi = vec![vec![0.0; 3]; 3];
        pi[0][0] = 0.5;
        pi[0][1] = 0.5;
        let ch = WeylChannel::<f64>::new(3, pi).unwrap();
        assert!(matches!(decompose_prop7(&ch), Err(Error::Shape(_))));
        // sum p_n = 1/2 gives lambda_0 = 0.
        let flat = chan(2, &[0.0, 0.0], &[0.0, 0.5]);
        assert!(decompose_prop7(&flat).is_err());
        assert!(matches!(
            decompose_prop7(&WeylChannel::<f64>::identity(4)),
            Err(Error::NonPrime(4))
        ));
    }

    #[test]
    fn decomposition_validation() {
        let target = KrausChannel::<f64>::identity(2);
        let term = |w: f64| DecompositionTerm {
            weight: w,
            conjugator: CMat::identity(2),
            component: KrausChannel::identity(2),
            label: "id".into(),
        };
        assert!(Decomposition::new(vec![term(0.5), term(0.5)], target.clone()).is_ok());
        assert!(Decomposition::new(vec![term(0.7), term(0.5)], target.clone()).is_err());
        assert!(Decomposition::new(vec![term(1.5), term(-0.5)], target).is_err());
    }
}
