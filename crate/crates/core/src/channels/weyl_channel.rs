use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::pauli::PauliCoeffs;
use super::QuantumChannel;
use crate::error::{out_of_range, Error, Result};
use crate::linalg::CMat;
use crate::scalar::{root_of_unity, Real};
use crate::weyl::{fourier_basis, mub_family, weyl_operator, Basis, WeylIndex};

const DISTRIBUTION_TOL: f64 = 1e-12;

pub(crate) fn check_distribution<T: Real>(what: &str, p: &[T]) -> Result<()> {
    let tol = T::lit(DISTRIBUTION_TOL).max(T::noise_floor());
    if p.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if let Some(x) = p.iter().find(|&&x| x < -tol || x > T::one() + tol) {
        return Err(Error::Distribution(format!("{what} has entry {x} outside [0, 1]")));
    }
    let total: T = p.iter().copied().sum();
    if (total - T::one()).abs() > tol {
        return Err(Error::Distribution(format!("{what} sums to {total}")));
    }
    Ok(())
}

/// `x -> sum_{m,n} pi_{m,n} U_{m,n} x U_{m,n}^dag`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylChannel<T> {
    d: usize,
    /// `pi[m][n]`.
    pi: Vec<Vec<T>>,
}

impl<T: Real> WeylChannel<T> {
    pub fn new(d: usize, pi: Vec<Vec<T>>) -> Result<Self> {
        if d == 0 || pi.len() != d || pi.iter().any(|row| row.len() != d) {
            return Err(Error::Shape(format!("Weyl distribution must be {d} x {d}")));
        }
        let flat: Vec<T> = pi.iter().flatten().copied().collect();
        check_distribution("Weyl distribution", &flat)?;
        Ok(Self { d, pi })
    }

    pub fn identity(d: usize) -> Self {
        let mut pi = vec![vec![T::zero(); d]; d];
        pi[0][0] = T::one();
        Self { d, pi }
    }

    /// `(1 - p) x + (p/d) Tr(x) I`, `0 <= p <= d^2/(d^2 - 1)`.
    pub fn depolarizing(d: usize, p: T) -> Result<Self> {
        let d2 = T::from_count(d * d);
        let pmax = d2 / (d2 - T::one());
        if d < 2 || !(p >= T::zero() && p <= pmax + T::lit(DISTRIBUTION_TOL)) {
            return Err(out_of_range("p", p.as_f64(), format!("[0, {}]", pmax.as_f64())));
        }
        let mut pi = vec![vec![p / d2; d]; d];
        pi[0][0] = T::one() - (d2 - T::one()) * p / d2;
        Self::new(d, pi)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn pi(&self) -> &[Vec<T>] {
        &self.pi
    }

    pub fn prob(&self, m: usize, n: usize) -> T {
        self.pi[m][n]
    }
}

impl<T: Real> QuantumChannel<T> for WeylChannel<T> {
    fn dim(&self) -> usize {
        self.d
    }

    fn kraus(&self) -> Vec<CMat<T>> {
        WeylIndex::all(self.d)
            .filter(|i| self.pi[i.m][i.n] > T::zero())
            .map(|i| weyl_operator::<T>(i).scale_real(self.pi[i.m][i.n].sqrt()))
            .collect()
    }

    fn map(&self, x: &CMat<T>) -> CMat<T> {
        let d = self.d;
        let mut out = CMat::zeros(d, d);
        for i in WeylIndex::all(d) {
            let w = self.pi[i.m][i.n];
            if w > T::zero() {
                out.add_scaled(&weyl_operator::<T>(i).conjugate(x), Complex::new(w, T::zero()));
            }
        }
        out
    }
}

/// Phase damping `x -> sum_j lambda_j V^j x V^{-j}` on the cyclic group
/// `{U_{sj,j}}` (`s < d`) or `{U_{j,0}}` (`s = d`).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDamping<T> {
    d: usize,
    lambda: Vec<T>,
    s: usize,
}

impl<T: Real> PhaseDamping<T> {
    pub fn new(d: usize, lambda: Vec<T>, s: usize) -> Result<Self> {
        if lambda.len() != d {
            return Err(Error::Shape(format!("{} damping weights for d = {d}", lambda.len())));
        }
        if s > d {
            return Err(out_of_range("s", s as f64, format!("0..={d}")));
        }
        check_distribution("damping weights", &lambda)?;
        Ok(Self { d, lambda, s })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn lambda(&self) -> &[T] {
        &self.lambda
    }

    pub fn subgroup(&self) -> usize {
        self.s
    }

    /// Weyl index of the `j`-th Kraus unitary.
    pub fn index(&self, j: usize) -> WeylIndex {
        let d = self.d;
        if self.s == d {
            WeylIndex { d, m: j % d, n: 0 }
        } else {
            WeylIndex {
                d,
                m: (self.s * j) % d,
                n: j % d,
            }
        }
    }

    pub fn to_weyl(&self) -> WeylChannel<T> {
        let mut pi = vec![vec![T::zero(); self.d]; self.d];
        for (j, &l) in self.lambda.iter().enumerate() {
            let i = self.index(j);
            pi[i.m][i.n] = pi[i.m][i.n] + l;
        }
        WeylChannel { d: self.d, pi }
    }

    /// Basis diagonalizing the Kraus unitaries. Prime `d` is required for
    /// `0 < s < d`.
    pub fn eigenbasis(&self) -> Result<Basis<T>> {
        if self.s == 0 {
            Ok(Basis::computational(self.d))
        } else if self.s == self.d {
            Ok(fourier_basis(self.d))
        } else {
            Ok(mub_family(self.d)?.basis(self.s).clone())
        }
    }
}

impl<T: Real> QuantumChannel<T> for PhaseDamping<T> {
    fn dim(&self) -> usize {
        self.d
    }

    fn kraus(&self) -> Vec<CMat<T>> {
        self.lambda
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > T::zero())
            .map(|(j, &l)| weyl_operator::<T>(self.index(j)).scale_real(l.sqrt()))
            .collect()
    }
}

/// Parameters of the standard channel families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ChannelKind {
    Depolarizing { d: usize, p: f64 },
    /// `(1 - 2p) x + p sigma_y x sigma_y + p sigma_z x sigma_z`, `0 < p < 1/2`.
    TwoPauli { p: f64 },
    PhaseDamping { d: usize, lambda: Vec<f64>, s: usize },
    Weyl { d: usize, pi: Vec<Vec<f64>> },
    /// Weights of `I, sigma_x, sigma_y, sigma_z`.
    Pauli { w: [f64; 4] },
}

#[derive(Debug, Clone, PartialEq)]
pub enum StandardChannel<T> {
    Weyl(WeylChannel<T>),
    PhaseDamping(PhaseDamping<T>),
    Pauli(PauliCoeffs<T>),
}

impl<T: Real> StandardChannel<T> {
    /// Weyl distribution; Pauli weights are read with `U_{1,0} ~ sigma_x`,
    /// `U_{0,1} ~ sigma_z`, `U_{1,1} ~ sigma_y`.
    pub fn weyl(&self) -> WeylChannel<T> {
        match self {
            Self::Weyl(w) => w.clone(),
            Self::PhaseDamping(pd) => pd.to_weyl(),
            Self::Pauli(c) => c.to_weyl(),
        }
    }

    /// Pauli weights of a qubit channel.
    pub fn pauli(&self) -> Option<PauliCoeffs<T>> {
        match self {
            Self::Pauli(c) => Some(*c),
            other if other.dim() == 2 => Some(PauliCoeffs::from_weyl(&other.weyl())),
            _ => None,
        }
    }
}

impl<T: Real> QuantumChannel<T> for StandardChannel<T> {
    fn dim(&self) -> usize {
        match self {
            Self::Weyl(w) => w.dim(),
            Self::PhaseDamping(pd) => pd.dim(),
            Self::Pauli(_) => 2,
        }
    }

    fn kraus(&self) -> Vec<CMat<T>> {
        match self {
            Self::Weyl(w) => w.kraus(),
            Self::PhaseDamping(pd) => pd.kraus(),
            Self::Pauli(c) => c.kraus(),
        }
    }

    fn map(&self, x: &CMat<T>) -> CMat<T> {
        match self {
            Self::Weyl(w) => w.map(x),
            Self::PhaseDamping(pd) => pd.map(x),
            Self::Pauli(c) => c.map(x),
        }
    }
}

pub fn make_standard_channel<T: Real>(kind: ChannelKind) -> Result<StandardChannel<T>> {
    let lit = |v: &[f64]| v.iter().map(|&x| T::lit(x)).collect::<Vec<T>>();
    match kind {
        ChannelKind::Depolarizing { d, p } => Ok(StandardChannel::Weyl(WeylChannel::depolarizing(d, T::lit(p))?)),
        ChannelKind::TwoPauli { p } => Ok(StandardChannel::Pauli(PauliCoeffs::two_pauli(T::lit(p))?)),
        ChannelKind::PhaseDamping { d, lambda, s } => {
            Ok(StandardChannel::PhaseDamping(PhaseDamping::new(d, lit(&lambda), s)?))
        }
        ChannelKind::Weyl { d, pi } => Ok(StandardChannel::Weyl(WeylChannel::new(
            d,
            pi.iter().map(|row| lit(row)).collect(),
        )?)),
        ChannelKind::Pauli { w } => Ok(StandardChannel::Pauli(PauliCoeffs::new(
            w.map(T::lit),
        )?)),
    }
}

/// `lambda[s][t]` with `Phi(U_{s,t}) = lambda_{st} U_{s,t}`, from the character
/// sum `sum_{m,n} pi_{m,n} e^{2 pi i (s n - t m)/d}`, cross-checked against the
/// direct action of the channel.
pub fn weyl_spectrum<T: Real>(ch: &WeylChannel<T>) -> Result<Vec<Vec<Complex<T>>>> {
    let d = ch.dim();
    let mut lambda = vec![vec![Complex::zero(); d]; d];
    for s in 0..d {
        for t in 0..d {
            let mut acc = Complex::zero();
            for i in WeylIndex::all(d) {
                let k = (s * i.n) as i64 - (t * i.m) as i64;
                acc = acc + root_of_unity::<T>(k, d) * ch.prob(i.m, i.n);
            }
            lambda[s][t] = acc;
        }
    }
    let (direct, residual) = channel_weyl_spectrum(ch);
    let mut worst = residual;
    for s in 0..d {
        for t in 0..d {
            worst = worst.max((direct[s][t] - lambda[s][t]).norm());
        }
    }
    if worst > T::lit(1e-12).max(T::noise_floor()) {
        return Err(Error::Contract(format!(
            "Weyl spectrum cross-check failed ({:e})",
            worst.as_f64()
        )));
    }
    Ok(lambda)
}

/// `Tr(U_{s,t}^dag Phi(U_{s,t}))/d` for any channel, together with the
/// largest entry of `Phi(U_{s,t}) - lambda_{st} U_{s,t}` (zero iff the channel
/// is diagonal on Weyl operators).
pub fn channel_weyl_spectrum<T: Real, C: QuantumChannel<T> + ?Sized>(ch: &C) -> (Vec<Vec<Complex<T>>>, T) {
    let d = ch.dim();
    let inv_d = T::one() / T::from_count(d);
    let mut lambda = vec![vec![Complex::zero(); d]; d];
    let mut residual = T::zero();
    for i in WeylIndex::all(d) {
        let u = weyl_operator::<T>(i);
        let out = ch.map(&u);
        let l = u.adjoint().matmul(&out).trace() * inv_d;
        residual = residual.max(out.max_abs_diff(&u.scale(l)));
        lambda[i.m][i.n] = l;
    }
    (lambda, residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{apply, channel_distance, KrausChannel};
    use crate::linalg::random::{random_density, random_distribution, rng_from_seed};
    use crate::linalg::{von_neumann_entropy, DensityMatrix, PureState};

    #[test]
    fn depolarizing_distribution() {
        let w = WeylChannel::<f64>::depolarizing(2, 0.4).unwrap();
        assert!((w.prob(0, 0) - 0.7).abs() < 1e-15);
        assert!((w.prob(1, 1) - 0.1).abs() < 1e-15);
        assert!(WeylChannel::<f64>::depolarizing(2, 1.4).is_err());
        assert!(WeylChannel::<f64>::depolarizing(2, 4.0 / 3.0).is_ok());
        assert!(WeylChannel::<f64>::depolarizing(2, -0.1).is_err());
    }

    #[test]
    fn depolarizing_on_pure_state() {
        let ch = make_standard_channel::<f64>(ChannelKind::Depolarizing { d: 2, p: 0.5 }).unwrap();
        let rho = DensityMatrix::from_pure(&PureState::basis(2, 0));
        let out = apply(&ch, &rho).unwrap();
        let spec = out.spectrum();
        assert!((spec[0] - 0.25).abs() < 1e-12 && (spec[1] - 0.75).abs() < 1e-12);
        assert!((von_neumann_entropy(&out) - 0.562335).abs() < 1e-6);
    }

    #[test]
    fn zero_depolarizing_is_identity() {
        let mut rng = rng_from_seed(3);
        for d in 2..=4 {
            let ch = make_standard_channel::<f64>(ChannelKind::Depolarizing { d, p: 0.0 }).unwrap();
            let rho = random_density::<f64>(d, d, &mut rng);
            assert!(apply(&ch, &rho).unwrap().mat().max_abs_diff(rho.mat()) < 1e-12);
        }
    }

    #[test]
    fn two_pauli_coefficients() {
        let ch = make_standard_channel::<f64>(ChannelKind::TwoPauli { p: 0.2 }).unwrap();
        let c = ch.pauli().unwrap();
        let expected = [0.6, 0.0, 0.2, 0.2];
        assert!(c.weights().iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-15));
        assert!(make_standard_channel::<f64>(ChannelKind::TwoPauli { p: 0.5 }).is_err());
        assert!(make_standard_channel::<f64>(ChannelKind::TwoPauli { p: 0.0 }).is_err());
    }

    #[test]
    fn bistochastic_on_maximally_mixed() {
        let mut rng = rng_from_seed(8);
        for d in 2..=5 {
            let pi = random_distribution::<f64>(d * d, &mut rng);
            let ch = WeylChannel::new(d, pi.chunks(d).map(|c| c.to_vec()).collect()).unwrap();
            let mixed = DensityMatrix::maximally_mixed(d);
            assert!(apply(&ch, &mixed).unwrap().mat().max_abs_diff(mixed.mat()) < 1e-12);
        }
    }

    #[test]
    fn depolarizing_spectrum() {
        let w = WeylChannel::<f64>::depolarizing(2, 0.4).unwrap();
        let l = weyl_spectrum(&w).unwrap();
        assert!((l[0][0] - Complex::new(1.0, 0.0)).norm() < 1e-14);
        for (s, t) in [(0, 1), (1, 0), (1, 1)] {
            assert!((l[s][t] - Complex::new(0.6, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn two_pauli_spectrum() {
        let w = PauliCoeffs::<f64>::two_pauli(0.2).unwrap().to_weyl();
        let l = weyl_spectrum(&w).unwrap();
        // Character-sum oracle: lambda_{10} = pi00 + pi10 - pi01 - pi11.
        let oracle = w.prob(0, 0) + w.prob(1, 0) - w.prob(0, 1) - w.prob(1, 1);
        assert!((l[1][0].re - oracle).abs() < 1e-14);
        assert!((l[1][0].re - 0.2).abs() < 1e-14);
        assert!((l[0][1].re - 0.6).abs() < 1e-14);
        assert!((l[1][1].re - 0.6).abs() < 1e-14);
    }

    #[test]
    fn identity_spectrum() {
        let l = weyl_spectrum(&WeylChannel::<f64>::identity(3)).unwrap();
        assert!(l.iter().flatten().all(|z| (z - Complex::new(1.0, 0.0)).norm() < 1e-14));
    }

    #[test]
    fn spectrum_cross_check_on_random_channels() {
        let mut rng = rng_from_seed(21);
        for d in [2usize, 3, 5] {
            let pi = random_distribution::<f64>(d * d, &mut rng);
            let ch = WeylChannel::new(d, pi.chunks(d).map(|c| c.to_vec()).collect()).unwrap();
            assert!(weyl_spectrum(&ch).is_ok());
        }
    }

    #[test]
    fn phase_damping_matches_its_weyl_form() {
        for d in [2usize, 3, 5] {
            for s in 0..=d {
                let mut lambda = vec![0.0; d];
                lambda[0] = 0.6;
                lambda[1] = 0.4;
                let pd = PhaseDamping::<f64>::new(d, lambda, s).unwrap();
                let w = pd.to_weyl();
                assert!(channel_distance(&pd, &w).unwrap() < 1e-13);
                let k = KrausChannel::new(pd.kraus()).unwrap();
                assert!(channel_distance(&k, &w).unwrap() < 1e-13);
            }
        }
    }

    #[test]
    fn phase_damping_fixes_its_eigenbasis() {
        for d in [2usize, 3, 5] {
            for s in 0..=d {
                let lambda = vec![1.0 / d as f64; d];
                let pd = PhaseDamping::<f64>::new(d, lambda, s).unwrap();
                let b = pd.eigenbasis().unwrap();
                for j in 0..d {
                    let p = b.projector(j);
                    assert!(pd.map(&p).max_abs_diff(&p) < 1e-12, "d={d} s={s} j={j}");
                }
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(PhaseDamping::<f64>::new(2, vec![0.5, 0.6], 0).is_err());
        assert!(PhaseDamping::<f64>::new(2, vec![0.5, 0.5], 3).is_err());
        assert!(WeylChannel::<f64>::new(2, vec![vec![1.0, 0.0]]).is_err());
        assert!(make_standard_channel::<f64>(ChannelKind::Pauli { w: [0.5, 0.5, 0.1, -0.1] }).is_err());
    }
}
