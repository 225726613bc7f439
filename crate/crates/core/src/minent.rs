//! Minimal output entropy `min_psi S(Phi(|psi><psi|))` by multi-start local
//! descent on the unit sphere, and additivity experiments on small products.
//!
//! A restart starts from a Haar-random vector drawn from substream `i` of the
//! master seed and runs projected gradient descent with an Armijo line search.
//! The gradient of the entropy in real coordinates is `2 Phi*(-ln rho - I) psi`;
//! once the smallest output eigenvalue drops below `1e-8` the logarithm is no
//! longer usable and the restart continues with a derivative-free compass
//! search. Restarts run in parallel and are reduced by `(value, index)`.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::channels::{make_standard_channel, ChannelKind, KrausChannel, QuantumChannel};
use crate::error::{out_of_range, Error, Result};
use crate::linalg::random::{random_unit_vector, stream_rng};
use crate::linalg::{eig_hermitian, inner, shannon_entropy, tensor_vec, vec_norm, CMat, PureState};
use crate::scalar::Real;

/// Restart budget for a single channel.
pub const DEFAULT_RESTARTS: usize = 100;
/// Restart budget for a product channel.
pub const DEFAULT_PRODUCT_RESTARTS: usize = 200;
/// Objective change that ends a restart.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Largest product dimension accepted by [`additivity_gap`].
pub const MAX_PRODUCT_DIM: usize = 16;

const SPECTRAL_GAP: f64 = 1e-8;
const MAX_GRADIENT_STEPS: usize = 5000;
const MAX_COMPASS_STEPS: usize = 20000;
const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-14;
const COMPASS_START: f64 = 1e-2;
const COMPASS_END: f64 = 1e-10;

/// Final point of one restart.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe<T> {
    pub restart: usize,
    pub state: PureState<T>,
    pub entropy: T,
    pub converged: bool,
    /// Whether the restart switched to the derivative-free search.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinEntResult<T> {
    pub value: T,
    pub argmin: PureState<T>,
    pub restarts: usize,
    /// Restarts that met the stopping rule before their step budget ran out.
    pub converged: usize,
    pub seed: u64,
    /// One probe per restart, in restart order.
    pub audit: Vec<Probe<T>>,
}

struct Objective<T> {
    kraus: Vec<CMat<T>>,
    dim: usize,
}

struct Eval<T> {
    value: T,
    min_eigenvalue: T,
    gradient: Option<Vec<Complex<T>>>,
}

impl<T: Real> Objective<T> {
    fn new<C: QuantumChannel<T> + ?Sized>(ch: &C) -> Self {
        Self {
            kraus: ch.kraus(),
            dim: ch.dim(),
        }
    }

    fn value(&self, psi: &[Complex<T>]) -> T {
        self.eval(psi, false).value
    }

    fn eval(&self, psi: &[Complex<T>], with_gradient: bool) -> Eval<T> {
        let images: Vec<Vec<Complex<T>>> = self.kraus.iter().map(|k| k.mat_vec(psi)).collect();
        let mut rho = CMat::zeros(self.dim, self.dim);
        for phi in &images {
            rho.add_scaled(&CMat::projector(phi), Complex::new(T::one(), T::zero()));
        }
        let eig = match eig_hermitian(&rho) {
            Ok(e) => e,
            Err(_) => {
                return Eval {
                    value: T::infinity(),
                    min_eigenvalue: T::zero(),
                    gradient: None,
                }
            }
        };
        let value = shannon_entropy(&eig.values);
        let min_eigenvalue = eig.values.first().copied().unwrap_or_else(T::zero);
        let gradient = (with_gradient && min_eigenvalue >= T::lit(SPECTRAL_GAP)).then(|| {
            let g = eig.map_spectrum(|x| -(x.ln() + T::one()));
            let mut out = vec![Complex::zero(); self.dim];
            for (k, phi) in self.kraus.iter().zip(&images) {
                let v = k.adjoint().mat_vec(&g.mat_vec(phi));
                for (o, x) in out.iter_mut().zip(v) {
                    *o = *o + x * T::lit(2.0);
                }
            }
            tangent(psi, out)
        });
        Eval {
            value,
            min_eigenvalue,
            gradient,
        }
    }
}

fn tangent<T: Real>(psi: &[Complex<T>], g: Vec<Complex<T>>) -> Vec<Complex<T>> {
    let radial = inner(psi, &g).re;
    g.into_iter().zip(psi).map(|(x, &p)| x - p * radial).collect()
}

fn normalize<T: Real>(v: Vec<Complex<T>>) -> Vec<Complex<T>> {
    let n = vec_norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

fn step<T: Real>(psi: &[Complex<T>], dir: &[Complex<T>], t: T) -> Vec<Complex<T>> {
    normalize(psi.iter().zip(dir).map(|(&p, &g)| p - g * t).collect())
}

struct Outcome<T> {
    psi: Vec<Complex<T>>,
    value: T,
    converged: bool,
    fallback: bool,
}

fn descend<T: Real>(obj: &Objective<T>, start: Vec<Complex<T>>, tol: T) -> Outcome<T> {
    let mut psi = normalize(start);
    let mut t = T::one();
    for _ in 0..MAX_GRADIENT_STEPS {
        let e = obj.eval(&psi, true);
        let Some(g) = e.gradient else {
            return compass(obj, psi, e.value, tol);
        };
        let g2 = vec_norm(&g).powi(2);
        if g2 <= T::lit(1e-30) {
            return Outcome { psi, value: e.value, converged: true, fallback: false };
        }
        t = (t * T::lit(2.0)).min(T::lit(1e3));
        let accepted = loop {
            let cand = step(&psi, &g, t);
            let v = obj.value(&cand);
            if v <= e.value - T::lit(ARMIJO) * t * g2 {
                break Some((cand, v));
            }
            t = t * T::lit(0.5);
            if t < T::lit(MIN_STEP) {
                break None;
            }
        };
        let Some((cand, v)) = accepted else {
            if e.min_eigenvalue < T::lit(SPECTRAL_GAP).sqrt() {
                return compass(obj, psi, e.value, tol);
            }
            return Outcome { psi, value: e.value, converged: true, fallback: false };
        };
        psi = cand;
        if e.value - v < tol {
            return Outcome { psi, value: v, converged: true, fallback: false };
        }
    }
    let value = obj.value(&psi);
    Outcome { psi, value, converged: false, fallback: false }
}

/// Compass search over the `2 dim` real coordinate directions.
fn compass<T: Real>(obj: &Objective<T>, mut psi: Vec<Complex<T>>, mut value: T, tol: T) -> Outcome<T> {
    let n = psi.len();
    let mut h = T::lit(COMPASS_START);
    let units = [Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::one())];
    for _ in 0..MAX_COMPASS_STEPS {
        if h < T::lit(COMPASS_END) {
            return Outcome { psi, value, converged: true, fallback: true };
        }
        let mut best: Option<(Vec<Complex<T>>, T)> = None;
        for i in 0..n {
            for u in units {
                for sign in [T::one(), -T::one()] {
                    let mut cand = psi.clone();
                    cand[i] = cand[i] + u * (h * sign);
                    let cand = normalize(cand);
                    let v = obj.value(&cand);
                    if v < best.as_ref().map_or(value, |b| b.1) {
                        best = Some((cand, v));
                    }
                }
            }
        }
        match best {
            Some((cand, v)) => {
                let gain = value - v;
                psi = cand;
                value = v;
                if gain < tol * T::lit(1e-2) {
                    h = h * T::lit(0.5);
                }
            }
            None => h = h * T::lit(0.5),
        }
    }
    Outcome { psi, value, converged: false, fallback: true }
}

fn check_tol<T: Real>(tol: T) -> Result<()> {
    if !(tol > T::zero()) {
        return Err(out_of_range("tol", tol.as_f64(), "(0, inf)"));
    }
    Ok(())
}

fn minimize<T: Real>(obj: &Objective<T>, starts: Vec<Vec<Complex<T>>>, seed: u64, tol: T) -> Result<MinEntResult<T>> {
    let audit: Vec<Probe<T>> = starts
        .into_par_iter()
        .enumerate()
        .map(|(restart, s)| {
            let o = descend(obj, s, tol);
            Probe {
                restart,
                state: PureState::normalized(o.psi).expect("unit vector"),
                entropy: o.value,
                converged: o.converged,
                fallback: o.fallback,
            }
        })
        .collect();
    let best = audit
        .iter()
        .filter(|p| p.entropy.is_finite())
        .min_by(|a, b| a.entropy.partial_cmp(&b.entropy).unwrap().then(a.restart.cmp(&b.restart)))
        .ok_or_else(|| Error::Contract("no restart produced a finite entropy".into()))?;
    Ok(MinEntResult {
        value: best.entropy,
        argmin: best.state.clone(),
        restarts: audit.len(),
        converged: audit.iter().filter(|p| p.converged).count(),
        seed,
        audit,
    })
}

fn random_starts<T: Real>(dim: usize, restarts: usize, seed: u64) -> Vec<Vec<Complex<T>>> {
    (0..restarts)
        .map(|i| random_unit_vector(dim, &mut stream_rng(seed, i as u64)))
        .collect()
}

/// Multi-start estimate of the minimal output entropy of `ch`.
pub fn min_output_entropy<T: Real, C: QuantumChannel<T> + ?Sized>(
    ch: &C,
    restarts: usize,
    seed: u64,
    tol: T,
) -> Result<MinEntResult<T>> {
    if restarts == 0 {
        return Err(out_of_range("restarts", 0.0, "[1, inf)"));
    }
    check_tol(tol)?;
    let obj = Objective::new(ch);
    minimize(&obj, random_starts(ch.dim(), restarts, seed), seed, tol)
}

/// Closed-form minimal output entropy for the channels where it is known.
pub fn analytic_min_entropy(kind: &ChannelKind) -> Result<f64> {
    make_standard_channel::<f64>(kind.clone())?;
    match *kind {
        ChannelKind::Depolarizing { d, p } => {
            let df = d as f64;
            let mut spec = vec![1.0 - p + p / df];
            spec.extend(std::iter::repeat_n(p / df, d - 1));
            Ok(shannon_entropy(&spec))
        }
        ChannelKind::TwoPauli { p } if p <= 1.0 / 3.0 => Ok(shannon_entropy(&[p, 1.0 - p])),
        ChannelKind::PhaseDamping { .. } => Ok(0.0),
        _ => Err(Error::Unsupported(format!("no closed form for {kind:?}"))),
    }
}

/// Single-channel and product estimates behind an additivity gap.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditivityReport<T> {
    /// `min S(A (x) B) - min S(A) - min S(B)`.
    pub gap: T,
    pub a: MinEntResult<T>,
    pub b: MinEntResult<T>,
    /// Restart 0 starts from the product of the single-channel argmins.
    pub product: MinEntResult<T>,
}

/// Additivity experiment on `a (x) b` with `restarts` random starts per run.
pub fn additivity_gap<T, A, B>(a: &A, b: &B, restarts: usize, seed: u64) -> Result<AdditivityReport<T>>
where
    T: Real,
    A: QuantumChannel<T> + ?Sized,
    B: QuantumChannel<T> + ?Sized,
{
    let dim = a.dim() * b.dim();
    if dim > MAX_PRODUCT_DIM {
        return Err(Error::Dimension(format!(
            "product dimension {dim} above the cap {MAX_PRODUCT_DIM}"
        )));
    }
    let tol = T::lit(DEFAULT_TOL);
    let ra = min_output_entropy(a, restarts, seed, tol)?;
    let rb = min_output_entropy(b, restarts, seed, tol)?;
    let product_ch = KrausChannel::tensor(a, b);
    let mut starts = vec![tensor_vec(ra.argmin.vector(), rb.argmin.vector())];
    starts.extend(random_starts(dim, restarts, seed));
    let product = minimize(&Objective::new(&product_ch), starts, seed, tol)?;
    Ok(AdditivityReport {
        gap: product.value - ra.value - rb.value,
        a: ra,
        b: rb,
        product,
    })
}
