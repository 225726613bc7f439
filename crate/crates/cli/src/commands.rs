//! Subcommand implementations. Each returns the cases of one report.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use weylcov::bounds::{
    bound_sweep, dpi_check, proof_trace, theorem1_check, theorem2_check, theorem3_check, BoundReport,
};
use weylcov::channels::{
    check_covariance, decompose_prop7, decompose_tp2, decompose_two_pauli, make_standard_channel, ChannelKind,
    StandardChannel, WeylChannel,
};
use weylcov::linalg::random::{derive_seed, random_density, random_distribution, rng_from_seed, stream_rng};
use weylcov::linalg::{CMat, DensityMatrix, PureState};
use weylcov::minent::{additivity_gap, analytic_min_entropy, min_output_entropy, MinEntResult, DEFAULT_TOL};
use weylcov::orbits::sample_admissible_in;
use weylcov::weyl::{commutation_phase, fourier_basis, mub_family, mub_projector, weyl_operator, Basis, WeylIndex};
use weylcov::Error;

use crate::args::{Bound, ChannelArgs, ChannelName, Command, Decompose, PhaseDampingArgs, StateKind};
use crate::report::Case;

/// Why a run stopped before producing cases.
#[derive(Debug)]
pub enum Failure {
    /// Arguments parse but do not describe a valid request.
    Usage(String),
    /// The library rejected the request.
    Precondition(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Precondition(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

pub struct Run {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub tolerance: f64,
    pub cases: Vec<Case>,
}

pub struct Ctx {
    pub seed: u64,
    pub tol: Option<f64>,
    /// Multiplier applied to every reported entropy.
    pub unit: f64,
}

impl Ctx {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn s(&self, nats: f64) -> f64 {
        nats * self.unit
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn matrix_json(m: &CMat<f64>) -> Value {
    let n = m.cols();
    let rows = |f: fn(&num_complex::Complex<f64>) -> f64| -> Vec<Vec<f64>> {
        m.entries().chunks(n).map(|r| r.iter().map(f).collect()).collect()
    };
    json!({ "re": rows(|z| z.re), "im": rows(|z| z.im) })
}

fn vector_json(v: &PureState<f64>) -> Value {
    json!({
        "re": v.vector().iter().map(|z| z.re).collect::<Vec<_>>(),
        "im": v.vector().iter().map(|z| z.im).collect::<Vec<_>>(),
    })
}

impl ChannelArgs {
    fn kind(&self) -> Res<ChannelKind> {
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| usage(format!("--{name} is required for this channel")));
        let dim = || self.dim.ok_or_else(|| usage("--dim is required for this channel"));
        Ok(match self.channel {
            ChannelName::Depolarizing => ChannelKind::Depolarizing {
                d: dim()?,
                p: need(self.p, "p")?,
            },
            ChannelName::TwoPauli => ChannelKind::TwoPauli { p: need(self.p, "p")? },
            ChannelName::PhaseDamping => {
                if self.lambda.is_empty() {
                    return Err(usage("--lambda is required for phase-damping"));
                }
                ChannelKind::PhaseDamping {
                    d: self.dim.unwrap_or(self.lambda.len()),
                    lambda: self.lambda.clone(),
                    s: self.s.unwrap_or(0),
                }
            }
            ChannelName::Pauli => {
                let w: [f64; 4] = self
                    .w
                    .clone()
                    .try_into()
                    .map_err(|_| usage("--w takes exactly four weights"))?;
                ChannelKind::Pauli { w }
            }
            ChannelName::Weyl => {
                let d = dim()?;
                if self.pi.len() != d * d {
                    return Err(usage(format!("--pi needs {} entries for --dim {d}", d * d)));
                }
                ChannelKind::Weyl {
                    d,
                    pi: self.pi.chunks(d).map(|c| c.to_vec()).collect(),
                }
            }
        })
    }
}

fn kind_json(kind: &ChannelKind) -> Value {
    serde_json::to_value(kind).expect("channel kinds serialize")
}

fn parse_group(spec: &str, d: usize) -> Res<Basis<f64>> {
    let bad = || usage(format!("unknown group `{spec}`"));
    match spec.split_once(':') {
        None if spec == "computational" => Ok(Basis::computational(d)),
        None if spec == "fourier" => Ok(fourier_basis(d)),
        Some(("mub", s)) => {
            let s: usize = s.parse().map_err(|_| bad())?;
            let fam = mub_family::<f64>(d)?;
            if s > d {
                return Err(usage(format!("mub index {s} above {d}")));
            }
            Ok(fam.basis(s).clone())
        }
        Some(("pauli", axis)) if d == 2 && axis.len() == 1 => Ok(Basis::pauli(axis.chars().next().unwrap())?),
        _ => Err(bad()),
    }
}

pub fn run(cmd: &Command, ctx: &Ctx) -> Res<Run> {
    match cmd {
        Command::Mub { dim } => mub(*dim, ctx),
        Command::Weyl { dim } => weyl(*dim, ctx),
        Command::Covariance { channel, group, samples } => covariance(channel, group, *samples, ctx),
        Command::Decompose { which } => match which {
            Decompose::Prop7 { channel } => prop7(channel, ctx),
            Decompose::TwoPauli { p } => two_pauli(*p, ctx),
        },
        Command::Bound { which } => match which {
            Bound::T1(a) => t1(a, ctx),
            Bound::T2 { dim, p, dim_k, samples, state } => t2(*dim, *p, dim_k.unwrap_or(*dim), *samples, *state, ctx),
            Bound::T3 { p, samples, state } => t3(*p, *samples, *state, ctx),
        },
        Command::Trace(a) => trace(a, ctx),
        Command::Dpi { samples, dim } => dpi(*samples, *dim, ctx),
        Command::Minent { channel, restarts } => minent(channel, *restarts, ctx),
        Command::Additivity { a, b, restarts } => additivity(a, b, *restarts, ctx),
    }
}

fn mub(d: usize, ctx: &Ctx) -> Res<Run> {
    let fam = mub_family::<f64>(d)?;
    let mut cases = Vec::new();
    for s in 0..=d {
        let mut sum = CMat::zeros(d, d);
        for j in 0..d {
            sum = &sum + &mub_projector::<f64>(d, s, j);
        }
        let completeness = sum.max_abs_diff(&CMat::identity(d));
        let orthonormality = fam.basis(s).orthonormality_defect();
        let overlap = (0..=d)
            .filter(|&t| t != s)
            .map(|t| fam.basis(s).unbiasedness_defect(fam.basis(t)))
            .fold(0.0, f64::max);
        let violation = completeness.max(orthonormality).max(overlap);
        cases.push(
            Case::new(
                s,
                json!({ "d": d, "s": s }),
                json!({
                    "completeness_defect": completeness,
                    "orthonormality_defect": orthonormality,
                    "max_overlap_defect": overlap,
                    "vectors": fam.basis(s).vectors().iter()
                        .map(|v| PureState::normalized(v.clone()).map(|p| vector_json(&p)))
                        .collect::<Result<Vec<_>, _>>()?,
                }),
                violation,
            )
            .residual(violation),
        );
    }
    Ok(Run {
        command: "mub".into(),
        params: params(&[("dim", json!(d))]),
        tolerance: ctx.tol(1e-10),
        cases,
    })
}

fn weyl(d: usize, ctx: &Ctx) -> Res<Run> {
    if d == 0 {
        return Err(Error::Dimension("dimension must be at least 1".into()).into());
    }
    let ops: Vec<(WeylIndex, CMat<f64>)> = WeylIndex::all(d).map(|i| (i, weyl_operator(i))).collect();
    let mut cases = Vec::new();
    for (k, (a, ua)) in ops.iter().enumerate() {
        let mut relation = 0.0f64;
        for (b, ub) in &ops {
            let phase = commutation_phase::<f64>(*a, *b)?;
            relation = relation.max(ua.matmul(ub).max_abs_diff(&ub.matmul(ua).scale(phase)));
        }
        let split = weyl_operator::<f64>(WeylIndex::new(d, a.m, 0)?).matmul(&weyl_operator(WeylIndex::new(d, 0, a.n)?));
        let factorization = ua.max_abs_diff(&split);
        let unitarity = ua.unitarity_defect();
        let violation = relation.max(factorization).max(unitarity);
        cases.push(
            Case::new(
                k,
                json!({ "d": d, "m": a.m, "n": a.n }),
                json!({
                    "commutation_defect": relation,
                    "factorization_defect": factorization,
                    "unitarity_defect": unitarity,
                }),
                violation,
            )
            .residual(violation),
        );
    }
    Ok(Run {
        command: "weyl".into(),
        params: params(&[("dim", json!(d))]),
        tolerance: ctx.tol(1e-13),
        cases,
    })
}

fn covariance(channel: &ChannelArgs, group: &str, samples: usize, ctx: &Ctx) -> Res<Run> {
    let kind = channel.kind()?;
    let ch = make_standard_channel::<f64>(kind.clone())?;
    let basis = parse_group(group, weylcov::channels::QuantumChannel::dim(&ch))?;
    let rep = check_covariance(&ch, &basis, samples, ctx.seed)?;
    let violation = if rep.spectral_criterion { rep.max_deviation } else { 0.0 };
    let tolerance = ctx.tol(1e-9);
    let case = Case::new(
        0,
        json!({ "channel": kind_json(&kind), "group": group, "samples": samples, "seed": ctx.seed }),
        json!({
            "spectral_criterion": rep.spectral_criterion,
            "max_deviation": rep.max_deviation,
            "covariant_on_samples": rep.max_deviation <= tolerance,
        }),
        violation,
    )
    .residual(rep.max_deviation);
    Ok(Run {
        command: "covariance".into(),
        params: params(&[("channel", kind_json(&kind)), ("group", json!(group)), ("samples", json!(samples))]),
        tolerance,
        cases: vec![case],
    })
}

fn prop7(channel: &ChannelArgs, ctx: &Ctx) -> Res<Run> {
    let kind = channel.kind()?;
    let weyl: WeylChannel<f64> = make_standard_channel::<f64>(kind.clone())?.weyl();
    let dec = decompose_prop7(&weyl)?;
    let residual = dec.decomposition.residual();
    let terms: Vec<Value> = dec
        .decomposition
        .terms()
        .iter()
        .map(|t| json!({ "label": t.label, "weight": t.weight }))
        .collect();
    let case = Case::new(
        0,
        json!({ "channel": kind_json(&kind) }),
        json!({ "lambda": dec.lambda, "c": dec.c, "terms": terms, "weight_sum": dec.decomposition.weight_sum() }),
        residual,
    )
    .residual(residual);
    Ok(Run {
        command: "decompose prop7".into(),
        params: params(&[("channel", kind_json(&kind))]),
        tolerance: ctx.tol(1e-12),
        cases: vec![case],
    })
}

fn two_pauli(p: f64, ctx: &Ctx) -> Res<Run> {
    let dec = decompose_two_pauli(p)?;
    let corrected = dec.corrected.residual().max(dec.corrected_solution.residual);
    let (tp2, tp2_solution) = decompose_tp2(p)?;
    let tp2_residual = tp2.residual().max(tp2_solution.residual);
    let cases = vec![
        Case::new(
            0,
            json!({ "p": p, "decomposition": "corrected" }),
            json!({
                "components": ["Phi_1", "sigma_z Phi_0 sigma_z"],
                "weights": dec.corrected_solution.weights,
            }),
            corrected,
        )
        .residual(corrected),
        Case::new(
            1,
            json!({ "p": p, "decomposition": "printed" }),
            json!({
                "components": ["Phi_1", "sigma_z Psi_1 sigma_z"],
                "weights": dec.printed.weights,
                "reproduces_channel": dec.printed.feasible,
            }),
            0.0,
        )
        .residual(dec.printed.residual),
        Case::new(
            2,
            json!({ "p": p, "decomposition": "tp2" }),
            json!({
                "components": ["Phi_0", "sigma_x Phi_1 sigma_x", "sigma_z Phi_1 sigma_z"],
                "weights": tp2_solution.weights,
            }),
            tp2_residual,
        )
        .residual(tp2_residual),
    ];
    Ok(Run {
        command: "decompose two-pauli".into(),
        params: params(&[("p", json!(p))]),
        tolerance: ctx.tol(1e-12),
        cases,
    })
}

fn bound_case(index: usize, inputs: Value, r: &BoundReport<f64>, tol: f64, x: &DensityMatrix<f64>, ctx: &Ctx) -> Case {
    let violation = (-r.margin).max(0.0);
    let mut case = Case::new(
        index,
        inputs,
        json!({
            "lhs": ctx.s(r.lhs),
            "rhs": ctx.s(r.rhs),
            "entropy_constant": ctx.s(r.entropy_constant),
            "conditional_entropies": r.conditional_entropies.iter().map(|&s| ctx.s(s)).collect::<Vec<_>>(),
            "conditional_traces": r.conditional_traces,
        }),
        violation,
    )
    .margin(ctx.s(r.margin));
    if r.margin < -tol {
        case.counterexample = Some(json!({ "state": matrix_json(x.mat()), "factors": x.factors() }));
    }
    case
}

fn admissible_states(a: &PhaseDampingArgs, ctx: &Ctx) -> Res<(Basis<f64>, Vec<(Value, DensityMatrix<f64>)>)> {
    let fam = mub_family::<f64>(a.dim)?;
    if a.basis > a.dim {
        return Err(usage(format!("--basis {} above {}", a.basis, a.dim)));
    }
    let basis = fam.basis(a.basis).clone();
    let dim_k = a.dim_k.unwrap_or(a.dim);
    let states = match a.state {
        StateKind::Maxent => {
            if dim_k != a.dim {
                return Err(usage("--state maxent needs --dim-k equal to --dim"));
            }
            // The maximally entangled state is admissible in every basis.
            vec![(json!({ "state": "maxent" }), DensityMatrix::maximally_entangled(a.dim))]
        }
        StateKind::Random => (0..a.samples)
            .map(|i| {
                let seed = derive_seed(ctx.seed, i as u64);
                let s = sample_admissible_in(&basis, dim_k, a.mix, seed)?;
                Ok((json!({ "state": "admissible", "seed": seed, "dim_k": dim_k, "mix": a.mix }), s.x))
            })
            .collect::<Res<Vec<_>>>()?,
        StateKind::Product => return Err(usage("--state product is only available for t3")),
    };
    Ok((basis, states))
}

fn t1(a: &PhaseDampingArgs, ctx: &Ctx) -> Res<Run> {
    let tol = ctx.tol(1e-9);
    let (basis, states) = admissible_states(a, ctx)?;
    let mut cases = Vec::new();
    for (i, (inputs, x)) in states.into_iter().enumerate() {
        let r = theorem1_check(&a.lambda, &basis, &x)?;
        let mut inputs = inputs;
        inputs["lambda"] = json!(a.lambda);
        inputs["basis"] = json!(a.basis);
        cases.push(bound_case(i, inputs, &r, tol, &x, ctx));
    }
    Ok(Run {
        command: "bound t1".into(),
        params: pd_params(a),
        tolerance: tol,
        cases,
    })
}

fn pd_params(a: &PhaseDampingArgs) -> BTreeMap<String, Value> {
    params(&[
        ("dim", json!(a.dim)),
        ("lambda", json!(a.lambda)),
        ("basis", json!(a.basis)),
        ("dim_k", json!(a.dim_k.unwrap_or(a.dim))),
        ("mix", json!(a.mix)),
        ("samples", json!(a.samples)),
        ("state", json!(format!("{:?}", a.state).to_lowercase())),
    ])
}

fn sweep_cases<F>(dims: (usize, usize), p: f64, samples: usize, tol: f64, ctx: &Ctx, check: F) -> Res<Vec<Case>>
where
    F: Fn(f64, &DensityMatrix<f64>) -> weylcov::Result<BoundReport<f64>> + Sync,
{
    let out = bound_sweep(dims, &[p], samples, ctx.seed, tol, check)?;
    let mut cases = Vec::new();
    for c in &out.cases {
        let psi = weylcov::linalg::haar_random_pure::<f64>(dims.0 * dims.1, c.seed)?;
        let x = DensityMatrix::from_pure(&psi).with_factors(vec![dims.0, dims.1])?;
        let inputs = json!({ "state": "haar_pure", "seed": c.seed, "dims": [dims.0, dims.1], "p": p });
        cases.push(bound_case(c.case, inputs, &c.report, tol, &x, ctx));
    }
    Ok(cases)
}

fn t2(d: usize, p: f64, dim_k: usize, samples: usize, state: StateKind, ctx: &Ctx) -> Res<Run> {
    let tol = ctx.tol(1e-9);
    let cases = match state {
        StateKind::Maxent => {
            let x = DensityMatrix::maximally_entangled(d);
            let r = theorem2_check(d, p, &x)?;
            vec![bound_case(0, json!({ "state": "maxent", "d": d, "p": p }), &r, tol, &x, ctx)]
        }
        StateKind::Random => sweep_cases((d, dim_k), p, samples, tol, ctx, |p, x| theorem2_check(d, p, x))?,
        StateKind::Product => return Err(usage("--state product is only available for t3")),
    };
    Ok(Run {
        command: "bound t2".into(),
        params: params(&[
            ("dim", json!(d)),
            ("p", json!(p)),
            ("dim_k", json!(dim_k)),
            ("samples", json!(samples)),
            ("state", json!(format!("{state:?}").to_lowercase())),
        ]),
        tolerance: tol,
        cases,
    })
}

fn t3(p: f64, samples: usize, state: StateKind, ctx: &Ctx) -> Res<Run> {
    let tol = ctx.tol(1e-9);
    let cases = match state {
        StateKind::Maxent => {
            let x = DensityMatrix::maximally_entangled(2);
            let r = theorem3_check(p, &x)?;
            vec![bound_case(0, json!({ "state": "maxent", "p": p }), &r, tol, &x, ctx)]
        }
        StateKind::Random => sweep_cases((2, 2), p, samples, tol, ctx, theorem3_check)?,
        StateKind::Product => (0..samples)
            .map(|i| {
                let seed = derive_seed(ctx.seed, i as u64);
                let y = random_density::<f64>(2, 2, &mut rng_from_seed(seed));
                let x = DensityMatrix::maximally_mixed(2).tensor(&y);
                let r = theorem3_check(p, &x)?;
                Ok(bound_case(i, json!({ "state": "mixed_product", "seed": seed, "p": p }), &r, tol, &x, ctx))
            })
            .collect::<Res<Vec<_>>>()?,
    };
    Ok(Run {
        command: "bound t3".into(),
        params: params(&[
            ("p", json!(p)),
            ("samples", json!(samples)),
            ("state", json!(format!("{state:?}").to_lowercase())),
        ]),
        tolerance: tol,
        cases,
    })
}

fn trace(a: &PhaseDampingArgs, ctx: &Ctx) -> Res<Run> {
    let tol = ctx.tol(1e-9);
    let (basis, states) = admissible_states(a, ctx)?;
    let mut cases = Vec::new();
    for (i, (mut inputs, x)) in states.into_iter().enumerate() {
        let t = proof_trace(&a.lambda, &basis, &x, None)?;
        let residual = t.ee1_residual.max(t.ee3_residual).max(t.before_residual);
        let violation = residual.max(t.rel_after - t.rel_before).max(t.fixed_point_defect).max(0.0);
        inputs["lambda"] = json!(a.lambda);
        inputs["basis"] = json!(a.basis);
        cases.push(
            Case::new(
                i,
                inputs,
                json!({
                    "rel_before": ctx.s(t.rel_before),
                    "rel_after": ctx.s(t.rel_after),
                    "entropy_out": ctx.s(t.entropy_out),
                    "entropy_pinched": ctx.s(t.entropy_e),
                    "fixed_point_defect": t.fixed_point_defect,
                    "before_residual": t.before_residual,
                    "ee1_residual": t.ee1_residual,
                    "ee3_residual": t.ee3_residual,
                }),
                violation,
            )
            .margin(ctx.s(t.rel_before - t.rel_after))
            .residual(residual),
        );
    }
    Ok(Run {
        command: "trace".into(),
        params: pd_params(a),
        tolerance: tol,
        cases,
    })
}

fn dpi(samples: usize, dim: Option<usize>, ctx: &Ctx) -> Res<Run> {
    let mut cases = Vec::new();
    for i in 0..samples {
        let d = dim.unwrap_or(if i % 2 == 0 { 2 } else { 3 });
        let mut rng = stream_rng(ctx.seed, i as u64);
        let pi = random_distribution::<f64>(d * d, &mut rng);
        let ch = WeylChannel::new(d, pi.chunks(d).map(|c| c.to_vec()).collect())?;
        let rho = random_density::<f64>(d, d, &mut rng);
        let tau = random_density::<f64>(d, d, &mut rng);
        let (before, after) = dpi_check(&ch, &rho, &tau)?;
        cases.push(
            Case::new(
                i,
                json!({ "d": d, "seed": ctx.seed, "stream": i }),
                json!({ "before": ctx.s(before), "after": ctx.s(after) }),
                (after - before).max(0.0),
            )
            .margin(ctx.s(before - after)),
        );
    }
    Ok(Run {
        command: "dpi".into(),
        params: params(&[("samples", json!(samples)), ("dim", json!(dim))]),
        tolerance: ctx.tol(1e-9),
        cases,
    })
}

fn minent_outputs(r: &MinEntResult<f64>, ctx: &Ctx) -> Value {
    json!({
        "value": ctx.s(r.value),
        "argmin": vector_json(&r.argmin),
        "restarts": r.restarts,
        "converged": r.converged,
        "fallback_restarts": r.audit.iter().filter(|p| p.fallback).count(),
    })
}

fn minent(channel: &ChannelArgs, restarts: usize, ctx: &Ctx) -> Res<Run> {
    let kind = channel.kind()?;
    let ch: StandardChannel<f64> = make_standard_channel(kind.clone())?;
    let r = min_output_entropy(&ch, restarts, ctx.seed, DEFAULT_TOL)?;
    let analytic = analytic_min_entropy(&kind).ok();
    let violation = analytic.map_or(0.0, |a| (r.value - a).abs());
    let mut outputs = minent_outputs(&r, ctx);
    outputs["analytic"] = json!(analytic.map(|a| ctx.s(a)));
    let mut case = Case::new(
        0,
        json!({ "channel": kind_json(&kind), "restarts": restarts, "seed": ctx.seed }),
        outputs,
        violation,
    );
    if analytic.is_some() {
        case = case.residual(violation);
    }
    Ok(Run {
        command: "minent".into(),
        params: params(&[("channel", kind_json(&kind)), ("restarts", json!(restarts))]),
        tolerance: ctx.tol(1e-6),
        cases: vec![case],
    })
}

fn parse_kind(s: &str, flag: &str) -> Res<ChannelKind> {
    serde_json::from_str(s).map_err(|e| usage(format!("--{flag}: {e}")))
}

fn additivity(a: &str, b: &str, restarts: usize, ctx: &Ctx) -> Res<Run> {
    let (ka, kb) = (parse_kind(a, "a")?, parse_kind(b, "b")?);
    let ca: StandardChannel<f64> = make_standard_channel(ka.clone())?;
    let cb: StandardChannel<f64> = make_standard_channel(kb.clone())?;
    let r = additivity_gap(&ca, &cb, restarts, ctx.seed)?;
    let case = Case::new(
        0,
        json!({ "a": kind_json(&ka), "b": kind_json(&kb), "restarts": restarts, "seed": ctx.seed }),
        json!({
            "gap": ctx.s(r.gap),
            "a": minent_outputs(&r.a, ctx),
            "b": minent_outputs(&r.b, ctx),
            "product": minent_outputs(&r.product, ctx),
        }),
        r.gap.abs(),
    )
    .margin(ctx.s(-r.gap));
    Ok(Run {
        command: "additivity".into(),
        params: params(&[("a", kind_json(&ka)), ("b", kind_json(&kb)), ("restarts", json!(restarts))]),
        tolerance: ctx.tol(1e-4),
        cases: vec![case],
    })
}
