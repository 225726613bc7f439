mod args;
mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{CommandFactory, Parser};

use args::Cli;
use commands::{Ctx, Failure};
use report::{ErrorRecord, RunReport};

const EXIT_FAIL: u8 = 1;
const EXIT_PRECONDITION: u8 = 3;

fn error_kind(e: &weylcov::Error) -> &'static str {
    use weylcov::Error::*;
    match e {
        Dimension(_) => "dimension",
        NotHermitian(_) => "not_hermitian",
        InvalidTrace(_) => "invalid_trace",
        NotPositive(_) => "not_positive",
        NonFinite => "non_finite",
        NonPrime(_) => "non_prime",
        OutOfRange { .. } => "out_of_range",
        Distribution(_) => "distribution",
        Hypothesis(_) => "hypothesis",
        Shape(_) => "shape",
        Unsupported(_) => "unsupported",
        Contract(_) => "contract",
    }
}

fn command_name(cmd: &args::Command) -> String {
    use args::{Bound, Command, Decompose};
    match cmd {
        Command::Mub { .. } => "mub".into(),
        Command::Weyl { .. } => "weyl".into(),
        Command::Covariance { .. } => "covariance".into(),
        Command::Decompose { which: Decompose::Prop7 { .. } } => "decompose prop7".into(),
        Command::Decompose { which: Decompose::TwoPauli { .. } } => "decompose two-pauli".into(),
        Command::Bound { which: Bound::T1(_) } => "bound t1".into(),
        Command::Bound { which: Bound::T2 { .. } } => "bound t2".into(),
        Command::Bound { which: Bound::T3 { .. } } => "bound t3".into(),
        Command::Trace(_) => "trace".into(),
        Command::Dpi { .. } => "dpi".into(),
        Command::Minent { .. } => "minent".into(),
        Command::Additivity { .. } => "additivity".into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        seed: cli.seed,
        tol: cli.tol,
        unit: if cli.bits { 1.0 / std::f64::consts::LN_2 } else { 1.0 },
    };
    let start = Instant::now();
    let outcome = commands::run(&cli.command, &ctx);
    let mut report = RunReport {
        command: command_name(&cli.command),
        params: Default::default(),
        seed: cli.seed,
        cases: Vec::new(),
        pass: false,
        max_violation: 0.0,
        tolerance: cli.tol.unwrap_or(0.0),
        unit: if cli.bits { "bits" } else { "nats" }.into(),
        error: None,
        runtime_ms: 0,
        version: env!("CARGO_PKG_VERSION").into(),
    };
    let code = match outcome {
        Ok(run) => {
            report.max_violation = run.cases.iter().map(|c| c.violation).fold(0.0, f64::max);
            report.pass = report.max_violation <= run.tolerance;
            report.command = run.command;
            report.params = run.params;
            report.tolerance = run.tolerance;
            report.cases = run.cases;
            if !report.pass {
                eprintln!(
                    "verification failed: max violation {:e} above tolerance {:e}",
                    report.max_violation, report.tolerance
                );
            }
            if report.pass { 0 } else { EXIT_FAIL }
        }
        Err(Failure::Usage(msg)) => {
            Cli::command().error(clap::error::ErrorKind::ValueValidation, msg).exit();
        }
        Err(Failure::Precondition(e)) => {
            eprintln!("error: {e}");
            report.error = Some(ErrorRecord {
                kind: error_kind(&e).into(),
                message: e.to_string(),
            });
            EXIT_PRECONDITION
        }
    };
    report.runtime_ms = start.elapsed().as_millis() as u64;
    println!("{}", report::to_json(&report));
    ExitCode::from(code)
}
