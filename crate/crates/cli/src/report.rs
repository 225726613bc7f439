//! Run report shared by every subcommand and its JSON encoding.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// One verified input with everything needed to replay it.
#[derive(Debug, Clone, Serialize)]
pub struct Case {
    pub index: usize,
    pub inputs: Value,
    /// First 16 hex digits of the SHA-256 of the compact `inputs` JSON.
    pub digest: String,
    pub outputs: Value,
    pub margin: Option<f64>,
    pub residual: Option<f64>,
    /// Amount by which this case misses its check; 0 when it passes.
    pub violation: f64,
    /// Full input state when the case is a counterexample.
    pub counterexample: Option<Value>,
}

impl Case {
    pub fn new(index: usize, inputs: Value, outputs: Value, violation: f64) -> Self {
        Self {
            index,
            digest: digest(&inputs),
            inputs,
            outputs,
            margin: None,
            residual: None,
            violation,
            counterexample: None,
        }
    }

    pub fn margin(mut self, m: f64) -> Self {
        self.margin = Some(m);
        self
    }

    pub fn residual(mut self, r: f64) -> Self {
        self.residual = Some(r);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
    pub cases: Vec<Case>,
    pub pass: bool,
    pub max_violation: f64,
    pub tolerance: f64,
    /// Unit of every entropy in `cases`; tolerances and violations stay in nats.
    pub unit: String,
    pub error: Option<ErrorRecord>,
    pub runtime_ms: u64,
    pub version: String,
}

fn digest(inputs: &Value) -> String {
    let bytes = serde_json::to_vec(inputs).expect("JSON values serialize");
    Sha256::digest(bytes).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Compact JSON with every float written to 17 significant digits.
struct Precise;

impl Formatter for Precise {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json(report: &RunReport) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, Precise);
    report.serialize(&mut ser).expect("report serializes");
    String::from_utf8(out).expect("JSON is UTF-8")
}
