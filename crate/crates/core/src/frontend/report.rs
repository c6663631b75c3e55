//! Versioned, deterministic reports and their JSON, text and CSV renderings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::deformation::{
    ActionCoefficients, AssociativityCounterexample, CheckBounds, LinearityCounterexample,
    NormalForm, Obstruction,
};
use crate::error::Error;
use crate::modtools::{DegreeRow, ReductionCertificate};
use crate::scalar_poly::scalar_string;

pub const SCHEMA: &str = "formlin/1";

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Envelope {
    pub schema: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub result: Option<Report>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<ErrorReport>,
}

impl Envelope {
    pub fn success(command: &str, n: Option<usize>, result: Report) -> Self {
        Envelope {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            n,
            result: Some(result),
            error: None,
        }
    }

    pub fn failure(command: &str, error: ErrorReport) -> Self {
        Envelope {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            n: None,
            result: None,
            error: Some(error),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        ErrorReport {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Report {
    Parse(ParseReport),
    Apply(ApplyReport),
    Decompose(DecomposeReport),
    Linearize(LinearizeReport),
    CheckLinearity(LinearityReport),
    CheckAssociativity(AssociativityReport),
    Hilbert(TableReport),
    Generators(TableReport),
    Reduce(ReduceReport),
    Complex(ComplexReport),
    Phi(PhiReport),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ParseReport {
    pub kind: String,
    pub canonical: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<i64>,
    pub weight: i64,
    pub terms: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ApplyReport {
    pub operator: String,
    pub bidegree: [i64; 2],
    pub input: String,
    pub output: String,
    pub output_bidegree: [i64; 2],
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BracketWitness {
    pub mu: String,
    pub tau: String,
    pub residual: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub operator: String,
    pub bidegree: [i64; 2],
    pub probe: [i64; 2],
    pub order_one: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pairs_checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<BracketWitness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mu: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reconstruction_agrees: Option<bool>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CoefficientReport {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<String>,
    pub thresholds: Vec<i64>,
}

impl From<&ActionCoefficients> for CoefficientReport {
    fn from(c: &ActionCoefficients) -> Self {
        let (alpha, beta) = match c.formulas() {
            Some((a, b)) => (Some(a), Some(b)),
            None => (None, None),
        };
        CoefficientReport {
            label: c.label(),
            alpha,
            beta,
            thresholds: c.algebra().thresholds().to_vec(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct NormalFormReport {
    pub omega1: String,
    pub omega2: String,
    pub mu: String,
    pub t1: String,
    pub t2: String,
}

impl From<&NormalForm> for NormalFormReport {
    fn from(nf: &NormalForm) -> Self {
        NormalFormReport {
            omega1: nf.omega1.render(),
            omega2: nf.omega2.render(),
            mu: nf.mu.render(),
            t1: scalar_string(&nf.t1),
            t2: scalar_string(&nf.t2),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub omega1_exact: String,
    pub omega2_residue: String,
    pub mu_residue: String,
    pub t1: String,
    pub t1_required: String,
}

impl From<&Obstruction> for ObstructionReport {
    fn from(o: &Obstruction) -> Self {
        ObstructionReport {
            omega1_exact: o.omega1_exact.render(),
            omega2_residue: o.omega2_residue.render(),
            mu_residue: o.mu_residue.render(),
            t1: scalar_string(&o.t1),
            t1_required: scalar_string(&o.t1_required),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LinearityWitness {
    pub f: String,
    pub tau: String,
    pub residual: String,
}

impl From<&LinearityCounterexample> for LinearityWitness {
    fn from(c: &LinearityCounterexample) -> Self {
        LinearityWitness {
            f: c.f.render(),
            tau: c.tau.render(),
            residual: c.residual.render(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AssociativityWitness {
    pub g: String,
    pub f: String,
    pub tau: String,
    pub residual: String,
}

impl From<&AssociativityCounterexample> for AssociativityWitness {
    fn from(c: &AssociativityCounterexample) -> Self {
        AssociativityWitness {
            g: c.g.render(),
            f: c.f.render(),
            tau: c.tau.render(),
            residual: c.residual.render(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BoundsReport {
    pub max_c: i64,
    pub max_r: i64,
    pub max_b: i64,
}

impl From<CheckBounds> for BoundsReport {
    fn from(b: CheckBounds) -> Self {
        BoundsReport {
            max_c: b.c_max,
            max_r: b.r_max,
            max_b: b.b_max,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LinearizeReport {
    pub operator: String,
    pub q: i64,
    pub a: i64,
    pub linearizable: bool,
    pub coefficients: CoefficientReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub normal_form: Option<NormalFormReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub obstruction: Option<ObstructionReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<LinearityWitness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub search: Option<BoundsReport>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SampleReport {
    pub seed: u64,
    pub count: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LinearityReport {
    pub operator: String,
    pub coefficients: CoefficientReport,
    pub bounds: BoundsReport,
    pub passed: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<SampleReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<LinearityWitness>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AssociativityReport {
    pub coefficients: CoefficientReport,
    pub bounds: BoundsReport,
    pub passed: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<SampleReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<AssociativityWitness>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RowReport {
    pub r: i64,
    pub b: i64,
    pub dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kernel: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generators: Option<usize>,
    pub out_of_domain: bool,
}

impl From<&DegreeRow> for RowReport {
    fn from(row: &DegreeRow) -> Self {
        RowReport {
            r: row.r,
            b: row.b,
            dimension: row.dimension,
            rank: row.rank,
            kernel: row.kernel,
            generators: row.generators,
            out_of_domain: row.out_of_domain,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TableReport {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub operator: Option<String>,
    pub space: String,
    pub r: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coefficients: Option<CoefficientReport>,
    pub rows: Vec<RowReport>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StepReport {
    pub coefficient: String,
    pub variable: String,
    pub source: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CertificateReport {
    pub target: String,
    pub generator: bool,
    pub steps: Vec<StepReport>,
    pub residual: String,
    pub replay_residual: String,
}

impl CertificateReport {
    pub fn new(cert: &ReductionCertificate, replay_residual: String) -> Self {
        CertificateReport {
            target: cert.target.render(),
            generator: cert.generator,
            steps: cert
                .steps
                .iter()
                .map(|s| StepReport {
                    coefficient: scalar_string(&s.coefficient),
                    variable: format!("x{}", s.variable + 1),
                    source: s.source.render(),
                })
                .collect(),
            residual: cert.residual.render(),
            replay_residual,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GenerationReport {
    pub r: i64,
    pub depth: i64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub targets: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failed_target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReduceReport {
    pub coefficients: CoefficientReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<CertificateReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generation: Option<GenerationReport>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SliceReport {
    pub weight: i64,
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub squares_zero: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComplexReport {
    pub omega: String,
    pub e: i64,
    pub coefficients: CoefficientReport,
    pub squares_zero: bool,
    pub linear: bool,
    pub max_c: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<LinearityWitness>,
    pub slices: Vec<SliceReport>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PhiRowReport {
    pub weight: i64,
    pub dimension: usize,
    pub phi: usize,
    pub incoming_rank: usize,
    pub homology: usize,
    pub regular: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PhiReport {
    pub omega: String,
    pub e: i64,
    pub rows: Vec<PhiRowReport>,
}

/// Renders an envelope; every format ends with a newline.
pub fn render(envelope: &Envelope, format: Format) -> String {
    let value = serde_json::to_value(envelope).expect("reports serialize");
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut lines = Vec::new();
            flatten("", &value, &mut lines);
            lines
                .into_iter()
                .map(|(k, v)| format!("{k} = {v}\n"))
                .collect()
        }
        Format::Csv => csv(&value),
    }
}

fn leaf(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, child, out);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), child, out);
            }
        }
        other => out.push((prefix.to_string(), leaf(other))),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Tables become one CSV row per entry; anything else becomes `key,value` pairs.
fn csv(value: &Value) -> String {
    let rows = value
        .pointer("/result/rows")
        .or_else(|| value.pointer("/result/slices"))
        .and_then(Value::as_array);
    if let Some(rows) = rows.filter(|r| !r.is_empty()) {
        let mut columns: Vec<String> = Vec::new();
        for row in rows {
            if let Value::Object(m) = row {
                for k in m.keys() {
                    if !columns.contains(k) {
                        columns.push(k.clone());
                    }
                }
            }
        }
        let mut out = columns
            .iter()
            .map(|c| csv_field(c))
            .collect::<Vec<_>>()
            .join(",");
        out.push('\n');
        for row in rows {
            let line = columns
                .iter()
                .map(|c| {
                    let cell = match row.get(c) {
                        Some(Value::Array(items)) => {
                            items.iter().map(leaf).collect::<Vec<_>>().join(" ")
                        }
                        Some(v) => leaf(v),
                        None => String::new(),
                    };
                    csv_field(&cell)
                })
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&line);
            out.push('\n');
        }
        return out;
    }
    let mut pairs = Vec::new();
    flatten("", value, &mut pairs);
    let mut out = String::from("key,value\n");
    for (k, v) in pairs {
        out.push_str(&format!("{},{}\n", csv_field(&k), csv_field(&v)));
    }
    out
}
