//! JSON bodies of the HTTP service and of `solve --json`. Every top-level
//! object carries `"version": "v1"`.

use polysolve::apollonius::{ApolloniusInput, JsonComplex};
use polysolve::error::Error;
use polysolve::numerics::Precision;
use polysolve::solver::{format_sci, Counts, SolveReport};
use polysolve::tracker::SolutionRecord;
use serde::{Deserialize, Serialize};

pub const VERSION: &str = "v1";

#[derive(Serialize)]
pub struct Versioned<T> {
    pub version: &'static str,
    #[serde(flatten)]
    pub body: T,
}

pub fn versioned<T>(body: T) -> Versioned<T> {
    Versioned { version: VERSION, body }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveRequest {
    /// System text in the `.sys` format.
    pub system: String,
    #[serde(default = "default_precision")]
    pub precision: Precision,
    #[serde(default = "default_tasks")]
    pub tasks: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub version: Option<String>,
}

fn default_precision() -> Precision {
    Precision::D
}

fn default_tasks() -> usize {
    1
}

#[derive(Clone, Debug, Deserialize)]
pub struct ApolloniusRequest {
    #[serde(flatten)]
    pub input: ApolloniusInput,
    #[serde(default)]
    pub session: Option<String>,
    #[serde(default)]
    pub version: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JsonSolution {
    /// One entry per variable, in the order of `varnames`.
    pub coordinates: Vec<JsonComplex>,
    /// Real and imaginary parts as decimal strings, present when the solve
    /// ran above double precision.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coordinates_text: Option<Vec<[String; 2]>>,
    pub t: f64,
    pub m: usize,
    pub err: f64,
    pub rco: f64,
    pub res: f64,
    pub is_real: bool,
    pub singular: bool,
}

impl JsonSolution {
    pub fn new(s: &SolutionRecord, precision: Precision) -> Self {
        let digits = match precision {
            Precision::D => None,
            Precision::DD => Some(32),
            Precision::QD => Some(64),
        };
        Self {
            coordinates: s.coords.iter().map(|&c| c.into()).collect(),
            coordinates_text: digits.map(|d| {
                s.coords.iter().map(|c| [format_sci(c.re, d).trim().to_string(), format_sci(c.im, d).trim().to_string()]).collect()
            }),
            t: s.t,
            m: s.m,
            err: s.err,
            rco: s.rco,
            res: s.res,
            is_real: s.is_real,
            singular: s.singular,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveResponse {
    pub varnames: Vec<String>,
    pub precision: Precision,
    pub tasks: usize,
    pub seed: u64,
    pub gamma: JsonComplex,
    pub counts: Counts,
    pub elapsed_seconds: f64,
    pub solutions: Vec<JsonSolution>,
}

impl SolveResponse {
    pub fn new(r: &SolveReport) -> Self {
        Self {
            varnames: r.varnames.clone(),
            precision: r.options.precision,
            tasks: r.options.tasks,
            seed: r.seed,
            gamma: r.gamma.into(),
            counts: r.counts,
            elapsed_seconds: r.elapsed_seconds,
            solutions: r.solutions.iter().map(|s| JsonSolution::new(s, r.options.precision)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorResponse {
    pub error: ErrorBody,
}

impl ErrorResponse {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        Self { error: ErrorBody { code: code.to_string(), message: message.into() } }
    }
}

impl From<&Error> for ErrorResponse {
    fn from(e: &Error) -> Self {
        Self::new(e.code(), e.to_string())
    }
}
