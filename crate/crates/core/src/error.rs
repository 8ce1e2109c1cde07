use std::path::PathBuf;

use thiserror::Error;

use crate::hauptmodul::Group;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced anywhere in the pipeline.
///
/// Variants split into two families: domain/parse errors (bad input, missing
/// data, unsupported level) and numeric errors (the evaluation did not reach
/// the requested accuracy). [`Error::is_numeric`] separates them; the CLI maps
/// them to exit codes 1 and 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("element is not invertible modulo the given polynomial")]
    NonInvertible,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("level {level} is not genus zero for {group}")]
    NotGenusZero { level: u64, group: Group },

    #[error("representative search for class {class} exceeded C = {bound}")]
    SearchFailure { class: String, bound: u64 },

    #[error("q-series parse error: {0}")]
    QSeriesParse(#[from] QSeriesParseError),

    #[error("q-series data file {path} not found")]
    MissingData { path: PathBuf },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(
        "q-series coefficients exhausted: |q| = {q_abs:.6}, have {available}, need about {needed}"
    )]
    InsufficientData {
        q_abs: f64,
        available: usize,
        needed: usize,
    },

    #[error("coefficients are not within tolerance of integers (residual {residual})")]
    RoundingFailure { residual: String },

    #[error("root finder did not converge after {iterations} iterations")]
    Convergence { iterations: usize },

    #[error("precision escalation failed up to {max_bits} bits: {reason}")]
    Escalation { max_bits: u32, reason: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of numerical accuracy rather than of input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::InsufficientData { .. }
                | Error::RoundingFailure { .. }
                | Error::Convergence { .. }
                | Error::Escalation { .. }
        )
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QSeriesParseError {
    #[error("missing header line")]
    MissingHeader,
    #[error("header is missing field `{0}`")]
    MissingField(&'static str),
    #[error("header field `{field}` has invalid value `{value}`")]
    BadField { field: &'static str, value: String },
    #[error("q_min must be -1, found {0}")]
    QMin(i64),
    #[error("line {line}: `{text}` is not an integer")]
    BadCoefficient { line: usize, text: String },
    #[error("leading coefficient of q^-1 must be nonzero")]
    ZeroLeading,
    #[error("only {found} coefficients, at least {required} required")]
    TooFewCoefficients { found: usize, required: usize },
}
