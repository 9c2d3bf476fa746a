use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("system of {sites} sites exceeds the solver ceiling of {ceiling}")]
    Capacity { sites: usize, ceiling: usize },

    #[error(
        "eigensolver did not converge after {iterations} iterations (best residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error(
        "mean-field iteration did not converge after {iterations} iterations (last step {step:e})"
    )]
    MeanFieldNoConvergence { iterations: usize, step: f64 },

    #[error("node index {index} out of range for {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("a pair needs two distinct nodes, got ({0}, {0})")]
    SameNode(usize),

    #[error("invalid density matrix: eigenvalue {0:e} is negative beyond tolerance")]
    NotPositive(f64),

    #[error("reduced density matrices are inconsistent (partial-trace gap {0:e})")]
    PartialTraceMismatch(f64),

    #[error("mutual information {0} outside [0, 1]")]
    MutualInformationRange(f64),

    #[error("moments of an empty sample")]
    EmptySample,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("missing h=0 baseline for {0}")]
    MissingBaseline(String),

    #[error("lambda grids differ: {0}")]
    GridMismatch(String),

    #[error("{failed} of {total} solves failed, above the quota of {quota}")]
    FailureQuota {
        failed: usize,
        total: usize,
        quota: f64,
    },

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Csv(format!("{other:?}")),
        }
    }
}
