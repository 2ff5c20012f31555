use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("coincident centroids for regions '{a}' and '{b}' (distance 0)")]
    CoincidentCentroids { a: String, b: String },

    #[error("conflicting SCI values for pair ('{a}', '{b}'): {first} vs {second}")]
    ConflictingEdge {
        a: String,
        b: String,
        first: f64,
        second: f64,
    },

    #[error("unknown region id '{0}'")]
    UnknownRegion(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("record {record}: malformed ICD code '{code}'")]
    MalformedCode { record: u64, code: String },

    #[error("zero variance: {0}")]
    ZeroVariance(String),

    #[error("rank-deficient design; collinear columns: {}", .columns.join(", "))]
    Collinear { columns: Vec<String> },

    #[error("too few observations: n = {n}, k = {k}")]
    TooFewObservations { n: usize, k: usize },

    #[error("cluster-robust covariance needs at least two clusters, found {0}")]
    SingleCluster(usize),

    #[error("model not identified: {0}")]
    Identification(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("likelihood ratio statistic is negative ({0}); upstream optimizer failure")]
    NegativeLrStat(f64),

    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
