use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A query reached outside the disc on which the truncated variety is complete.
    #[error("query radius {radius} exceeds trusted radius {trusted}")]
    Truncation { radius: f64, trusted: f64 },

    #[error("node {index} coincides with an earlier node (Pi vanishes there)")]
    DuplicateNode { index: usize },

    #[error("derivative of order {needed} requested but the oracle supports at most {max}")]
    Order { needed: u32, max: u32 },

    #[error("confluent Vandermonde system is ill-conditioned (relative residual {residual:e})")]
    IllConditioned { residual: f64 },

    #[error("quadrature node {node} lies within {tol:e} of a zero")]
    SingularQuadrature { node: usize, tol: f64 },

    #[error("no alpha up to {cap} makes the discrete Laplacian admissible (min {min_laplacian:e} at {worst_re}+{worst_im}i)")]
    NoAlphaFound {
        cap: f64,
        min_laplacian: f64,
        worst_re: f64,
        worst_im: f64,
    },

    #[error("no usable samples for {0}")]
    NoSamples(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
