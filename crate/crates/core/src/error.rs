use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex limit exceeded: {requested} vertices (maximum {limit})")]
    VertexLimitExceeded { requested: usize, limit: usize },

    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("construction K{k} v bK1 is not integral for m = {m}")]
    Divisibility { k: usize, m: usize },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),

    #[error("malformed graph6: {0}")]
    MalformedGraph6(String),

    #[error("graph6 size tier unsupported for n = {0}")]
    SizeUnsupported(usize),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid rotation: {0}")]
    InvalidRotation(String),

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    /// A checked inequality failed. `counterexample` is a graph6 string when a graph is involved.
    #[error("bound violation at m = {m}: {detail} (counterexample {counterexample})")]
    BoundViolation {
        m: usize,
        counterexample: String,
        detail: String,
    },
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }

    /// True for errors that mean "the mathematics was contradicted" rather than bad input.
    pub fn is_violation(&self) -> bool {
        matches!(self, Error::BoundViolation { .. })
    }
}
