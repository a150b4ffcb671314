use thiserror::Error;

/// Errors reported by the numeric kernels and the sieve layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("{op} failed to converge: {msg}")]
    Convergence { op: &'static str, msg: String },

    #[error("requested derivative order {requested} exceeds solution depth {depth}")]
    DepthExceeded { requested: usize, depth: usize },

    #[error("argument out of range in {op}: {msg}")]
    Range { op: &'static str, msg: String },

    #[error("sieve limit {limit} exceeds the supported maximum {max}")]
    MemoryLimit { limit: u64, max: u64 },

    #[error("{op} requires an integer class exponent, got kappa = {kappa}")]
    NonIntegerKappa { op: &'static str, kappa: f64 },

    #[error("singular argument in {op}: {msg}")]
    Singularity { op: &'static str, msg: String },

    #[error("overflow guard tripped in {op}: {msg}")]
    Overflow { op: &'static str, msg: String },

    #[error("Euler product does not converge for {name}: {msg}")]
    EulerProduct { name: String, msg: String },

    #[error("sieve cache i/o: {0}")]
    CacheIo(#[from] std::io::Error),

    #[error("sieve cache rejected: {0}")]
    CacheFormat(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }
    pub(crate) fn range(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Range { op, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
