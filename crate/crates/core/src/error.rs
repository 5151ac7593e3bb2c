use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Berlekamp-Welch could not find a consistent low-degree interpolant.
    #[error("decoding failed: {0}")]
    DecodeFailure(&'static str),

    #[error("rejection sampler gave up after {rounds} rounds")]
    SamplerExhausted { rounds: u64 },

    /// Binary expansion precondition `TV(S, uniform) < 1/p` is not met.
    #[error("expansion total variation {tv:.3e} is not below 1/{p}")]
    ExpansionTooShort { tv: f64, p: u64 },

    #[error("cutoff exceeded at level {level}: {size} sets reached cutoff {cutoff}")]
    CutoffExceeded {
        level: usize,
        size: usize,
        cutoff: f64,
    },

    #[error("no normal basis found for GF({p}^{degree})")]
    NoNormalBasis { p: u64, degree: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
