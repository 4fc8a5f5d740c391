use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero input: {0}")]
    ZeroInput(&'static str),

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("constant map has degree 0")]
    ConstantMap,

    #[error("numerator and denominator are not coprime")]
    NotCoprime,

    #[error("singular Möbius transformation")]
    SingularMobius,

    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("degree {0} too small for this operation")]
    DegreeTooSmall(usize),

    #[error("path tracking lost at {digits} digits: {reason}")]
    TrackingLost { digits: u32, reason: String },

    #[error("root isolation failed: {0}")]
    PrecisionExhausted(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable short name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroInput(_) => "zero-input",
            Error::DegreeMismatch(..) => "degree-mismatch",
            Error::NotPrime(_) => "not-prime",
            Error::Parse { .. } => "parse",
            Error::ConstantMap => "constant-map",
            Error::NotCoprime => "not-coprime",
            Error::SingularMobius => "singular-mobius",
            Error::DegreeCap { .. } => "degree-cap",
            Error::DegreeTooSmall(_) => "degree-too-small",
            Error::TrackingLost { .. } => "tracking-lost",
            Error::PrecisionExhausted(_) => "precision-exhausted",
            Error::Precondition(_) => "precondition",
            Error::Consistency(_) => "consistency",
        }
    }

    /// True for errors caused by a resource limit rather than by the input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::DegreeCap { .. } | Error::TrackingLost { .. } | Error::PrecisionExhausted(_))
    }
}
