use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An integrand sample was NaN or infinite.
    #[error("integrand is not finite at x = {x:e}{}", subinterval_suffix(*.subinterval))]
    NonFiniteIntegrand { x: f64, subinterval: Option<usize> },

    #[error("tau = {tau:e} lies outside the oscillator range [{lo:e}, {hi:e}]")]
    OutOfRange { tau: f64, lo: f64, hi: f64 },

    #[error("oscillator declaration is inconsistent: {0}")]
    OscillatorDeclaration(String),

    #[error("stationary point classification failed: {0}")]
    Classification(String),

    #[error("{0} is outside the supported range")]
    UnsupportedRange(String),

    #[error("reference oracle failed: {0}")]
    OracleFailure(String),

    /// Wraps an error raised while integrating one piece of a split interval.
    #[error("piece {index} on [{a}, {b}]: {source}")]
    Piece {
        index: usize,
        a: f64,
        b: f64,
        #[source]
        source: Box<Error>,
    },
}

fn subinterval_suffix(sub: Option<usize>) -> String {
    match sub {
        Some(j) => format!(" (subinterval {j})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn in_piece(self, index: usize, a: f64, b: f64) -> Self {
        Error::Piece {
            index,
            a,
            b,
            source: Box::new(self),
        }
    }

    pub(crate) fn with_subinterval(self, j: usize) -> Self {
        match self {
            Error::NonFiniteIntegrand { x, .. } => Error::NonFiniteIntegrand {
                x,
                subinterval: Some(j),
            },
            other => other,
        }
    }
}
