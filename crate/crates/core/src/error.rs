use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("polynomial has no roots (degree zero)")]
    DegreeZero,

    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("leading coefficient {lead} is not 1")]
    NonMonic { lead: Complex64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{stage}: root solver did not converge at w = {w} (best residual {residual:.3e})")]
    NoConvergence {
        stage: &'static str,
        w: Complex64,
        residual: f64,
    },

    #[error("continuation failed at theta = {theta:.12}: {reason}")]
    Continuation { theta: f64, reason: String },

    #[error("quadrature budget exhausted; worst panel [{a:.6e}, {b:.6e}] with error {error:.3e}")]
    Quadrature { a: f64, b: f64, error: f64 },
}

impl Error {
    /// True for failures of a numerical stage (as opposed to rejected input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::Continuation { .. } | Error::Quadrature { .. }
        )
    }

    /// Short name of the stage that failed, used in machine-readable reports.
    pub fn stage(&self) -> &'static str {
        match self {
            Error::DegreeZero | Error::DegreeTooLarge { .. } | Error::NonMonic { .. } => "input",
            Error::NonFinite(_) | Error::InvalidInput(_) => "input",
            Error::NoConvergence { stage, .. } => stage,
            Error::Continuation { .. } => "trace",
            Error::Quadrature { .. } => "quadrature",
        }
    }
}
