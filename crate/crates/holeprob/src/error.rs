use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("no sign change of {what} on [{lo:e}, {hi:e}]")]
    BracketFailure { what: &'static str, lo: f64, hi: f64 },

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("balayage mass {nu:.12e} does not match restricted equilibrium mass {mu:.12e}")]
    MassMismatch { nu: f64, mu: f64 },

    #[error("Fredholm partial sums do not alternate by order {order} (region too large)")]
    NonBracketing { order: usize },

    #[error("decay fit needs at least {need} increasing grid points, got {got}")]
    InsufficientGrid { need: usize, got: usize },

    #[error("Gamma argument {0} is beyond the safe range for the Gram normalisation")]
    IndexOverflow(f64),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn no_conv(what: &'static str, detail: impl Into<String>) -> Self {
        Error::NonConvergence {
            what,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
