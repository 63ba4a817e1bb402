use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value lies outside the domain where a formula is defined.
    #[error("{what} = {value:e} is outside the domain: {reason}")]
    Domain {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A parameter violates an invariant of its type. `field` is the leaf
    /// name used by configuration files.
    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("no sign change of the resonance function on [{lo:e}, {hi:e}] T")]
    NoBracket { lo: f64, hi: f64 },

    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// The electric field pushed the effective strip thickness to zero or
    /// below.
    #[error("effective thickness {effective:e} m is not positive (thickness {thickness:e} m)")]
    PastBandEdge { thickness: f64, effective: f64 },

    #[error("k = 0 rotating-term coefficient vanishes; coherence profile undefined")]
    ZeroEta0,

    #[error("bath correlation never stays below 1/e within the sampled window of {window:e} s")]
    NoDecay { window: f64 },

    #[error("state at t = {time:e} s has eigenvalue {min_eigenvalue:e} below the positivity slack")]
    Positivity { time: f64, min_eigenvalue: f64 },

    #[error("steady state is not unique (kernel dimension {dimension}); an initial state is required")]
    DegenerateKernel { dimension: usize },

    #[error("trajectory is not steady: spread {spread:e} over the final samples")]
    NotSteady { spread: f64 },

    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
