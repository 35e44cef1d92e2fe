use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error(
        "magnetic field sits on the Feshbach resonance (B = B0 = {b0}); scattering length diverges"
    )]
    Resonance { b0: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("width solver did not converge after {iterations} iterations (last width {last})")]
    ConvergenceFailure { iterations: usize, last: f64 },

    #[error(
        "width {width} is below the critical width {critical}; sound speed would be imaginary"
    )]
    SubcriticalWidth { width: f64, critical: f64 },

    #[error("operation requires {expected} geometry")]
    WrongGeometry { expected: &'static str },

    #[error("at n_eq = {n_eq}: {source}")]
    AtDensity {
        n_eq: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("non-positive density {value} at grid point {index}")]
    DensityFloorViolation { index: usize, value: f64 },

    #[error("time step {dt} exceeds the stability cap {cap}")]
    CflViolation { dt: f64, cap: f64 },

    #[error("wave number {k} is not commensurate with box length {length}")]
    Incommensurate { k: f64, length: f64 },

    #[error("simulation became unstable at t = {time}: {reason}")]
    Instability { time: f64, reason: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid fit window: {0}")]
    InvalidWindow(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }

    /// Strips any [`Error::AtDensity`] wrappers.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::AtDensity { source, .. } => source.root_cause(),
            other => other,
        }
    }
}
