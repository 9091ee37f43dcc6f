use thiserror::Error;

/// Everything that can go wrong in the library, grouped so the CLI can map
/// each failure onto an exit category.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{function}(nu={nu}, x={x}) outside supported range: {reason}")]
    Range {
        function: &'static str,
        nu: f64,
        x: f64,
        reason: &'static str,
    },

    #[error("step size underflow at r={r:.6e} (equation too stiff for the integrator)")]
    Stiffness { r: f64 },

    #[error("integration exceeded {steps} steps before reaching r={r:.6e}")]
    TooManySteps { steps: usize, r: f64 },

    #[error("degenerate kernel coupling: |det(I - mu M)| = {det:.3e} below threshold; perturb the energy")]
    DegenerateCoupling { det: f64 },

    #[error("solution has a node at the cutoff (|y(r0)| = {y0:.3e}); logarithmic derivative undefined")]
    NodeAtCutoff { y0: f64 },

    #[error("log-derivative {a:.6e} within tolerance of the threshold value {rho:.6e} (near-threshold resonance)")]
    NearThresholdResonance { a: f64, rho: f64 },

    #[error("A(0, mu) grazes the threshold at mu={mu:.6e} without changing sign")]
    AmbiguousCrossing { mu: f64 },

    #[error("energy scan too coarse: {0}")]
    ScanTooCoarse(String),

    #[error("branch change between E-dE and E+dE (node crossed r0)")]
    BranchChange,

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

/// Coarse failure class, used for exit codes and the CLI error trailer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Numeric,
    Inconclusive,
}

impl ErrorCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCategory::Config => "config",
            ErrorCategory::Numeric => "numeric",
            ErrorCategory::Inconclusive => "inconclusive",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCategory::Config => 2,
            ErrorCategory::Numeric => 3,
            ErrorCategory::Inconclusive => 4,
        }
    }
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Config(_) | Error::InvalidInput(_) | Error::Io(_) => ErrorCategory::Config,
            Error::AmbiguousCrossing { .. }
            | Error::NearThresholdResonance { .. }
            | Error::ScanTooCoarse(_)
            | Error::Inconclusive(_) => ErrorCategory::Inconclusive,
            _ => ErrorCategory::Numeric,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
