use thiserror::Error;

/// Which of the two-mode Gaussian validity conditions failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TmegViolation {
    ReANotPositive,
    ReCNotPositive,
    NotPositiveDefinite,
    Separable,
    DegenerateA,
}

impl std::fmt::Display for TmegViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let msg = match self {
            TmegViolation::ReANotPositive => "Re[a] must be positive",
            TmegViolation::ReCNotPositive => "Re[c] must be positive",
            TmegViolation::NotPositiveDefinite => "Re[a]Re[c] - Re[b]^2 must be positive",
            TmegViolation::Separable => "b = 0 describes a separable state",
            TmegViolation::DegenerateA => "a = 1 makes the (z, R) map degenerate",
        };
        f.write_str(msg)
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("{0}")]
    Tmeg(TmegViolation),
    #[error("invalid output parameters: {0}")]
    OutputParams(String),
    #[error("degree {n} exceeds the supported maximum {max}")]
    Size { n: usize, max: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no valid two-mode Gaussian realizes these parameters: {0}")]
    OutOfDomain(String),
    #[error("heralding probability for n = {n} underflows ({p:e})")]
    Underflow { n: usize, p: f64 },
    #[error("Fock truncation at dim {dim} leaks {leakage:e}; try dim >= {suggested}")]
    Truncation { dim: usize, leakage: f64, suggested: usize },
    #[error("quadrature did not reach tolerance {tol:e}; best estimate {estimate}")]
    Accuracy { estimate: f64, tol: f64 },
    #[error("grid resolution insufficient: {0}")]
    Resolution(String),
    #[error("sample grids differ")]
    GridMismatch,
    #[error("state has nonzero mean position {0:e}")]
    NonzeroMean(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
