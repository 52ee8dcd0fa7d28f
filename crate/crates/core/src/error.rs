use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e} after {subdivisions} subdivisions")]
    Quadrature {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },
    #[error("integral diverges: integrand grows like t^{growth} against density decay t^-{decay}")]
    Divergent { growth: f64, decay: f64 },
    #[error("tabulated measure needs a declared {0} classification")]
    ClassificationRequired(&'static str),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("E = {energy} lies outside the resolvent domain (-inf, {threshold})")]
    Domain { energy: f64, threshold: f64 },
    #[error("E = {energy} is within the boundary guard of M = {threshold}; use the boundary moment instead")]
    NearBoundary { energy: f64, threshold: f64 },
    #[error("coupling b must be nonzero")]
    InvalidCoupling,
    #[error("degenerate coupling: {0}")]
    DegenerateCoupling(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("{0}")]
    Io(String),
    #[error("result not representable in f64: {0}")]
    Unrepresentable(String),
    #[error("root finder did not converge: {0}")]
    NonConvergence(String),
}

impl Error {
    /// Input problems, as opposed to numerical failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidMeasure(_)
                | Error::InvalidParameter(_)
                | Error::InvalidCoupling
                | Error::InvalidSpec(_)
                | Error::ClassificationRequired(_)
                | Error::DegenerateCoupling(_)
        )
    }
}

/// Whether a failure is the input's fault or the numerics'.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    Validation,
    Numeric,
}

/// Per-row error annotation kept in reports.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ErrorNote {
    pub class: ErrorClass,
    pub message: String,
}

impl From<&Error> for ErrorNote {
    fn from(e: &Error) -> Self {
        Self {
            class: if e.is_validation() {
                ErrorClass::Validation
            } else {
                ErrorClass::Numeric
            },
            message: e.to_string(),
        }
    }
}

impl From<Error> for ErrorNote {
    fn from(e: Error) -> Self {
        Self::from(&e)
    }
}

impl std::fmt::Display for ErrorNote {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}
