use thiserror::Error;

/// Errors raised by the surface construction and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Pauli index must be 1, 2 or 3 (got {0})")]
    PauliIndex(usize),

    #[error("matrix is not su(2)-valued (trace/anti-Hermitian defect {defect:.3e})")]
    NotSu2 { defect: f64 },

    #[error("soliton parameter k1 must be nonzero and finite")]
    InvalidK1,

    #[error("parameter {name} must be finite (got {value})")]
    NonFinite { name: &'static str, value: f64 },

    #[error("degenerate Phi constants: A1*B2 - A2*B1 = 0")]
    DegenerateConstants,

    #[error("Phi is singular at (x, t) = ({x}, {t})")]
    SingularPhi { x: f64, t: f64 },

    #[error("degenerate deformation frame: {0}")]
    DegenerateFrame(&'static str),

    #[error("singular point at (x, t) = ({x}, {t}): {reason}")]
    SingularPoint { x: f64, t: f64, reason: &'static str },

    #[error("first fundamental form is not positive definite (det g = {det:.3e})")]
    SingularMetric { det: f64 },

    #[error("second fundamental form is degenerate (det h = {det:.3e})")]
    SingularSecondForm { det: f64 },

    #[error("curvature formula has a vanishing denominator ({0})")]
    VanishingDenominator(&'static str),

    #[error("degenerate parametrization: |y_x x y_t| = {0:.3e}")]
    DegenerateParametrization(f64),

    #[error("finite-difference step {0:e} is outside the accepted range")]
    StepOutOfRange(f64),

    #[error("finite-difference step {0:e} underflows (must be >= 1e-12)")]
    StepUnderflow(f64),

    #[error("u is too small to evaluate the second-order check (|u| = {0:.3e})")]
    VanishingWave(f64),

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid Lagrangian: {0}")]
    InvalidLagrangian(String),

    #[error("check '{check}' is not available for family {family}")]
    IncompatibleCheck { check: String, family: String },

    #[error("unknown check '{0}'")]
    UnknownCheck(String),

    #[error("mesh is empty")]
    EmptyMesh,

    #[error("I/O error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
