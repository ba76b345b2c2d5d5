use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QError {
    #[error("deformation parameter must be a finite positive real, got {0}")]
    InvalidDeformation(f64),

    #[error("{what}: argument {value} is below the allowed minimum {min}")]
    Domain {
        what: &'static str,
        value: i64,
        min: i64,
    },

    #[error("base exponent must be 1 or 2, got {0}")]
    InvalidBase(u32),

    #[error("invalid quantum numbers l={l}, m={m}: {reason}")]
    InvalidQuantumNumbers {
        l: i64,
        m: i64,
        reason: &'static str,
    },

    #[error("evaluation point x0={0} lies outside (-1, 1)")]
    OutsideInterval(f64),

    #[error("operator dimension mismatch: lmax {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("winding mismatch: {left} vs {right}")]
    WindingMismatch { left: i32, right: i32 },

    #[error("quadrature depth must be positive")]
    EmptyQuadrature,

    #[error("hypergeometric series with a={a}, b={b} does not terminate")]
    NonTerminating { a: f64, b: f64 },

    #[error("hypergeometric lower parameter c={0} hits a pole of the series")]
    HypergeometricPole(f64),

    #[error("invalid radial problem: {0}")]
    InvalidProblem(String),

    #[error(
        "radial solver did not converge for state n={n}: coarse {coarse}, fine {fine}, Richardson estimate {estimate}"
    )]
    NotConverged {
        n: usize,
        coarse: f64,
        fine: f64,
        estimate: f64,
    },

    #[error("serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, QError>;
