use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("radicand does not fit in a 64-bit float")]
    Overflow,
    #[error("axis is not a unit vector (norm {0})")]
    NonUnitAxis(f64),
    #[error("direction vectors are antiparallel; the bisecting axis is undetermined")]
    DegenerateAntiparallel,
    #[error("direction vectors are collinear; pass a seed axis to fix the frame orientation")]
    DegenerateCollinear,
    #[error("spin projection {m} is not valid for spin {s}")]
    InvalidSpinProjection { s: String, m: String },
    #[error("particle descriptions do not come from one frame pair")]
    FrameMismatch,
    #[error("states are not proportional (relative residual {0:e})")]
    NotProportional(f64),
    #[error("both particles must carry the same spin (got {0} and {1})")]
    SpinMismatch(String, String),
    #[error("quadrature grid too coarse for J = {0}")]
    GridTooCoarse(String),
    #[error("angular momenta ({0}) violate the triangle rule")]
    TriangleViolation(String),
    #[error("algebraic and numerical exclusion oracles disagree at {0}")]
    OracleDisagreement(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
