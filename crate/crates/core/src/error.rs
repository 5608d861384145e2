use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spin size j = {0}: 2j must be a positive integer")]
    InvalidSpin(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("kick period tau must be positive and finite, got {0}")]
    InvalidPeriod(f64),
    #[error("point is off the unit sphere (|norm² − 1| = {0:e})")]
    OffSphere(f64),
    #[error("direction is not a unit vector (|r| = {0})")]
    NotUnit(f64),
    #[error("vectors r{0} and r{1} are not orthogonal (dot product {2:e})")]
    NotOrthogonal(usize, usize, f64),
    #[error("degenerate pentagon closure: |r3 × r0| = {0:e}")]
    DegenerateClosure(f64),
    #[error("kick strength {0} is outside [0, π]")]
    KappaOutOfRange(f64),
    #[error("seed list is empty")]
    EmptySeeds,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
