use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate mode label `{0}`")]
    DuplicateLabel(String),
    #[error("mode `{0}` has zero dimension")]
    ZeroDimension(String),
    #[error("empty mode list")]
    EmptySpace,
    #[error("unknown mode label `{0}`")]
    UnknownMode(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid circuit parameters: {0}")]
    InvalidCircuit(String),
    #[error("quadratic form not positive definite for mode `{mode}` (coefficient {coefficient:e})")]
    NotPositiveDefinite { mode: String, coefficient: f64 },
    #[error("exact diagonalization requested for dimension {dim} above cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("missing spectrum label {0}")]
    MissingLabel(String),
    #[error("drive pole: |2α - 4g| = {0:e} rad/ns is too close to resonance")]
    DrivePole(f64),
    #[error("trace drift {drift:e} exceeds bound {bound:e}; reduce the time step")]
    TraceDrift { drift: f64, bound: f64 },
    #[error("ancilla leakage {0:.3e} during probe exceeds 1%")]
    ProbeLeakage(f64),
    #[error("numerical convergence failure: {0}")]
    Convergence(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
