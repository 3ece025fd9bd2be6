use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JcmError {
    #[error("Fock cutoff nmax={nmax} retains probability {retained:.3e}, below 1 - {tolerance:e}")]
    Truncation {
        nmax: usize,
        retained: f64,
        tolerance: f64,
    },
    #[error("atomic amplitudes not normalized: |psi|^2 = {0}")]
    NotNormalized(f64),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("Rabi frequency undefined for shifted index ({0}, {1})")]
    UndefinedShift(i64, i64),
    #[error("dense oracle refuses dimension {dim} (limit {limit})")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("state does not live in the Hamiltonian's space")]
    SpaceMismatch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, JcmError>;
