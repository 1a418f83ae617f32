use thiserror::Error;

/// Errors produced by the correlation toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {entries} entries for dimension {dim}")]
    NotSquare { dim: usize, entries: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian: |M - M^dagger| = {deviation:e} at ({row}, {col})")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("trace {trace} differs from 1")]
    TraceNotUnit { trace: f64 },

    #[error("negative eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("{name} = {value} is out of range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid matrix entry at row {row}, col {col}: {reason}")]
    InvalidEntry {
        row: usize,
        col: usize,
        reason: String,
    },

    #[error("singular linear system (pivot {pivot:e})")]
    Singular { pivot: f64 },

    #[error("incomplete count records: missing basis indices {missing:?}")]
    MissingRecords { missing: Vec<usize> },

    #[error("invalid count records: {0}")]
    InvalidRecords(String),

    #[error("invalid state specification: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value, range })
    }
}
