use thiserror::Error;

/// Errors surfaced by the workbench.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range (valid 0..{limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix not Hermitian: max |A - A\u{2020}| entry = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("invalid bipartition mask: {0}")]
    InvalidMask(String),

    #[error("no sign change of the minimal eigenvalue over [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("imaginary residue {0:e} above tolerance")]
    ImaginaryResidue(f64),

    #[error("numerical consistency failure: {0}")]
    NumericalInconsistency(String),

    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
