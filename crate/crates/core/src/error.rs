use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("zero norm")]
    ZeroNorm,
    #[error("matrix is not antisymmetric (relative defect {0:.3e})")]
    NotAntisymmetric(f64),
    #[error("zero matrix")]
    ZeroMatrix,
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("eigenvalues are not pairwise degenerate (defect {0:.3e}): not a two-fermion reduced state")]
    Unpaired(f64),
    #[error("q = 1 is the von Neumann limit, use von_neumann_entropy")]
    TsallisAtOne,
    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("under-resolved on grid: {0}")]
    Unresolved(String),
    #[error("numerical stability bound violated: {0}")]
    Unstable(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{0} part of the two-particle amplitude vanishes")]
    VanishingBlock(&'static str),
    #[error("eigensolver did not converge")]
    Eigensolver,
    #[error("not converged: {0}")]
    NotConverged(String),
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("malformed dump: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
