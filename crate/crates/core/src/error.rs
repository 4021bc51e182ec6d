use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimension {0} is not even")]
    OddDimension(usize),

    #[error("matrix is empty")]
    Empty,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric (relative asymmetry {asymmetry:.3e} exceeds {tol:.1e})")]
    NotSymmetric { asymmetry: f64, tol: f64 },

    #[error("matrix not numerically positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not symplectic (residual {residual:.3e} exceeds {tol:.1e})")]
    NotSymplectic { residual: f64, tol: f64 },

    #[error("P + iQ is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("vectors have different lengths: {0} and {1}")]
    LengthMismatch(usize, usize),

    #[error("x is not majorized by y: partial sum condition fails at k = {k} (slack {slack:.3e})")]
    NotMajorized { k: usize, slack: f64 },

    #[error("invalid 2x2 block (alpha = {alpha}, beta = {beta}, gamma = {gamma})")]
    InvalidTwoByTwo { alpha: f64, beta: f64, gamma: f64 },

    #[error("invalid partition {parts:?} for n = {n}")]
    InvalidPartition { parts: Vec<usize>, n: usize },

    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),

    #[error("canonical skew form failed: {0}")]
    CanonicalForm(String),

    #[error("parse error: {0}")]
    Parse(String),
}
