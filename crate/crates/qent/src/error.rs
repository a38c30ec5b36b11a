use thiserror::Error;

/// Errors shared across the toolkit. Each variant names the violated
/// contract; numeric payloads carry the measured residual where useful.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: symmetrization residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NonHermitian { residual: f64, tol: f64 },
    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e} below floor {floor:.3e}")]
    NotPSD { eigenvalue: f64, floor: f64 },
    #[error("trace is {trace:.12}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("bad rank {rank} for dimension {dim}")]
    BadRank { rank: usize, dim: usize },
    #[error("weights do not form a probability vector: {context}")]
    BadWeights { context: String },
    #[error("ensemble states are not pairwise orthogonal: ||rho_m rho_n||_F = {residual:.3e}")]
    NotOrthogonal { residual: f64 },
    #[error("amplitude operator is not normalized: tr(v'v) = {norm:.12}")]
    NotNormalized { norm: f64 },
    #[error("Kraus operators incomplete: ||sum K'K - I||_F = {residual:.3e}")]
    IncompleteKraus { residual: f64 },
    #[error("Kraus operator shapes inconsistent: {context}")]
    ShapeMismatch { context: String },
    #[error("unknown channel family `{name}`")]
    UnknownChannel { name: String },
    #[error("bad channel parameter: {context}")]
    BadParam { context: String },
    #[error("mutual-entropy ordering violated: I_q={i_q:.9} I_d={i_d:.9} I_o={i_o:.9}")]
    OrderingViolated { i_q: f64, i_d: f64, i_o: f64 },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("empty Kraus list")]
    EmptyKraus,
}

pub type Result<T> = std::result::Result<T, Error>;
