use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension {0} is outside the supported range 1..=16")]
    BadDimension(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("subset mask {mask:#b} is not valid for n = {n}")]
    BadMask { mask: u32, n: usize },
    #[error("k must be at least 1")]
    ZeroPower,
    #[error("unknown basis `{0}`")]
    UnknownBasis(String),
    #[error("word mixes y and s generators")]
    MixedWord,
    #[error("lex error at byte {offset}: {message}")]
    Lex { offset: usize, message: String },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("operator expression in classical context")]
    OperatorInClassical,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Largest supported number of variables.
pub const MAX_DIM: usize = 16;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::BadDimension(n))
    }
}

pub(crate) fn same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}
