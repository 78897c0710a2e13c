use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("universe size must be at least 1")]
    EmptyUniverse,
    #[error("item {item} is outside the universe [1, {universe_size}]")]
    ItemOutOfRange { item: u64, universe_size: u64 },
    #[error("query over a universe of size {query} sent to an oracle over size {oracle}")]
    UniverseMismatch { oracle: u64, query: u64 },
    #[error("block {block} is outside [1, {block_count}]")]
    BlockOutOfRange { block: u64, block_count: u64 },
    #[error("delta must lie strictly between 0 and 1, got {0}")]
    InvalidDelta(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("formula is outside its regime: {0}")]
    OutsideRegime(String),
    #[error("exhaustive verification is limited to n <= {max}, got {requested}")]
    BudgetExceeded { requested: u64, max: u64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

pub(crate) fn check_delta(delta: f64) -> Result<f64> {
    if delta > 0.0 && delta < 1.0 {
        Ok(delta)
    } else {
        Err(Error::InvalidDelta(delta))
    }
}
