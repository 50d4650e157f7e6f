use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("poset has no elements")]
    EmptyPoset,
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("cover relation references unknown element `{0}`")]
    UnknownElement(String),
    #[error("cover relations contain a cycle through `{0}`")]
    CycleDetected(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("size {size} exceeds the cap {cap} for {what}")]
    SizeCap { what: &'static str, size: usize, cap: usize },
    #[error("{what} exceeded the guard cap of {cap}")]
    ExplosionGuard { what: &'static str, cap: u64 },
    #[error("time budget exhausted")]
    BudgetExceeded,
    #[error("{0} is not connected")]
    NotConnected(&'static str),
    #[error("source poset is not a chain")]
    NotAChain,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal self-check failed: {0}")]
    InternalCheckFailed(String),
}

impl Error {
    /// True for errors caused by a guard cap or a time budget rather than bad input.
    pub fn is_abort(&self) -> bool {
        matches!(self, Error::ExplosionGuard { .. } | Error::BudgetExceeded | Error::SizeCap { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
