use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported; q must be odd")]
    EvenCharacteristic,
    #[error("{0} is not a power of an odd prime")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("malformed modulus: {0}")]
    MalformedModulus(String),
    #[error("modulus {coeffs:?} is reducible over Z_{p}")]
    ReducibleModulus { coeffs: Vec<u32>, p: u32 },
    #[error("rank {rank} out of range [0, {bound})")]
    RankOutOfRange { rank: u64, bound: u64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
