use crate::series::Ring;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: Ring, right: Ring },

    #[error("invalid ring modulus 2^{0} (need 1 <= k <= 64)")]
    InvalidRing(u32),

    #[error("coefficient at q^{exponent} is not a unit in {ring}")]
    NotUnit { exponent: i64, ring: Ring },

    #[error("series is zero through its truncation")]
    ZeroSeries,

    #[error("insufficient truncation: {0}")]
    Truncation(String),

    #[error("nonzero coefficient at negative exponent q^{exponent} cannot be extracted")]
    NegativeExponents { exponent: i64 },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("truncation budget exceeded: need q^{needed}, budget is q^{budget}")]
    BudgetExceeded { needed: u64, budget: u64 },

    #[error("certificate: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
