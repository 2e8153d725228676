use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state {value} lies outside the unit interval")]
    Domain { value: f64 },

    #[error("empty sample")]
    EmptySample,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown system id `{0}`")]
    UnknownSystem(String),

    #[error("`{operation}` is not supported for system `{system}`")]
    Unsupported {
        system: String,
        operation: &'static str,
    },

    #[error("exact arithmetic would overflow 128 bits in {what}")]
    Overflow { what: &'static str },

    #[error("symbol {symbol} is outside the alphabet 0..{alphabet}")]
    SymbolOutOfRange { symbol: u32, alphabet: u32 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
