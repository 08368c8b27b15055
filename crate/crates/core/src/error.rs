use thiserror::Error;

/// Errors raised by ring construction, arithmetic and the search engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("modulus {0} is too small, Z/n needs n >= 2")]
    ModulusTooSmall(u64),

    #[error("modulus {0} does not fit in 32 bits")]
    ModulusTooLarge(u64),

    #[error("quotient modulus is not monic")]
    NonMonic,

    #[error("quotient modulus must have degree >= 1")]
    DegreeTooSmall,

    #[error("product ring needs at least one factor")]
    EmptyProduct,

    #[error("ring order overflows 64 bits")]
    OrderOverflow,

    #[error("{what} needs {required}, budget allows {limit}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        limit: u64,
    },

    #[error("element does not belong to ring {0}")]
    RingMismatch(String),

    #[error("value does not match the shape of ring {ring}: {message}")]
    InvalidValue { ring: String, message: String },

    #[error("element {0} is not idempotent")]
    NotIdempotent(String),

    #[error("idempotent {0} is trivial")]
    TrivialIdempotent(String),

    #[error("ring {0} is a product of fields, no witness exists")]
    ProductOfFields(String),

    #[error("invalid lift problem: {0}")]
    InvalidProblem(String),

    #[error("stage {stage} is not expressible in the generators")]
    StageUnsolvable { stage: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
