use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Overflow of an explicit integer is not an error: `to_integer` reports it
/// as `None`. Errors here mean the requested computation cannot be carried
/// out exactly within the configured budgets, or the inputs are malformed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("prime index {index} exceeds the prime-table budget of {budget}")]
    PrimeBudget { index: String, budget: u64 },

    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),

    #[error("{0} cannot be evaluated on inputs with prime-interval factors")]
    IntervalUnsupported(String),

    #[error("value too large to represent exactly: {0}")]
    ValueTooLarge(String),

    #[error("oracle budget exceeded for {function} at n = {n}")]
    OracleBudget { function: String, n: u64 },

    #[error("invalid function id: {0}")]
    InvalidFunction(String),

    #[error("{function} is not expansive on 1..={bound}: f({witness}) < {witness}")]
    NotExpansive {
        function: String,
        bound: u128,
        witness: u128,
    },

    #[error("{function} is not finite fibre; its preimages cannot be enumerated completely")]
    NotFiniteFibre { function: String },

    #[error("complete preimages of {function} are not available: {reason}")]
    IncompletePreimage { function: String, reason: String },

    #[error("unsupported fibre witness request: {0}")]
    UnsupportedFibre(String),

    #[error("scheme {scheme} does not model {function}")]
    SchemeMismatch { scheme: String, function: String },

    #[error("mixed schemes: {0} and {1}")]
    MixedSchemes(String, String),

    #[error("depth {depth} exceeds the cap {cap} for scheme {scheme}")]
    DepthCap {
        scheme: String,
        depth: u64,
        cap: u64,
    },

    #[error("generic family spec is inconsistent at p = {prime}, n = {n}: {detail}")]
    Consistency { prime: u64, n: u64, detail: String },

    #[error("invalid generic family spec: {0}")]
    InvalidGenericSpec(String),

    #[error("inverse totient budget exceeded: m = {m} > {budget}")]
    InversePhiBudget { m: u128, budget: u128 },

    #[error("equality of symbolic values cannot be decided: {0}")]
    Undecidable(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("budget exceeded after horizon {reached}: {detail}")]
    HorizonBudget { reached: u64, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
