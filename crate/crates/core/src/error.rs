use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcfError {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("prime {0} exceeds the supported maximum of {max}", max = crate::field::MAX_TABLE_PRIME)]
    FieldTooLarge(u64),

    #[error("0 has no multiplicative inverse")]
    ZeroInverse,

    #[error("value {value} is not an element of F_{p}")]
    ElementOutOfRange { value: u64, p: u8 },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("variable {var} is out of range for arity {n}")]
    BadVariable { var: usize, n: usize },

    #[error("arity {0} is out of range for this operation")]
    BadArity(usize),

    #[error("exponent {exponent} exceeds p-1 = {max}")]
    BadExponent { exponent: u64, max: u8 },

    #[error("invalid interval set: {0}")]
    InvalidIntervalSet(String),

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("degenerate descriptor: the last two outputs coincide")]
    DegenerateDescriptor,

    #[error("budget exceeded: {required} items required, budget is {budget}")]
    BudgetExceeded { required: String, budget: u64 },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, NcfError>;
