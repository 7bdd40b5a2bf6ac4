use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    NotInvertible,
    #[error("window L={start} N={len} reaches n >= p={p}; enable the zero tail to allow it")]
    WindowCrossesModulus { start: u64, len: u64, p: u64 },
    #[error("corrupt checkpoint at n={n}: {reason}")]
    CorruptCheckpoint { n: u64, reason: &'static str },
    #[error("sets live modulo different primes ({left} vs {right})")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("{what} needs {required} operations, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        budget: u128,
    },
    #[error("{what}: p={p} exceeds the full-scan cap {cap}")]
    CapExceeded { what: &'static str, p: u64, cap: u64 },
    #[error("set contains the zero residue, which {0} forbids")]
    ZeroElement(&'static str),
    #[error("lambda={0} is odd; the Wilson pair exists for even lambda only")]
    OddWilsonTarget(u64),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}
