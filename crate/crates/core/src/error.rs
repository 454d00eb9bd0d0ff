use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument {0} is not positive")]
    NonPositiveArgument(String),
    #[error("tan(pi * {0}) is a pole")]
    TangentPole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerator has {num} factors but denominator has {den}")]
    UnequalFactorCounts { num: usize, den: usize },
    #[error("factor n + {root} is not positive at n = {n}")]
    NonPositiveFactorOnTail { root: String, n: u64 },
    #[error("unsigned product diverges: numerator roots sum to {num_sum}, denominator roots to {den_sum}")]
    UnbalancedUnsignedProduct { num_sum: String, den_sum: String },
    #[error("cannot reach {digits} digits: {reason}")]
    PrecisionUnreachable { digits: u32, reason: String },
    #[error("invalid g: {0}")]
    InvalidG(String),
    #[error("gamma ratio requires equal root sums, got {num_sum} and {den_sum}")]
    UnbalancedSums { num_sum: String, den_sum: String },
    #[error("argument {0} is a pole of the gamma function")]
    PoleArgument(String),
    #[error("{0}")]
    Usage(String),
}
