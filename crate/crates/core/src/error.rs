use thiserror::Error;

/// Errors surfaced by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid prime {0}: residue characteristic must be an odd prime")]
    InvalidPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("expected a p-adic unit, got {0}")]
    NotAUnit(String),
    #[error("expected a nonzero element")]
    ZeroArgument,
    #[error("expected an integral element, got {0}")]
    NotIntegral(String),
    #[error("matrix is not in SL2: determinant {0}")]
    NotSpecialLinear(String),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("invalid sigma table: {0}")]
    InvalidSigma(String),
    #[error("{0} is not in X(pi)")]
    NotInSpectrum(String),
    #[error(
        "integrand not locally constant at tested resolution (shell {shell}, levels up to {level})"
    )]
    NotLocallyConstant { shell: i64, level: u32 },
    #[error("improper integral did not stabilize within range {max_range}; partial sums: {trace}")]
    NoStabilization { max_range: i64, trace: String },
    #[error("zeta support window did not close within valuations [{lo}, {hi}]")]
    WindowExhausted { lo: i64, hi: i64 },
    #[error("Whittaker constant is not unique: {0}")]
    InconsistentConstant(String),
    #[error("support invariant violated: {0}")]
    SupportViolation(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
