use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown distribution `{0}`")]
    UnknownDistribution(String),

    #[error("invalid parameter for {family}: {reason}")]
    InvalidParameter { family: String, reason: String },

    #[error("probability {0} must lie strictly inside (0, 1)")]
    ProbabilityOutOfRange(f64),

    #[error("bracket failure inverting `{name}` at p = {p}: {reason}")]
    BracketFailure { name: String, p: f64, reason: String },

    #[error("quantile residual {residual:e} for `{name}` exceeds tolerance (malformed spec?)")]
    QuantileResidual { name: String, residual: f64 },

    #[error("x = {x} is outside the support of `{name}`")]
    OutOfSupport { name: String, x: f64 },

    #[error("{op} requires the {expected} regime, `{name}` is {found}")]
    WrongRegime {
        op: &'static str,
        expected: &'static str,
        found: &'static str,
        name: String,
    },

    #[error("von Mises setup violated for `{name}`: {reason}")]
    VonMisesViolated { name: String, reason: String },

    #[error("{what} is undefined at x = {x} (F(x) in {{0, 1}})")]
    FunctionalUndefined { what: &'static str, x: f64 },

    #[error("x = {x} lies outside the support window ({lo}, {hi})")]
    OutsideWindow { x: f64, lo: f64, hi: f64 },

    #[error("support window inconsistent for `{name}` at n = {n}: {reason}")]
    WindowInconsistent { name: String, n: u64, reason: String },

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error("evaluation domain is empty at n = {n}")]
    EmptyDomain { n: u64 },

    #[error("entry `{0}` carries no certified envelope")]
    UncertifiedEnvelope(String),

    #[error("malformed report data: {0}")]
    MalformedReport(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
