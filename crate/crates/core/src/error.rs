use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("non-finite input")]
    NonFiniteInput,

    #[error("empty grid")]
    EmptyGrid,

    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),

    #[error("{name} = {value} outside domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("symbol not in L^infinity")]
    SymbolNotBounded,

    #[error("evaluation too close to support boundary")]
    NearSupportBoundary,

    #[error("interior evaluation not supported by this identity")]
    InteriorEvaluation,

    #[error("pole of the Mobius map")]
    MobiusPole,

    #[error("outside the validity interval of the dimension bound")]
    OutsideValidityInterval,

    #[error("log branch tracking lost")]
    LogBranchLost,

    #[error("map not normalized as required: {0}")]
    NotNormalized(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
