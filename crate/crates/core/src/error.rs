use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("weight list is empty")]
    EmptyWeight,

    #[error("weight entries must be positive, got {0:?}")]
    NonPositiveWeight(Vec<u64>),

    #[error("weight {weights:?} is not well-formed: the entries {subset:?} have gcd {gcd}")]
    NotWellFormed {
        weights: Vec<u64>,
        subset: Vec<u64>,
        gcd: u64,
    },

    #[error("all coordinates are zero")]
    ZeroPoint,

    #[error("coordinate count {got} does not match weight length {expected}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("norm {0} cannot be factored within the configured trial-division bound")]
    FactorBoundExceeded(u128),

    #[error("ideal is not integral")]
    NotIntegral,

    #[error("tolerance must be positive")]
    InvalidTolerance,

    #[error("zeta value at s = {0} diverges or is unsupported (need s >= 2)")]
    UnsupportedZetaArgument(u64),

    #[error("enumeration needs about {required} lattice visits, above the budget of {limit}")]
    BudgetExceeded { required: u128, limit: u64 },

    #[error("unit rank {0} is not supported by the Monte-Carlo sampler (rank <= 1 only)")]
    UnsupportedRank(u32),

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: u64, got: u64 },

    #[error("composition needs alpha(X) >= alpha(Y) and beta(Y) = 0")]
    CompositionOrder,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
