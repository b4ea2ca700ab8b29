use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxError {
    #[error("unsupported root system type `{0}`")]
    UnsupportedType(String),

    #[error("Weyl group of {tag} has order {order}, above the supported cap of {cap}")]
    RankTooLarge { tag: String, order: u64, cap: u64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("generator index {index} out of range (rank {rank})")]
    BadGenerator { index: usize, rank: usize },

    #[error("affine root with zero real part")]
    ZeroRealPart,

    #[error("state space too large: {0}")]
    StateSpaceTooLarge(String),

    #[error("transition graph is not strongly connected ({reached} of {total} states reached)")]
    NotIrreducible { reached: usize, total: usize },

    #[error("limit direction vanished")]
    ZeroDirection,

    #[error("limit direction is not dominant: {0}")]
    NotDominant(String),

    #[error("no edge {from} -> {to} in the chain graph")]
    NoSuchEdge { from: String, to: String },

    #[error("Shi region count did not stabilize by exploration length {0}")]
    NonStabilizing(usize),

    #[error("edge profiles of two alcoves in region vertex {0} disagree")]
    ProfileMismatch(String),

    #[error("linear system is singular")]
    SingularSystem,

    #[error("element is not affine Grassmannian")]
    NotGrassmannian,

    #[error("coweight is not anti-dominant")]
    NotAntiDominant,

    #[error("coweight coordinates must sum to zero, got {0}")]
    UnbalancedCoweight(i64),

    #[error("cannot scale the empty core (degree zero)")]
    ZeroDegree,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

pub type Result<T> = std::result::Result<T, CoxError>;
