use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown or missing vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex identifier `{0}`")]
    DuplicateVertex(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} exceeds the supported maximum for vertex enumeration")]
    DimensionTooLarge(usize),
    #[error("parametric program is infeasible for every parameter in the interval")]
    InfeasibleEverywhere,
    #[error("objective is unbounded for some feasible parameter")]
    UnboundedValue,
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("divisor has a non-integer coefficient at `{0}`")]
    NonIntegerDivisor(String),
    #[error("divisor must have positive degree, found {0}")]
    NonPositiveDegree(String),
    #[error("flag divisor must be effective")]
    NonEffectiveFlag,
    #[error("effective linear system is empty at t = 0")]
    EmptyAtZero,
    #[error("effective linear system is empty")]
    EmptySystem,
    #[error("generic polytope is unbounded (rays do not positively span)")]
    UnboundedGenericPolytope,
    #[error("flag rays do not form a lattice basis (determinant {0})")]
    NotABasis(String),
    #[error("flag ray {0} is not among the model rays with a matching coefficient")]
    FlagRayUnknown(usize),
    #[error("point lies outside the generic polytope")]
    OutsideGenericPolytope,
    #[error("invalid toric model: {0}")]
    InvalidModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
