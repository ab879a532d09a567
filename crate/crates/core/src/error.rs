use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structure constants are not associative on basis triple ({i}, {j}, {k})")]
    NonAssociative { i: usize, j: usize, k: usize },
    #[error("structure constants are not commutative on basis pair ({i}, {j})")]
    NonCommutative { i: usize, j: usize },
    #[error("unit vector does not act as identity on basis element {j}")]
    BadUnit { j: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("tensors live over different rings")]
    RingMismatch,
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("tensor is not invariant under permutations of the first n-1 factors")]
    NotInvariant,
    #[error("tensor is not symmetric")]
    NotSymmetric,
    #[error("elements belong to different alternator contexts")]
    ContextMismatch,
    #[error("cannot combine a symmetric-level element with an invariant-level element")]
    LevelMismatch,
    #[error("the supplied relation does not hold: sum is {0}")]
    RelationDoesNotHold(String),
    #[error("the given vectors do not form a basis")]
    NotABasis,
    #[error("discriminant {0} is not a unit")]
    NotEtale(String),
    #[error("discriminant {0} is not a nonzerodivisor")]
    NotGenericallyEtale(String),
    #[error("unsupported ambient ring: {0}")]
    UnsupportedAmbient(String),
    #[error("unsupported base ring: {0}")]
    UnsupportedBase(String),
    #[error("division by the discriminant fails: {0}")]
    DivisionFails(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("value not in coefficient ring: {0}")]
    NotInRing(String),
    #[error("map is not a ring homomorphism: {0}")]
    NotHomomorphism(String),
}

pub type Result<T> = std::result::Result<T, Error>;
