use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("prime {0} is too large for the dense matrix kernel (max 251)")]
    PrimeTooLarge(u32),

    #[error("mismatched moduli: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("mismatched variable counts: {0} vs {1}")]
    VariableCountMismatch(usize, usize),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable {name} at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("polynomial is not homogeneous")]
    Inhomogeneous,

    #[error("polynomial is not invariant: {0}")]
    NotInvariant(String),

    #[error("block size {size} outside 1..={p}")]
    InvalidBlockSize { size: usize, p: u32 },

    #[error("representation needs at least one block")]
    NoBlocks,

    #[error("invalid variable index x[{0},{1}]")]
    InvalidVariable(usize, usize),

    #[error("invalid block list {0:?}: indices must be valid and strictly increasing")]
    InvalidBlockList(Vec<usize>),

    #[error("block {block} is a trivial summand (size 1)")]
    TrivialSummand { block: usize },

    #[error("width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeOutOfRange { degree: usize, bound: usize },

    #[error("degree bound {bound} too small, need at least {required}")]
    BoundTooSmall { bound: usize, required: usize },

    #[error("subspace inclusion fails in degree {0}")]
    InclusionFailure(usize),

    #[error("element must have positive degree")]
    DegreeZero,

    #[error("module is zero up to degree {0}")]
    ZeroModule(usize),

    #[error("monomial algebra: {0}")]
    MonoAlgebra(String),
}
