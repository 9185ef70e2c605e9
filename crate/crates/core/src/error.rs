use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("universe of {0} atoms exceeds the supported maximum of 62")]
    TooManyAtoms(u32),
    #[error("member mask {member:#x} uses an atom outside 1..={m}")]
    AtomOutOfRange { member: u64, m: u32 },
    #[error("duplicate member `{0}`")]
    DuplicateMember(String),
    #[error("family is empty")]
    EmptyFamily,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing `{0} <count>` header")]
    MissingHeader(&'static str),
    #[error("malformed header `{0}`")]
    BadHeader(String),
    #[error("malformed token `{0}`")]
    BadToken(String),
    #[error("atom {atom} out of range 1..={max}")]
    AtomOutOfRange { atom: u64, max: u32 },
    #[error("token `{0}` repeated within a member")]
    RepeatedToken(String),
    #[error("`empty` cannot be combined with other tokens")]
    EmptyCombined,
    #[error("duplicate member")]
    DuplicateMember,
    #[error("universe size {0} exceeds the limit {1}")]
    UniverseTooLarge(u32, u32),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SaturationError {
    #[error("layer is not an antichain")]
    NotAntichain,
    #[error("atom scan over {0} atoms exceeds the limit of {1}")]
    ScanTooLarge(u32, u32),
    #[error("homogeneous block needs at least 2 elements, got {0}")]
    BlockTooSmall(u32),
    #[error("ground set of {0} elements exceeds the oracle limit of {1}")]
    GroundSetTooLarge(u32, u32),
    #[error("probability {0} outside the open interval (0, 1)")]
    ProbabilityOutOfRange(f64),
    #[error("expected {expected} layers, found {found}")]
    LayerCount { expected: usize, found: usize },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("k must be at least {min}, got {k}")]
    KTooSmall { k: u32, min: u32 },
    #[error("composed universe needs {0} atoms, above the limit of 62")]
    UniverseTooLarge(u32),
    #[error("composed family would hold {0} members, above the materialization limit")]
    TooManyMembers(u128),
    #[error("input is not a saturated antichain")]
    NotSaturatedAntichain,
    #[error("reduction exceeded its iteration bound of {0}")]
    IterationBound(usize),
    #[error("reduction postcondition violated: {0}")]
    Postcondition(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("k = {k} outside the valid range (k >= {min})")]
    KOutOfRange { k: u32, min: u32 },
    #[error("layer index {i} outside 2..={max} for k = {k}")]
    LayerOutOfRange { i: u32, k: u32, max: u32 },
    #[error("erf difference is not positive at k = {0}")]
    NonPositiveErfDifference(u32),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("k must be at least 1")]
    BadK,
    #[error("max_atoms {0} exceeds the limit of 10")]
    TooManyAtoms(u32),
    #[error("max_size {0} exceeds the limit of 64")]
    SizeTooLarge(usize),
    #[error("canonical form needs m <= 8, got {0}")]
    CanonicalTooLarge(u32),
}
