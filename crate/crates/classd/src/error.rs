use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed cycle notation at byte {at}: {reason}")]
    BadCycleNotation { at: usize, reason: String },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: u32, degree: usize },

    #[error("point {point} repeated in cycle notation")]
    RepeatedPoint { point: u32 },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("empty generator list")]
    EmptyGenerators,

    #[error("permutation is not a member of the group")]
    NotInGroup,

    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("element order overflows u64")]
    OrderOverflow,

    #[error("class of size {size} exceeds the enumeration threshold {threshold}")]
    ClassTooLarge { size: String, threshold: u64 },

    #[error("sampling budget of {budget} elements exhausted before the class list was complete ({found} classes found)")]
    SamplingBudget { budget: u64, found: usize },

    #[error("no class named {name}")]
    NoSuchClass { name: String },

    #[error("invalid class index {index}")]
    BadClassIndex { index: usize },

    #[error("structure constant: neither class fits under the enumeration threshold {threshold}")]
    StructureConstantTooLarge { threshold: u64 },

    #[error("base image tuple has length {got}, base has length {want}")]
    BadTupleLength { got: usize, want: usize },

    #[error("the given points are not a base: a non-identity element fixes them all")]
    NotABase,

    #[error("no group element realizes the base image tuple (failed at base point {base_point})")]
    TupleNotRealized { base_point: u32 },

    #[error("subgroup generator {index} is not an element of the ambient group")]
    SubgroupNotContained { index: usize },

    #[error("group file {path}: {reason}")]
    GroupFile { path: String, reason: String },

    #[error("group file {path}: stated order {expected} but computed order {got}")]
    OrderMismatch {
        path: String,
        expected: String,
        got: String,
    },

    #[error("unknown catalog group {name:?}")]
    UnknownGroup { name: String },

    #[error("log line {line}: {reason}")]
    BadLogRecord { line: usize, reason: String },

    #[error("type-D witness failed re-verification: {reason}")]
    WitnessInvalid { reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
