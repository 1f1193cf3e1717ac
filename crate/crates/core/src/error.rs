use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension {n} exceeds the configured cap of {cap}")]
    DimensionTooLarge { n: u32, cap: u32 },

    #[error("element {element} is not in [1, {n}]")]
    ElementOutOfRange { element: u32, n: u32 },

    #[error("vertex code {code} is not below 2^{n}")]
    VertexOutOfRange { code: u64, n: u32 },

    #[error("coordinate {coord} is not in [1, {n}]")]
    CoordinateOutOfRange { coord: u32, n: u32 },

    #[error("size {size} is out of range for dimension {n}")]
    SizeOutOfRange { size: u64, n: u32 },

    #[error("antipodal families have even size, got {0}")]
    OddSize(u64),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("malformed permutation: {0}")]
    BadPermutation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The request is well-formed but too large for the selected mode.
    #[error("not feasible: {0}")]
    Capability(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An internal invariant broke. Never expected in a correct build.
    #[error("invariant breach: {0}")]
    Invariant(String),
}
