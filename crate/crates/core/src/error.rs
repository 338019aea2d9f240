use thiserror::Error;

/// Errors raised by the library. Axiom violations of a causet are not errors;
/// they are reported through [`crate::causet::ValidationReport`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distance matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },

    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },

    #[error("point index {index} out of range for a space of {n} points")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("causet already contains a spacelike boundary point at index {0}")]
    BoundaryPresent(usize),

    #[error("causet has no spacelike boundary point")]
    NoBoundary,

    #[error("ordering is not a permutation of 0..{n}")]
    NotPermutation { n: usize },

    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("points {x} and {y} are not chronologically related")]
    NotChronological { x: usize, y: usize },

    #[error("not a chain: point {from} does not strictly causally precede point {to}")]
    NotAChain { from: usize, to: usize },

    #[error("point set must be nonempty")]
    EmptySet,

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("invalid correspondence: {0}")]
    InvalidCorrespondence(String),

    #[error(
        "spaces differ in spacelike-boundary status (left: {left}, right: {right}); \
         adjoin a boundary point to the other space first"
    )]
    MixedBoundary { left: bool, right: bool },

    #[error("triangle sides must be positive, got ({a}, {b}, {c})")]
    NonPositiveSide { a: f64, b: f64, c: f64 },

    #[error("triangle ({a}, {b}, {c}) is not realizable in the flat model space")]
    NotRealizable { a: f64, b: f64, c: f64 },

    #[error("only the flat model space (k = 0) is supported for comparison distances, got k = {0}")]
    UnsupportedModel(f64),

    #[error("coordinate ({0}, {1}) lies outside the unit square")]
    OutOfDiamond(f64, f64),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("sequence entry ({i}, {j}) is not Cauchy: tail estimates spread {spread} > tol {tol}")]
    NotCauchy {
        i: usize,
        j: usize,
        spread: f64,
        tol: f64,
    },

    #[error("limit matrix is not a causet: {0}")]
    InvalidLimit(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
