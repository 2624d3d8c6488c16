use thiserror::Error;

/// A row or column of a Cayley table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row(usize),
    Column(usize),
}

impl std::fmt::Display for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Line::Row(i) => write!(f, "row {i}"),
            Line::Column(j) => write!(f, "column {j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("empty table")]
    Empty,
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry {value} at ({row}, {col}) is out of range for order {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("order {0} exceeds the 2^16 element limit")]
    OrderTooLarge(usize),
    #[error("not a latin square: {line} repeats {value} at positions {first} and {second}")]
    NotLatinSquare {
        line: Line,
        value: usize,
        first: usize,
        second: usize,
    },
    #[error("no element acts as a two-sided identity")]
    NoTwoSidedIdentity,
    #[error("identity is element {0}, but the file format requires element 0")]
    IdentityNotFirst(usize),
    #[error("element {element} out of range for order {order}")]
    ElementOutOfRange { element: usize, order: usize },
    #[error("not power associative at element {0}")]
    NotPowerAssociativeAt(usize),
    #[error("not power associative")]
    NotPowerAssociative,
    #[error("subloop is not normal")]
    NotNormal,
    #[error("element set is not a subloop")]
    NotASubloop,
    #[error("left cosets do not partition the loop")]
    NotPartition,
    #[error("not a transversal containing the identity")]
    NotTransversal,
    #[error("order {order} exceeds configured cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("closure exceeded cap after {size} elements")]
    CapExceeded { size: usize },
    #[error("map is not a permutation")]
    NotPermutation,
    #[error("pair is not a pseudoautomorphism")]
    NotPseudoautomorphism,
    #[error("triple is not an autotopism")]
    NotAutotopism,
    #[error("loop is not Moufang")]
    NotMoufang,
    #[error("loop is not diassociative")]
    NotDiassociative,
    #[error("kernel is not a commutative group")]
    KernelNotCommutativeGroup,
    #[error("invalid extension data: {0}")]
    InvalidExtensionData(String),
    #[error("extension table is not a loop: {0}")]
    NotALoop(Box<LoopError>),
    #[error("loop is not 3-divisible")]
    Not3Divisible,
    #[error("kernel is not 2-divisible")]
    KernelNot2Divisible,
    #[error("{0} does not restrict to an automorphism of the kernel")]
    RestrictionNotAutomorphism(&'static str),
    #[error("element {0} has no cube root")]
    NoCubeRoot(usize),
    #[error("invalid construction spec: {0}")]
    SpecInvalid(String),
    #[error("associated pairing of the form is not bilinear")]
    NotBilinear,
    #[error("unknown fixture: {0}")]
    UnknownFixture(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = LoopError> = std::result::Result<T, E>;
