use thiserror::Error;

use crate::grade::GradeError;
use crate::report::{TheoremId, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    // input
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare { row: usize, len: usize, expected: usize },
    #[error("table must have at least one element")]
    EmptyTable,
    #[error("entry {value} at ({row}, {col}) is outside 0..{order}")]
    EntryOutOfRange { row: usize, col: usize, value: i64, order: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Grade(#[from] GradeError),
    #[error("expected {expected} grades, found {found}")]
    GradeCount { expected: usize, found: usize },

    // axioms
    #[error("left invertive law fails: (a*b)*c != (c*b)*a at (a, b, c) = {0:?}")]
    NotLeftInvertive([usize; 3]),
    #[error("no left identity")]
    NoLeftIdentity,
    #[error("multiple left identities: {0:?}")]
    MultipleLeftIdentities(Vec<usize>),
    #[error("element {0} has no two-sided inverse")]
    MissingInverse(usize),

    // substructures and maps
    #[error("{0:?} is not an AG-subgroup")]
    NotASubgroup(Vec<usize>),
    #[error("element {element} is outside 0..{order}")]
    ElementOutOfRange { element: usize, order: usize },
    #[error("right cosets of {subgroup:?} do not partition the carrier: {detail}")]
    NotAPartition { subgroup: Vec<usize>, detail: String },
    #[error("map has length {found}, expected {expected}")]
    MapLength { expected: usize, found: usize },
    #[error("f(x*y) != f(x)*f(y) at (x, y) = ({0}, {1})")]
    NotHomomorphism(usize, usize),

    // quotients
    #[error("class product depends on representatives: {0}")]
    NotWellDefined(Witness),
    #[error("class table is not an AG-group: {0}")]
    NotAgGroup(Box<AlgebraError>),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("{theorem} violated: {witness}")]
    TheoremViolation { theorem: TheoremId, witness: Witness },

    #[error("order {order} exceeds the enumeration cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
