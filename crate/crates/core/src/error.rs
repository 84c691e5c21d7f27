use thiserror::Error;

use crate::pattern::StitchIndex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("separation undefined: pattern has fewer than 2 stitches")]
    SeparationUndefined,

    #[error("stitches not disjoint: {0} and {1}")]
    StitchesNotDisjoint(StitchIndex, StitchIndex),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("stitch {0} is not in the pattern")]
    IndexNotInPattern(StitchIndex),

    #[error("({0}, {1}) is not an index of the checkered lattice")]
    NotInLattice(f64, f64),

    #[error("pattern window radius {available} is too small; required radius is {required}")]
    InsufficientWindow { required: f64, available: f64 },

    #[error("offset {0} lies outside the distance table")]
    OutsideTable(String),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("not a network path: segment {0} is not a network part")]
    NotNetworkPath(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
