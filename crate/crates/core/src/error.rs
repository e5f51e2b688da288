use alloc::string::String;

use crate::planar::Color;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("group too large: closure exceeds {limit} elements")]
    GroupTooLarge { limit: usize },
    #[error("invalid permutation `{text}`: {reason}")]
    BadPermutation { text: String, reason: String },
    #[error("permutation is not an element of the group")]
    NotInGroup,
    #[error("subset is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("domain is not closed under the action")]
    NotActionClosed,
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("color mismatch: expected {expected}, got {got}")]
    ColorMismatch { expected: Color, got: Color },
    #[error("operation undefined at color {0}")]
    BadColor(Color),
    #[error("level mismatch between matrices")]
    LevelMismatch,
    #[error("matrix is not in the relative commutant: {0}")]
    NotRelativeCommutant(String),
    #[error("trace is not a scalar: the 0+ component is not proportional to the unit ({0})")]
    TraceNotScalar(String),
    #[error("no modulus: spin function is not a Perron-Frobenius eigenvector")]
    NoModulus,
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}
