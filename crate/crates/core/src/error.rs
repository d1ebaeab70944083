use thiserror::Error;

/// Errors produced by the library. Every fallible operation returns one of
/// these; none of the exact-arithmetic paths panic on valid input.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("ring tag mismatch: {left} vs {right}")]
    TagMismatch { left: u32, right: u32 },

    #[error("rotation of order {l} is not supported on the {lattice} lattice")]
    UnsupportedRotation { lattice: &'static str, l: u32 },

    #[error("matrix is not unimodular (det = {det})")]
    NonUnimodular { det: String },

    #[error("{what} exceeded the configured cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("torsion part has rank < 2; action matrix is undefined")]
    RankDeficient,

    #[error("subgroup does not match any taxonomy shape: {detail}")]
    ClassificationFailure { detail: String },

    #[error("label {label} is not realizable: {reason}")]
    NotRealizable { label: String, reason: String },

    #[error("group order {order} exceeds the isomorphism-check bound {bound}")]
    IsoBoundExceeded { order: usize, bound: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("point ({x}, {y}) does not lie on the curve")]
    NotOnCurve { x: String, y: String },

    #[error("map did not reach the identity within {cap} compositions")]
    OrderCapExceeded { cap: u32 },

    #[error("fiber degrees disagree across random samples; map looks degenerate")]
    DegenerateDegree,

    #[error("degree of a constant function is undefined")]
    ConstantFunction,

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
