use alloc::string::String;
use core::fmt;

use crate::scalar::Field;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    FieldMismatch(Field, Field),
    TruncationMismatch(usize, usize),
    /// An operation needed to divide by an integer up to `needed`.
    Characteristic { p: u64, needed: u64 },
    DivisionByZero,
    TruncationTooSmall { needed: usize, have: usize },
    NotPrimitive(String),
    NotGrouplike(String),
    UnassignedGenerator(u32),
    DimensionMismatch { expected: usize, found: usize },
    /// A table lookup above the stored weight bound.
    AboveWeightBound { weight: usize, bound: usize },
    WeightViolation(String),
    SingleArgumentTerm(String),
    NotNilpotent(String),
    NotALoop(String),
    Inconsistent(String),
    Unsupported(String),
    InvalidInput(String),
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::FieldMismatch(a, b) => write!(f, "scalar ring mismatch: {a} vs {b}"),
            Error::TruncationMismatch(a, b) => write!(f, "truncation mismatch: {a} vs {b}"),
            Error::Characteristic { p, needed } => write!(
                f,
                "characteristic {p} too small: need to invert integers up to {needed}"
            ),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::TruncationTooSmall { needed, have } => {
                write!(f, "truncation {have} too small, need at least {needed}")
            }
            Error::NotPrimitive(s) => write!(f, "not primitive: {s}"),
            Error::NotGrouplike(s) => write!(f, "not group-like: {s}"),
            Error::UnassignedGenerator(g) => write!(f, "generator x{} has no assignment", g + 1),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::AboveWeightBound { weight, bound } => {
                write!(f, "weight {weight} exceeds table bound {bound}")
            }
            Error::WeightViolation(s) => write!(f, "filtration violated by {s}"),
            Error::SingleArgumentTerm(s) => write!(f, "term {s} does not involve both arguments"),
            Error::NotNilpotent(s) => write!(f, "not nilpotent: {s}"),
            Error::NotALoop(s) => write!(f, "not a loop: {s}"),
            Error::Inconsistent(s) => write!(f, "inconsistent: {s}"),
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
            Error::InvalidInput(s) => write!(f, "invalid input: {s}"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
        }
    }
}

impl core::error::Error for Error {}
