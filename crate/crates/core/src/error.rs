//! Error types shared across the crate.

use std::fmt;

/// A defect found while validating a raw Cayley table.
///
/// Carries enough context to point at the offending cell or triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableDefect {
    /// Row `row` has `len` entries where `expected` were required.
    NotSquare { row: usize, len: usize, expected: usize },
    /// Entry at (`row`, `col`) is `value`, outside `0..order`.
    OutOfRange { row: usize, col: usize, value: usize },
    /// `value` appears twice in row `index`.
    RowRepeat { index: usize, value: usize },
    /// `value` appears twice in column `index`.
    ColumnRepeat { index: usize, value: usize },
    /// No element acts as a two-sided identity.
    NoIdentity,
    /// `element` has no two-sided inverse.
    MissingInverse { element: usize },
    /// `(a*b)*c != a*(b*c)` for the witness triple.
    NotAssociative { a: usize, b: usize, c: usize },
    /// Tables larger than the validation ceiling are refused.
    TooLarge { order: usize, max: usize },
}

impl fmt::Display for TableDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableDefect::NotSquare { row, len, expected } => {
                write!(f, "row {row} has {len} entries, expected {expected}")
            }
            TableDefect::OutOfRange { row, col, value } => {
                write!(f, "entry {value} at row {row}, column {col} is out of range")
            }
            TableDefect::RowRepeat { index, value } => {
                write!(f, "not a Latin square: value {value} repeats in row {index}")
            }
            TableDefect::ColumnRepeat { index, value } => {
                write!(f, "not a Latin square: value {value} repeats in column {index}")
            }
            TableDefect::NoIdentity => write!(f, "no two-sided identity element"),
            TableDefect::MissingInverse { element } => {
                write!(f, "element {element} has no two-sided inverse")
            }
            TableDefect::NotAssociative { a, b, c } => {
                write!(f, "associativity fails on the triple ({a}, {b}, {c})")
            }
            TableDefect::TooLarge { order, max } => {
                write!(f, "table of order {order} exceeds the validation ceiling {max}")
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("element does not belong to this group: {0}")]
    CarrierMismatch(String),

    #[error("cannot enumerate the elements of an infinite group")]
    InfiniteEnumeration,

    #[error("{0} requires a commutative group")]
    NonCommutative(&'static str),

    #[error("square is not magic: {0}")]
    NotMagic(String),

    #[error("invalid group specification: {0}")]
    InvalidSpec(String),

    #[error("invalid Cayley table: {0}")]
    Table(TableDefect),

    #[error("Cayley table file, line {line}, column {col}: {message}")]
    CayleyFile { line: usize, col: usize, message: String },

    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("not injective: {0}")]
    NotInjective(String),

    #[error("{0}")]
    Domain(String),

    #[error("syntax error at byte {offset}: expected {expected}, found {found}")]
    Syntax { offset: usize, expected: String, found: String },

    #[error("invalid group expression at byte {offset}: {message}")]
    Semantic { offset: usize, message: String },

    #[error("malformed element {input:?}: {message}")]
    ElementParse { input: String, message: String },

    #[error("malformed square document: {0}")]
    Document(String),

    #[error("search budget must be at least 1")]
    InvalidBudget,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
