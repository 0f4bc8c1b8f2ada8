use thiserror::Error;

/// Errors raised by the numerical core.
///
/// Matrix positions are zero-based in the Rust API; the `Display`
/// implementations print them one-based, matching how judgments are
/// written by hand.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("matrix is empty")]
    Empty,

    #[error("entry ({}, {}) = {value} is not a positive finite number", .row + 1, .col + 1)]
    NonPositiveEntry { row: usize, col: usize, value: f64 },

    #[error("entry ({}, {}) = {value} is not finite", .row + 1, .col + 1)]
    NonFinite { row: usize, col: usize, value: f64 },

    #[error("entry ({}, {}) = {value} cannot be exponentiated without leaving the f64 range", .row + 1, .col + 1)]
    Overflow { row: usize, col: usize, value: f64 },

    #[error("matrix is not reciprocal: m({},{}) * m({},{}) = {product}", .row + 1, .col + 1, .col + 1, .row + 1)]
    NotReciprocal {
        row: usize,
        col: usize,
        product: f64,
    },

    #[error("matrix is not consistent: triad ({}, {}, {}) has inconsistency {inconsistency}", .i + 1, .j + 1, .k + 1)]
    NotConsistent {
        i: usize,
        j: usize,
        k: usize,
        inconsistency: f64,
    },

    #[error("dimension {n} is too small, at least 2 is required")]
    DimensionTooSmall { n: usize },

    #[error("basis index {k} out of range 1..={}", .n.saturating_sub(1))]
    IndexOutOfRange { n: usize, k: usize },

    #[error("dimension mismatch: matrix is {matrix}x{matrix}, basis is for {basis}x{basis}")]
    DimensionMismatch { matrix: usize, basis: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
