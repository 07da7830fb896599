//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by parsing, validation and the combinatorial operations.
///
/// All indices in rendered messages are 1-based to match the usual
/// coding-theory conventions (bit `i`, check `j`, edge `e_i`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("column {column} of the parity-check matrix is all-zero")]
    ZeroColumn { column: usize },

    #[error("not a cycle code: column {column} has weight {weight}, expected 2")]
    NotCycleCode { column: usize, weight: usize },

    #[error(
        "columns {first} and {second} are identical (parallel edge); \
         rerun with multigraph support enabled to accept this matrix"
    )]
    ParallelEdges { first: usize, second: usize },

    #[error("operand variable counts differ: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error("series inversion requires constant term 1, found {found}")]
    NonUnitConstant { found: String },

    #[error("matrix of polynomials is not square: {rows} rows, {cols} columns")]
    NonSquareMatrix { rows: usize, cols: usize },

    #[error("vector has {got} entries, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("permutation for check {check}, bit {bit} is not a bijection on 1..={degree}")]
    NotAPermutation {
        check: usize,
        bit: usize,
        degree: usize,
    },

    #[error("cover spec keys do not match the support of H: {detail}")]
    CoverKeyMismatch { detail: String },

    #[error(
        "kernel dimension {dim} exceeds the enumeration cap {cap}; \
         sample codewords instead of enumerating"
    )]
    EnumerationTooLarge { dim: usize, cap: usize },

    #[error("lattice enumeration would visit {count} points, above the guard of {cap}")]
    LatticeTooLarge { count: u128, cap: u128 },

    #[error("edge sequence is not a closed walk: {detail}")]
    NotAClosedWalk { detail: String },

    #[error("cycle backtracks at step {step} (edge {edge} immediately reversed)")]
    Backtracking { step: usize, edge: usize },

    #[error("cycle has a tail: last edge {last} is the reverse of first edge {first}")]
    Tail { first: usize, last: usize },

    #[error("cycle enumeration bound {requested} exceeds the feasible cap {cap}")]
    OracleBoundExceeded { requested: u32, cap: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
