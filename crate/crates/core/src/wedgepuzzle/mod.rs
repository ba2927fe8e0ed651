//! Wedged polygons `P_m(J)`: the simplicial complex, characteristic
//! matrices over it, shifts between plane fans and puzzles.

mod charmatrix;
mod complex;
mod enumerate;
mod puzzle;
mod shift;

use thiserror::Error;

use crate::planefan::FanError;

pub use charmatrix::{check_nonsingular, fan_at, projection, CharMatrix};
pub use complex::{Label, WedgeComplex, WedgeSignature};
pub use enumerate::{enumerate_puzzles, puzzle_key, PuzzleKey};
pub use puzzle::{
    assemble_from_axes, assemble_matrix, is_irreducible, realizable_square, validate_puzzle,
    Puzzle, PuzzleEdge,
};
pub use shift::{is_edge, shift};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PuzzleError {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("invalid label {0:?}")]
    InvalidLabel(String),
    #[error("color {color} has no opposite ray, only e = 0 is allowed")]
    NoOppositeRay { color: usize },
    #[error("invalid puzzle: {0}")]
    InvalidPuzzle(String),
    #[error("the four fans do not form a square of shifts")]
    NotASquare,
    #[error("vertex of {0} has a single copy")]
    NotWedged(Label),
    #[error("matrix columns do not match the complex: {0}")]
    LabelMismatch(String),
    #[error("invalid characteristic matrix: {0}")]
    InvalidMatrix(String),
    #[error(transparent)]
    Fan(#[from] FanError),
}
