//! Toric manifolds over wedged polygons: plane fans, wedge puzzles and
//! exact projectivity certificates via Shephard diagrams.

pub mod exactmath;
pub mod planefan;
pub mod wedgepuzzle;
pub mod shephard;
pub mod json;
pub mod cli;
