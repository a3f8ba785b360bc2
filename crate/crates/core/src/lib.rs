//! Solve, verify, rate and generate Partiti puzzles.
//!
//! A Partiti grid gives each cell a clue; the player fills every cell with
//! distinct digits 1..=9 summing to the clue, and no digit may repeat between
//! cells that touch, corners included.
//!
//! - [`partition`]: exact partition counts, bounded enumeration, growth estimates
//! - [`series`]: truncated power series and the generating-function products
//! - [`grid`]: digit sets, grids, adjacency and rule validation
//! - [`solver`]: propagation, search, brute-force oracle and hints
//! - [`generator`]: seeded unique-solution puzzle generation and rating
//! - [`format`]: the JSON interchange format
//! - [`service`]: the HTTP API

pub mod format;
pub mod generator;
pub mod grid;
pub mod partition;
pub mod series;
pub mod service;
pub mod solver;

pub use grid::{AssignmentGrid, CellIndex, ClueGrid, DigitSet, GridDims, Violation, ViolationKind};
pub use solver::{SolveResult, SolveStatus, SolverConfig};
