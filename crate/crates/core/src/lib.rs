//! Reversible pebbling of DAGs and its exact correspondence with
//! Nullstellensatz refutations of pebbling formulas.
//!
//! * [`graph`]: DAG model and the graph families (pyramids, lines,
//!   Carlson–Savage graphs, bit-reversal permutation graphs).
//! * [`pebbling`]: rules of the standard and reversible pebble games,
//!   strategy replay and constructive strategies.
//! * [`search`]: exact solvers over pebble configurations.
//! * [`nullstellensatz`]: polynomials over exact fields, pebbling formulas,
//!   certificate checking, and the translations between pebblings and
//!   certificates.

pub mod graph;
pub mod pebbling;
pub mod nullstellensatz;
pub mod search;
