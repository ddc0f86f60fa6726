//! quboku compiles grid placement puzzles (N-queens and its generalizations,
//! LinkedIn-style Queens, Tents & Trees, chess-piece independence problems)
//! and binary balance puzzles (Takuzu/Binairo, LinkedIn Tango) into exact
//! QUBO objectives, eliminates variables implied by the givens, minimizes the
//! result with an exhaustive scanner or simulated annealing, and verifies
//! candidate solutions against an independent constraint oracle.
//!
//! All model arithmetic is exact quarter-integer fixed point, so "the energy
//! equals the predicted floor" is a crisp equality, never a tolerance.

pub mod agreement;
pub mod board;
pub mod oracle;
pub mod pieces;
pub mod puzzle;
pub mod qubo;
pub mod queens;
pub mod solve;
pub mod takuzu;
pub mod tents;
pub mod vars;

pub use board::{Board, CellRef, DiagMode, DiagReach, Region};
pub use puzzle::{Compiled, Puzzle};
pub use qubo::{Literal, QuarterInt, Qubo, QuboError};
pub use solve::{predicted_min_energy, AnnealParams, FloorDescriptor, SolveResult};
pub use vars::{Infeasible, VarMap};
