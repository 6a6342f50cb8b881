//! Domination game on isolate-free forests.
//!
//! The crate is layered bottom-up:
//!
//! * [`graph`]: forests, parsing, generators and tree enumeration;
//! * [`residual`]: the W/B/R coloring, point values, legal moves and gains;
//! * [`solver`]: exact domination and game domination numbers, plus the
//!   worst case of a fixed Dominator policy over all Staller behaviors;
//! * [`strategy`]: the four-phase greedy Dominator strategy with its
//!   ledgers (extra points, critical turns) and full game traces;
//! * [`verify`]: corpus-level checking of every structural claim and bound.
//!
//! Bound arithmetic in [`bounds`] is generic over the scalar type; the
//! aliases below fix the two instantiations used across the crate.

pub mod bounds;
pub mod graph;
pub mod residual;
pub mod solver;
pub mod strategy;
pub mod verify;

/// Exact rational scalar for bound comparisons.
pub type Exact = num_rational::Ratio<i64>;
/// Floating scalar for report columns.
pub type Approx = f64;

/// Bit set over vertex ids `0..64`.
pub type Mask = u64;

pub use graph::{Forest, Graph, GraphError};
pub use residual::{Color, EngineError, MoveOutcome, ResidualState};
pub use solver::{Player, SolveResult, SolverError};
pub use strategy::{GameTrace, PhaseId, StallerPolicy};
