//! Corpus-level checking of the strategy's claims and the game-length bounds.
//!
//! [`checks`] holds the per-trace, per-position and per-forest checks;
//! [`corpus`] runs them over generated or enumerated corpora and writes CSV
//! reports with replay bundles; [`scan`] tabulates the largest game
//! domination number over all trees of each order.

mod checks;
mod corpus;
mod scan;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::GraphError;
use crate::solver::SolverError;
use crate::strategy::StrategyError;

pub use checks::{
    check_bounds_exact, check_midgame_structure, check_phase2_end_structure, check_trace_invariants,
    check_trace_structure, exploratory_phase1_end_structure, BoundsRow,
};
pub use corpus::{
    corpus_run, ClassFilter, CheckReport, CorpusSource, CorpusSpec, Failure, Instance, InstanceRow, Suite,
    CSV_COLUMNS,
};
pub use scan::{extremal_scan, ScanRow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("precondition not met: a move gains {max_gain} points")]
    PreconditionNotMet { max_gain: u32 },
    #[error("generator failure: {0}")]
    GeneratorFailure(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for VerifyError {
    fn from(e: std::io::Error) -> Self {
        VerifyError::Io(e.to_string())
    }
}

/// The individual claims that are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    CompleteGame,
    TotalDecrease,
    PhaseMonotone,
    GainAtLeastThree,
    StallerOpeningGain,
    PhaseOneDominatorGain,
    PhaseOneExtras,
    PhaseOneDecrease,
    PhaseTwoDominatorGain,
    PhaseTwoDecrease,
    PhaseThreeDominatorGain,
    PhaseThreeDecrease,
    PhaseFourGain,
    PhaseFourStructure,
    CriticalCenterCount,
    CriticalTurnCount,
    ThreePointTurnCases,
    TurnCountIdentity,
    VertexCountChain,
    NoCriticalP5WithoutLeafPairs,
    PhaseTwoEndGain,
    WhiteComponentsSmall,
    LeavesWhite,
    BlueNextToSingleWhite,
    BlueDegree,
    BlueLeafGain,
    NoBlueLeafGain,
    ClassicalBounds,
    FiveEighths,
    ThreeFifths,
    StrategyFiveEighths,
    StrategyThreeFifths,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::CompleteGame => "complete-game",
            Check::TotalDecrease => "total-decrease",
            Check::PhaseMonotone => "phase-monotone",
            Check::GainAtLeastThree => "gain-at-least-three",
            Check::StallerOpeningGain => "staller-opening-gain",
            Check::PhaseOneDominatorGain => "phase-one-dominator-gain",
            Check::PhaseOneExtras => "phase-one-extras",
            Check::PhaseOneDecrease => "phase-one-decrease",
            Check::PhaseTwoDominatorGain => "phase-two-dominator-gain",
            Check::PhaseTwoDecrease => "phase-two-decrease",
            Check::PhaseThreeDominatorGain => "phase-three-dominator-gain",
            Check::PhaseThreeDecrease => "phase-three-decrease",
            Check::PhaseFourGain => "phase-four-gain",
            Check::PhaseFourStructure => "phase-four-structure",
            Check::CriticalCenterCount => "critical-center-count",
            Check::CriticalTurnCount => "critical-turn-count",
            Check::ThreePointTurnCases => "three-point-turn-cases",
            Check::TurnCountIdentity => "turn-count-identity",
            Check::VertexCountChain => "vertex-count-chain",
            Check::NoCriticalP5WithoutLeafPairs => "no-critical-p5-without-leaf-pairs",
            Check::PhaseTwoEndGain => "phase-two-end-gain",
            Check::WhiteComponentsSmall => "white-components-small",
            Check::LeavesWhite => "leaves-white",
            Check::BlueNextToSingleWhite => "blue-next-to-single-white",
            Check::BlueDegree => "blue-degree",
            Check::BlueLeafGain => "blue-leaf-gain",
            Check::NoBlueLeafGain => "no-blue-leaf-gain",
            Check::ClassicalBounds => "classical-bounds",
            Check::FiveEighths => "five-eighths",
            Check::ThreeFifths => "three-fifths",
            Check::StrategyFiveEighths => "strategy-five-eighths",
            Check::StrategyThreeFifths => "strategy-three-fifths",
        }
    }

    /// Checks about exact game values rather than strategy traces.
    pub fn is_bound(self) -> bool {
        matches!(
            self,
            Check::ClassicalBounds
                | Check::FiveEighths
                | Check::ThreeFifths
                | Check::StrategyFiveEighths
                | Check::StrategyThreeFifths
        )
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: Check,
    /// Turn number of the offending record, if the check is per turn.
    pub turn: Option<usize>,
    pub detail: String,
}

impl Violation {
    pub fn new(check: Check, turn: Option<usize>, detail: impl Into<String>) -> Self {
        Violation { check, turn, detail: detail.into() }
    }

    /// Prefixes the detail with the position it was found in.
    pub fn after_moves(mut self, moves: usize) -> Self {
        self.detail = format!("after {moves} moves: {}", self.detail);
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.turn {
            Some(t) => write!(f, "{} (turn {t}): {}", self.check, self.detail),
            None => write!(f, "{}: {}", self.check, self.detail),
        }
    }
}
