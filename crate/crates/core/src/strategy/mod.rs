//! The four-phase greedy Dominator strategy.
//!
//! Each phase is a requirement on Dominator's gain: Phase 1 needs at least
//! 7 points with at least two vertices turning Red, Phase 2 at least 7,
//! Phase 3 at least 6 (taking the maximum, preferring a White stem with a
//! White leaf), Phase 4 anything. At each Dominator turn the current phase
//! is advanced to the first applicable one; phases never go back.

mod staller;
mod trace;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Forest;
use crate::residual::{vertices, Board, Color, EngineError, ResidualState};
use crate::solver::{DominatorPolicy, Player, SolverError};

pub use staller::{FnStaller, StallerPolicy, StallerStrategy};
pub use trace::{
    turn_cases, GameTrace, LedgerSummary, PhaseLedger, TraceBuilder, TurnCases, TurnRecord,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("the game is already over")]
    GameOver,
    #[error("{phase} is not applicable in this position")]
    PhaseNotApplicable { phase: PhaseId },
    #[error("input is not a forest")]
    NotAForest,
    #[error("vertex {v} is isolated")]
    IsolatedVertexPresent { v: usize },
    #[error("record index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("trace is incomplete: {0}")]
    IncompleteTrace(String),
    #[error(transparent)]
    Engine(EngineError),
    #[error(transparent)]
    Solver(SolverError),
}

impl From<EngineError> for StrategyError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::IsolatedVertexPresent { v } => StrategyError::IsolatedVertexPresent { v },
            EngineError::GameOver => StrategyError::GameOver,
            other => StrategyError::Engine(other),
        }
    }
}

impl From<SolverError> for StrategyError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::IsolatedVertexPresent { v } => StrategyError::IsolatedVertexPresent { v },
            SolverError::GameOver => StrategyError::GameOver,
            other => StrategyError::Solver(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PhaseId {
    /// Staller's opening turn in a Staller-start game.
    Phase0,
    Phase1,
    Phase2,
    Phase3,
    Phase4,
}

impl PhaseId {
    pub const PLAYABLE: [PhaseId; 4] = [PhaseId::Phase1, PhaseId::Phase2, PhaseId::Phase3, PhaseId::Phase4];

    pub fn number(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for PhaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase{}", self.number())
    }
}

/// Maximum available gain and every move attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaxGain {
    pub gain: u32,
    /// `(vertex, newly red count)`, ascending by vertex.
    pub moves: Vec<(usize, u32)>,
}

pub fn max_gain_moves(state: &ResidualState) -> Result<MaxGain, StrategyError> {
    let board = state.board();
    let mut best = MaxGain { gain: 0, moves: Vec::new() };
    for v in vertices(state.legal_mask()) {
        let (gain, reds) = board.quick_gain(state.dominated(), v);
        if gain > best.gain {
            best = MaxGain { gain, moves: vec![(v, reds)] };
        } else if gain == best.gain {
            best.moves.push((v, reds));
        }
    }
    if best.moves.is_empty() {
        return Err(StrategyError::GameOver);
    }
    Ok(best)
}

/// Highest gain over legal moves, 0 at a terminal state.
pub fn max_gain(state: &ResidualState) -> u32 {
    max_gain_moves(state).map(|m| m.gain).unwrap_or(0)
}

fn meets(phase: PhaseId, gain: u32, reds: u32) -> bool {
    match phase {
        PhaseId::Phase1 => gain >= 7 && reds >= 2,
        PhaseId::Phase2 => gain >= 7,
        PhaseId::Phase3 => gain >= 6,
        PhaseId::Phase4 => gain >= 3,
        PhaseId::Phase0 => false,
    }
}

fn qualifying(state: &ResidualState, phase: PhaseId) -> impl Iterator<Item = (usize, u32, u32)> + '_ {
    let board = state.board();
    vertices(state.legal_mask()).filter_map(move |v| {
        let (g, r) = board.quick_gain(state.dominated(), v);
        meets(phase, g, r).then_some((v, g, r))
    })
}

/// Whether Dominator can meet the requirement of `phase` at `state`.
pub fn phase_applicable(state: &ResidualState, phase: PhaseId) -> bool {
    qualifying(state, phase).next().is_some()
}

/// Smallest applicable phase not below `current` (Phase 0 counts as 1).
pub fn advance_phase(current: PhaseId, state: &ResidualState) -> Result<PhaseId, StrategyError> {
    if state.is_terminal() {
        return Err(StrategyError::GameOver);
    }
    let from = current.max(PhaseId::Phase1);
    Ok(PhaseId::PLAYABLE
        .into_iter()
        .filter(|&p| p >= from)
        .find(|&p| phase_applicable(state, p))
        .expect("Phase 4 is applicable whenever a legal move exists"))
}

/// White vertex with a White leaf neighbor.
pub fn is_white_stem_with_white_leaf(state: &ResidualState, v: usize) -> bool {
    state.color(v) == Color::White
        && state
            .graph()
            .neighbors(v)
            .iter()
            .any(|&w| state.color(w) == Color::White && state.graph().degree(w) == 1)
}

/// Dominator's move in `phase`.
pub fn dominator_choose(state: &ResidualState, phase: PhaseId) -> Result<usize, StrategyError> {
    if state.is_terminal() {
        return Err(StrategyError::GameOver);
    }
    let not_applicable = StrategyError::PhaseNotApplicable { phase };
    match phase {
        PhaseId::Phase0 => Err(not_applicable),
        PhaseId::Phase1 | PhaseId::Phase2 => qualifying(state, phase)
            .min_by_key(|&(v, g, r)| (std::cmp::Reverse(g), std::cmp::Reverse(r), v))
            .map(|(v, _, _)| v)
            .ok_or(not_applicable),
        PhaseId::Phase3 => {
            if !phase_applicable(state, phase) {
                return Err(not_applicable);
            }
            let best = max_gain_moves(state)?;
            let preferred = best.moves.iter().map(|&(v, _)| v).find(|&v| is_white_stem_with_white_leaf(state, v));
            Ok(preferred.unwrap_or(best.moves[0].0))
        }
        PhaseId::Phase4 => Ok(state.legal_moves()[0]),
    }
}

/// The phased strategy as a policy for exhaustive adversary search.
#[derive(Debug, Clone, Copy, Default)]
pub struct PhasedDominator;

impl DominatorPolicy for PhasedDominator {
    type Memory = PhaseId;

    fn start(&self, first: Player) -> PhaseId {
        match first {
            Player::Dominator => PhaseId::Phase1,
            Player::Staller => PhaseId::Phase0,
        }
    }

    fn choose(&self, state: &ResidualState, memory: PhaseId) -> (usize, PhaseId) {
        let phase = advance_phase(memory, state).expect("policy is only asked at live states");
        let v = dominator_choose(state, phase).expect("advanced phase is applicable");
        (v, phase)
    }
}

fn check_forest(forest: &Forest) -> Result<Arc<Board>, StrategyError> {
    if let Some(&v) = forest.isolated_vertices().first() {
        return Err(StrategyError::IsolatedVertexPresent { v });
    }
    Ok(Arc::new(Board::new(forest.graph().clone())?))
}

/// Plays a full game: phased Dominator against the given Staller policy.
pub fn run_game(
    forest: &Forest,
    staller: StallerPolicy,
    first: Player,
    seed: u64,
) -> Result<GameTrace, StrategyError> {
    let board = check_forest(forest)?;
    let mut strategy = staller.instantiate(Arc::clone(&board), seed);
    run_on_board(forest, board, strategy.as_mut(), first)
}

/// Like [`run_game`] with a caller-supplied Staller.
pub fn run_game_with(
    forest: &Forest,
    staller: &mut dyn StallerStrategy,
    first: Player,
) -> Result<GameTrace, StrategyError> {
    let board = check_forest(forest)?;
    run_on_board(forest, board, staller, first)
}

fn run_on_board(
    forest: &Forest,
    board: Arc<Board>,
    staller: &mut dyn StallerStrategy,
    first: Player,
) -> Result<GameTrace, StrategyError> {
    let mut game = TraceBuilder::on_board(forest.clone(), board, first);
    while !game.is_over() {
        let v = match game.to_move() {
            Player::Dominator => game.strategy_move()?,
            Player::Staller => staller.choose(game.state(), game.phase())?,
        };
        game.push(v)?;
    }
    Ok(game.finish())
}

/// Phased Dominator vs. Staller forcing the longest game against it.
pub fn run_worst_case(forest: &Forest, first: Player) -> Result<GameTrace, StrategyError> {
    run_game(forest, StallerPolicy::Worst, first, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{to_edge_list, Graph};

    fn snapshot(n: usize, edges: &[(usize, usize)], colors: &str) -> ResidualState {
        let g = Graph::new(n, edges.iter().copied()).unwrap();
        ResidualState::from_snapshot(&format!("{}colors {colors}\n", to_edge_list(&g))).unwrap()
    }

    fn fresh(f: &Forest) -> ResidualState {
        ResidualState::new(f).unwrap()
    }

    #[test]
    fn max_gain_examples() {
        let m = max_gain_moves(&fresh(&Forest::path(3))).unwrap();
        assert_eq!(m, MaxGain { gain: 9, moves: vec![(1, 3)] });
        let m = max_gain_moves(&fresh(&Forest::path(5))).unwrap();
        assert_eq!(m, MaxGain { gain: 7, moves: vec![(1, 2), (3, 2)] });
        let bw = snapshot(2, &[(0, 1)], "BW");
        let m = max_gain_moves(&bw).unwrap();
        assert_eq!(m.gain, 5);
        assert_eq!(m.moves.iter().map(|m| m.0).collect::<Vec<_>>(), vec![0, 1]);
        let (done, _) = fresh(&Forest::path(2)).apply_move(0).unwrap();
        assert_eq!(max_gain_moves(&done), Err(StrategyError::GameOver));
    }

    #[test]
    fn applicability() {
        let p5 = fresh(&Forest::path(5));
        assert!(phase_applicable(&p5, PhaseId::Phase1));
        let p2 = fresh(&Forest::path(2));
        assert!(!phase_applicable(&p2, PhaseId::Phase1));
        assert!(!phase_applicable(&p2, PhaseId::Phase2));
        assert!(phase_applicable(&p2, PhaseId::Phase3));
        let bw = snapshot(2, &[(0, 1)], "BW");
        let applicable: Vec<_> = PhaseId::PLAYABLE.into_iter().filter(|&p| phase_applicable(&bw, p)).collect();
        assert_eq!(applicable, vec![PhaseId::Phase4]);
    }

    #[test]
    fn phase_advancing() {
        assert_eq!(advance_phase(PhaseId::Phase1, &fresh(&Forest::path(2))).unwrap(), PhaseId::Phase3);
        // max gain 7 available but we are already in Phase 3
        assert_eq!(advance_phase(PhaseId::Phase3, &fresh(&Forest::path(5))).unwrap(), PhaseId::Phase3);
        let bw = snapshot(2, &[(0, 1)], "BW");
        assert_eq!(advance_phase(PhaseId::Phase3, &bw).unwrap(), PhaseId::Phase4);
        assert_eq!(advance_phase(PhaseId::Phase0, &fresh(&Forest::path(5))).unwrap(), PhaseId::Phase1);
        let (done, _) = fresh(&Forest::path(2)).apply_move(1).unwrap();
        assert_eq!(advance_phase(PhaseId::Phase1, &done), Err(StrategyError::GameOver));
    }

    #[test]
    fn dominator_choices() {
        assert_eq!(dominator_choose(&fresh(&Forest::path(5)), PhaseId::Phase1).unwrap(), 1);
        // Blue 0 (dominated through Red 9) with White neighbors 1..4, each
        // paired with a White leaf 5..8: playing 0 gains 2+4, playing a stem
        // gains 3+3.
        let s = snapshot(
            10,
            &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (2, 6), (3, 7), (4, 8), (0, 9)],
            "BWWWWWWWWR",
        );
        let m = max_gain_moves(&s).unwrap();
        assert_eq!(m.gain, 6);
        assert_eq!(m.moves[0].0, 0);
        let v = dominator_choose(&s, PhaseId::Phase3).unwrap();
        assert_eq!(v, 1);
        assert!(is_white_stem_with_white_leaf(&s, v));
        let bw = snapshot(4, &[(0, 1), (2, 3)], "WBBW");
        assert_eq!(dominator_choose(&bw, PhaseId::Phase4).unwrap(), 0);
        assert_eq!(
            dominator_choose(&bw, PhaseId::Phase2),
            Err(StrategyError::PhaseNotApplicable { phase: PhaseId::Phase2 })
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = Forest::new(3, [(0, 1)]).unwrap();
        assert_eq!(
            run_game(&f, StallerPolicy::GreedyMin, Player::Dominator, 0).unwrap_err(),
            StrategyError::IsolatedVertexPresent { v: 2 }
        );
    }
}
