//! Exact search: domination number, game domination numbers and the worst
//! case of a fixed Dominator policy.
//!
//! Game positions are keyed by `(dominated mask, player to move)`; the
//! remaining optimal length depends on nothing else.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::residual::{bit, vertices, Board, EngineError, ResidualState};
use crate::Mask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Dominator,
    Staller,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Dominator => Player::Staller,
            Player::Staller => Player::Dominator,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl std::str::FromStr for Player {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dominator" => Ok(Player::Dominator),
            "staller" => Ok(Player::Staller),
            _ => Err(format!("unknown player {s:?} (dominator|staller)")),
        }
    }
}

impl std::fmt::Display for Player {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Player::Dominator => "Dominator",
            Player::Staller => "Staller",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("graph has {n} vertices; exact search supports at most 64")]
    TooLarge { n: usize },
    #[error("vertex {v} is isolated")]
    IsolatedVertexPresent { v: usize },
    #[error("the game is already over")]
    GameOver,
    #[error(transparent)]
    Engine(EngineError),
}

impl From<EngineError> for SolverError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::TooLarge { n } => SolverError::TooLarge { n },
            EngineError::IsolatedVertexPresent { v } => SolverError::IsolatedVertexPresent { v },
            EngineError::GameOver => SolverError::GameOver,
            other => SolverError::Engine(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub value: u32,
    pub optimal_first_moves: Vec<usize>,
    pub nodes_expanded: u64,
}

fn board_for(graph: &Graph) -> Result<Arc<Board>, SolverError> {
    if graph.n() > 64 {
        return Err(SolverError::TooLarge { n: graph.n() });
    }
    if let Some(&v) = graph.isolated_vertices().first() {
        return Err(SolverError::IsolatedVertexPresent { v });
    }
    Ok(Arc::new(Board::new(graph.clone())?))
}

/// `(move, successor mask)` pairs, one per distinct successor, lowest id first.
fn distinct_successors(board: &Board, dominated: Mask) -> Vec<(usize, Mask)> {
    let mut out: Vec<(usize, Mask)> = Vec::new();
    for v in vertices(board.legal_mask(dominated)) {
        let next = dominated | board.closed(v);
        if !out.iter().any(|&(_, m)| m == next) {
            out.push((v, next));
        }
    }
    out
}

/// Memoized minimax over the domination game on one graph.
pub struct GameSolver {
    board: Arc<Board>,
    memo: [FxHashMap<Mask, u8>; 2],
    nodes: u64,
}

impl GameSolver {
    pub fn new(graph: &Graph) -> Result<Self, SolverError> {
        Ok(Self::on_board(board_for(graph)?))
    }

    pub fn on_board(board: Arc<Board>) -> Self {
        GameSolver { board, memo: [FxHashMap::default(), FxHashMap::default()], nodes: 0 }
    }

    pub fn board(&self) -> &Arc<Board> {
        &self.board
    }

    pub fn nodes_expanded(&self) -> u64 {
        self.nodes
    }

    /// Remaining number of turns under optimal play.
    pub fn value(&mut self, dominated: Mask, to_move: Player) -> u32 {
        if dominated == self.board.all() {
            return 0;
        }
        if let Some(&v) = self.memo[to_move.index()].get(&dominated) {
            return v as u32;
        }
        self.nodes += 1;
        let succ = distinct_successors(&self.board, dominated);
        let next = to_move.other();
        let best = match to_move {
            Player::Dominator => {
                if succ.iter().any(|&(_, m)| m == self.board.all()) {
                    1
                } else {
                    let mut best = u32::MAX;
                    for &(_, m) in &succ {
                        best = best.min(1 + self.value(m, next));
                        if best == 2 {
                            break;
                        }
                    }
                    best
                }
            }
            Player::Staller => succ.iter().map(|&(_, m)| 1 + self.value(m, next)).max().unwrap_or(0),
        };
        self.memo[to_move.index()].insert(dominated, best as u8);
        best
    }

    /// Every legal move with the resulting game length (this move included).
    pub fn move_values(&mut self, dominated: Mask, player: Player) -> Vec<(usize, u32)> {
        vertices(self.board.legal_mask(dominated))
            .map(|v| (v, 1 + self.value(dominated | self.board.closed(v), player.other())))
            .collect()
    }

    pub fn solve(&mut self, first: Player) -> SolveResult {
        let value = self.value(0, first);
        let optimal_first_moves = self
            .move_values(0, first)
            .into_iter()
            .filter(|&(_, val)| val == value)
            .map(|(v, _)| v)
            .collect();
        SolveResult { value, optimal_first_moves, nodes_expanded: self.nodes }
    }

    /// A move attaining the optimal value for `player` at `state`; ties go to
    /// the lowest vertex id. The value counts the move itself.
    pub fn best_reply(&mut self, state: &ResidualState, player: Player) -> Result<(usize, u32), SolverError> {
        if state.is_terminal() {
            return Err(SolverError::GameOver);
        }
        let options = self.move_values(state.dominated(), player);
        let pick = match player {
            Player::Dominator => options.iter().min_by_key(|&&(v, val)| (val, v)),
            Player::Staller => options.iter().min_by_key(|&&(v, val)| (std::cmp::Reverse(val), v)),
        };
        Ok(*pick.expect("non-terminal states have legal moves"))
    }
}

/// `γ_g` (Dominator first) or `γ_g'` (Staller first).
pub fn game_dom_number(graph: &Graph, first: Player) -> Result<SolveResult, SolverError> {
    Ok(GameSolver::new(graph)?.solve(first))
}

/// Convenience wrapper around [`GameSolver::best_reply`].
pub fn best_reply(state: &ResidualState, player: Player) -> Result<(usize, u32), SolverError> {
    GameSolver::on_board(Arc::clone(state.board())).best_reply(state, player)
}

/// Smallest dominating set, found by iterative deepening over the lowest
/// undominated vertex.
pub fn minimum_dominating_set(graph: &Graph) -> Result<Vec<usize>, SolverError> {
    let board = Board::new(graph.clone()).map_err(SolverError::from)?;
    let max_cover = (0..graph.n()).map(|v| board.closed(v).count_ones()).max().unwrap_or(1);
    let mut failed: FxHashMap<Mask, u32> = FxHashMap::default();

    fn search(
        board: &Board,
        dominated: Mask,
        budget: u32,
        max_cover: u32,
        failed: &mut FxHashMap<Mask, u32>,
        chosen: &mut Vec<usize>,
    ) -> bool {
        let open = board.all() & !dominated;
        if open == 0 {
            return true;
        }
        if budget == 0 || open.count_ones() > budget * max_cover {
            return false;
        }
        if failed.get(&dominated).is_some_and(|&b| b >= budget) {
            return false;
        }
        let u = open.trailing_zeros() as usize;
        for w in vertices(board.closed(u)) {
            chosen.push(w);
            if search(board, dominated | board.closed(w), budget - 1, max_cover, failed, chosen) {
                return true;
            }
            chosen.pop();
        }
        failed.insert(dominated, budget);
        false
    }

    for k in 0..=graph.n() as u32 {
        let mut chosen = Vec::new();
        if search(&board, 0, k, max_cover, &mut failed, &mut chosen) {
            chosen.sort_unstable();
            return Ok(chosen);
        }
    }
    unreachable!("the whole vertex set dominates")
}

pub fn domination_number(graph: &Graph) -> Result<usize, SolverError> {
    Ok(minimum_dominating_set(graph)?.len())
}

/// A deterministic Dominator strategy with a small amount of memory.
pub trait DominatorPolicy {
    type Memory: Copy + Eq + Hash + Debug;

    fn start(&self, first: Player) -> Self::Memory;

    /// Dominator's move at a non-terminal `state`, and the updated memory.
    fn choose(&self, state: &ResidualState, memory: Self::Memory) -> (usize, Self::Memory);
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WorstCase {
    pub turns: u32,
    /// One game line attaining `turns`: `(player, vertex)` per turn.
    pub line: Vec<(Player, usize)>,
}

/// Longest game over all Staller behaviors against a fixed Dominator policy.
pub struct WorstCaseSearch<P: DominatorPolicy> {
    policy: P,
    board: Arc<Board>,
    memo: FxHashMap<(Mask, P::Memory, Player), u32>,
}

impl<P: DominatorPolicy> WorstCaseSearch<P> {
    pub fn new(policy: P, board: Arc<Board>) -> Self {
        WorstCaseSearch { policy, board, memo: FxHashMap::default() }
    }

    fn dominator_step(&self, dominated: Mask, memory: P::Memory) -> (usize, P::Memory) {
        let state = ResidualState::with_dominated(Arc::clone(&self.board), dominated, 0);
        self.policy.choose(&state, memory)
    }

    /// Remaining turns when Staller maximizes against the policy.
    pub fn remaining(&mut self, dominated: Mask, memory: P::Memory, to_move: Player) -> u32 {
        if dominated == self.board.all() {
            return 0;
        }
        let key = (dominated, memory, to_move);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let value = match to_move {
            Player::Dominator => {
                let (v, mem) = self.dominator_step(dominated, memory);
                1 + self.remaining(dominated | self.board.closed(v), mem, Player::Staller)
            }
            Player::Staller => distinct_successors(&self.board, dominated)
                .into_iter()
                .map(|(_, m)| 1 + self.remaining(m, memory, Player::Dominator))
                .max()
                .unwrap_or(0),
        };
        self.memo.insert(key, value);
        value
    }

    /// Staller's maximizing reply (lowest id among ties) and its line value.
    pub fn staller_reply(&mut self, dominated: Mask, memory: P::Memory) -> Option<(usize, u32)> {
        let mut best: Option<(usize, u32)> = None;
        for v in vertices(self.board.legal_mask(dominated)) {
            let val = 1 + self.remaining(dominated | self.board.closed(v), memory, Player::Dominator);
            if best.is_none_or(|(_, b)| val > b) {
                best = Some((v, val));
            }
        }
        best
    }

    pub fn run(&mut self, first: Player) -> WorstCase {
        let mut memory = self.policy.start(first);
        let turns = self.remaining(0, memory, first);
        let mut line = Vec::new();
        let (mut dominated, mut to_move) = (0u64, first);
        while dominated != self.board.all() {
            let v = match to_move {
                Player::Dominator => {
                    let (v, mem) = self.dominator_step(dominated, memory);
                    memory = mem;
                    v
                }
                Player::Staller => self.staller_reply(dominated, memory).expect("legal move exists").0,
            };
            line.push((to_move, v));
            dominated |= bit(v) | self.board.closed(v);
            to_move = to_move.other();
        }
        debug_assert_eq!(line.len() as u32, turns);
        WorstCase { turns, line }
    }
}

/// Maximum game length when Dominator follows `policy`.
pub fn worst_case_turns<P: DominatorPolicy + Clone>(
    graph: &Graph,
    policy: &P,
    first: Player,
) -> Result<WorstCase, SolverError> {
    let board = board_for(graph)?;
    Ok(WorstCaseSearch::new(policy.clone(), board).run(first))
}
