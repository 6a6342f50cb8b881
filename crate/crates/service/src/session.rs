use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use domgame_core::bounds::{FIVE_EIGHTHS, FIVE_EIGHTHS_STALLER, THREE_FIFTHS, THREE_FIFTHS_STALLER};
use domgame_core::graph::leaf_pair_at_distance;
use domgame_core::solver::GameSolver;
use domgame_core::strategy::{StallerStrategy, TraceBuilder, TurnRecord};
use domgame_core::{Color, Forest, PhaseId, Player, StallerPolicy};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SessionError {
    #[error("it is not your turn")]
    NotYourTurn,
    #[error("the game is over")]
    GameOver,
    #[error("vertex {0} is not a legal move")]
    IllegalVertex(usize),
    #[error("{0}")]
    BadInput(String),
}

/// How the engine plays its side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EngineConfig {
    /// Used when the engine is Staller; as Dominator it plays the phased strategy.
    pub policy: StallerPolicy,
    pub seed: u64,
}

/// One game between a human and the engine.
pub struct Session {
    game: TraceBuilder,
    human: Player,
    config: EngineConfig,
    staller: Box<dyn StallerStrategy>,
    solver: GameSolver,
    moves: Vec<usize>,
    pub(crate) last_active: Instant,
}

impl Session {
    /// Starts a game; if the engine moves first it plays until the human is
    /// to move or the game is over.
    pub fn new(forest: Forest, human: Player, start: Player, config: EngineConfig) -> Result<Self, SessionError> {
        let game = TraceBuilder::new(&forest, start).map_err(|e| SessionError::BadInput(e.to_string()))?;
        let board = Arc::clone(game.state().board());
        let mut s = Session {
            staller: config.policy.instantiate(Arc::clone(&board), config.seed),
            solver: GameSolver::on_board(board),
            game,
            human,
            config,
            moves: Vec::new(),
            last_active: Instant::now(),
        };
        s.auto_play()?;
        Ok(s)
    }

    pub fn human(&self) -> Player {
        self.human
    }

    pub fn config(&self) -> EngineConfig {
        self.config
    }

    /// Every vertex played so far, in order.
    pub fn move_log(&self) -> &[usize] {
        &self.moves
    }

    pub fn builder(&self) -> &TraceBuilder {
        &self.game
    }

    fn push(&mut self, v: usize) -> Result<TurnRecord, SessionError> {
        let rec = self.game.push(v).map_err(|_| SessionError::IllegalVertex(v))?.clone();
        self.moves.push(v);
        Ok(rec)
    }

    fn auto_play(&mut self) -> Result<Vec<TurnRecord>, SessionError> {
        let mut out = Vec::new();
        while !self.game.is_over() && self.game.to_move() != self.human {
            let v = match self.game.to_move() {
                Player::Dominator => self.game.strategy_move(),
                Player::Staller => self.staller.choose(self.game.state(), self.game.phase()),
            }
            .map_err(|e| SessionError::BadInput(e.to_string()))?;
            out.push(self.push(v)?);
        }
        Ok(out)
    }

    /// Plays the human's vertex, then the engine's replies.
    pub fn human_move(&mut self, v: usize) -> Result<Vec<TurnRecord>, SessionError> {
        self.last_active = Instant::now();
        if self.game.is_over() {
            return Err(SessionError::GameOver);
        }
        if self.game.to_move() != self.human {
            return Err(SessionError::NotYourTurn);
        }
        if !self.game.state().is_legal(v) {
            return Err(SessionError::IllegalVertex(v));
        }
        let mut out = vec![self.push(v)?];
        out.extend(self.auto_play()?);
        Ok(out)
    }

    /// The optimal move for the human and the game length it leads to.
    pub fn hint(&mut self) -> Result<Hint, SessionError> {
        self.last_active = Instant::now();
        if self.game.is_over() {
            return Err(SessionError::GameOver);
        }
        if self.game.to_move() != self.human {
            return Err(SessionError::NotYourTurn);
        }
        let (vertex, remaining) =
            self.solver.best_reply(self.game.state(), self.human).map_err(|e| SessionError::BadInput(e.to_string()))?;
        Ok(Hint { vertex, player: self.human, total_turns: self.moves.len() as u32 + remaining })
    }

    pub fn view(&self) -> View {
        let s = self.game.state();
        let n = s.n();
        let over = self.game.is_over();
        let to_move = (!over).then(|| self.game.to_move());
        let vertices = (0..n)
            .map(|v| {
                let legal = s.is_legal(v);
                VertexView { id: v, color: s.color(v), legal, gain: legal.then(|| s.quick_gain(v).map(|g| g.0).ok()).flatten() }
            })
            .collect();
        let trace = self.game.trace();
        let start = self.game.first();
        let d4 = leaf_pair_at_distance(s.graph(), 4);
        let (three, five) = match start {
            Player::Dominator => (THREE_FIFTHS, FIVE_EIGHTHS),
            Player::Staller => (THREE_FIFTHS_STALLER, FIVE_EIGHTHS_STALLER),
        };
        View {
            n,
            vertices,
            active_edges: s.active_edges(),
            pruned_edges: s.pruned_edges(),
            legal_moves: s.legal_moves(),
            value: s.value(),
            start,
            human: self.human,
            to_move,
            your_turn: to_move == Some(self.human),
            over,
            phase: self.game.upcoming_phase(),
            turns: self.moves.len(),
            records: trace.records.clone(),
            ledger: LedgerView {
                e_star: trace.e_star,
                c_star: trace.c_star,
                per_phase_decrease: trace.per_phase_decrease.clone(),
            },
            bounds: BoundsView {
                leaf_pair_at_distance_4: d4,
                three_fifths: (!d4).then(|| three.floor(n)),
                five_eighths: five.floor(n),
            },
            engine: self.config,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hint {
    pub vertex: usize,
    pub player: Player,
    /// Game length if both sides play optimally from here.
    pub total_turns: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexView {
    pub id: usize,
    pub color: Color,
    pub legal: bool,
    /// Points the move would gain, for legal vertices.
    pub gain: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerView {
    pub e_star: i64,
    pub c_star: u32,
    pub per_phase_decrease: BTreeMap<PhaseId, u32>,
}

/// Integer thresholds the game length is compared with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsView {
    pub leaf_pair_at_distance_4: bool,
    /// `⌊3n/5⌋` (or `⌊(3n+1)/5⌋` for Staller-start); absent when two leaves are at distance 4.
    pub three_fifths: Option<i64>,
    /// `⌊5n/8⌋` (or `⌊(5n+2)/8⌋`).
    pub five_eighths: i64,
}

/// Everything a client needs to draw the board.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct View {
    pub n: usize,
    pub vertices: Vec<VertexView>,
    pub active_edges: Vec<(usize, usize)>,
    pub pruned_edges: Vec<(usize, usize)>,
    pub legal_moves: Vec<usize>,
    /// Current `3·white + 2·blue`.
    pub value: u32,
    pub start: Player,
    pub human: Player,
    pub to_move: Option<Player>,
    pub your_turn: bool,
    pub over: bool,
    /// Phase of the strategy at the next turn.
    pub phase: PhaseId,
    pub turns: usize,
    pub records: Vec<TurnRecord>,
    pub ledger: LedgerView,
    pub bounds: BoundsView,
    pub engine: EngineConfig,
}
