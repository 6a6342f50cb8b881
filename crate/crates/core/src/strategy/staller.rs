use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{PhaseId, PhasedDominator, StrategyError};
use crate::residual::{vertices, Board, ResidualState};
use crate::solver::{GameSolver, Player, WorstCaseSearch};

/// Built-in Staller behaviors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StallerPolicy {
    /// Maximizes the game length assuming optimal play by both sides.
    Optimal,
    /// Takes the smallest available gain.
    GreedyMin,
    /// Uniform over legal moves, seeded.
    Random,
    /// Maximizes the game length against the phased Dominator itself.
    Worst,
}

impl StallerPolicy {
    pub const ALL: [StallerPolicy; 4] =
        [StallerPolicy::Optimal, StallerPolicy::GreedyMin, StallerPolicy::Random, StallerPolicy::Worst];

    pub fn name(self) -> &'static str {
        match self {
            StallerPolicy::Optimal => "optimal",
            StallerPolicy::GreedyMin => "greedy",
            StallerPolicy::Random => "random",
            StallerPolicy::Worst => "worst",
        }
    }

    pub fn instantiate(self, board: Arc<Board>, seed: u64) -> Box<dyn StallerStrategy> {
        match self {
            StallerPolicy::Optimal => Box::new(OptimalStaller(GameSolver::on_board(board))),
            StallerPolicy::GreedyMin => Box::new(GreedyMinStaller),
            StallerPolicy::Random => Box::new(RandomStaller(ChaCha8Rng::seed_from_u64(seed))),
            StallerPolicy::Worst => Box::new(WorstStaller(WorstCaseSearch::new(PhasedDominator, board))),
        }
    }
}

impl fmt::Display for StallerPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StallerPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        StallerPolicy::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown staller policy {s:?} (optimal|greedy|random|worst)"))
    }
}

/// Something that picks Staller's vertex.
pub trait StallerStrategy: Send {
    /// `phase` is the Dominator strategy's current phase.
    fn choose(&mut self, state: &ResidualState, phase: PhaseId) -> Result<usize, StrategyError>;
}

struct OptimalStaller(GameSolver);

impl StallerStrategy for OptimalStaller {
    fn choose(&mut self, state: &ResidualState, _: PhaseId) -> Result<usize, StrategyError> {
        Ok(self.0.best_reply(state, Player::Staller)?.0)
    }
}

struct GreedyMinStaller;

impl StallerStrategy for GreedyMinStaller {
    fn choose(&mut self, state: &ResidualState, _: PhaseId) -> Result<usize, StrategyError> {
        vertices(state.legal_mask())
            .min_by_key(|&v| (state.board().quick_gain(state.dominated(), v).0, v))
            .ok_or(StrategyError::GameOver)
    }
}

struct RandomStaller(ChaCha8Rng);

impl StallerStrategy for RandomStaller {
    fn choose(&mut self, state: &ResidualState, _: PhaseId) -> Result<usize, StrategyError> {
        state.legal_moves().choose(&mut self.0).copied().ok_or(StrategyError::GameOver)
    }
}

struct WorstStaller(WorstCaseSearch<PhasedDominator>);

impl StallerStrategy for WorstStaller {
    fn choose(&mut self, state: &ResidualState, phase: PhaseId) -> Result<usize, StrategyError> {
        self.0.staller_reply(state.dominated(), phase).map(|(v, _)| v).ok_or(StrategyError::GameOver)
    }
}

/// Adapts a closure (e.g. a human at a prompt) into a Staller.
pub struct FnStaller<F>(pub F);

impl<F> StallerStrategy for FnStaller<F>
where
    F: FnMut(&ResidualState) -> usize + Send,
{
    fn choose(&mut self, state: &ResidualState, _: PhaseId) -> Result<usize, StrategyError> {
        Ok((self.0)(state))
    }
}
