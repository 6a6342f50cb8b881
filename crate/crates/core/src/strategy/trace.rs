use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use super::{advance_phase, dominator_choose, max_gain, PhaseId, StrategyError};
use crate::graph::Forest;
use crate::residual::{Board, ResidualState};
use crate::solver::Player;
use crate::Mask;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TurnRecord {
    /// Turn number: 1-based, with the Staller opening numbered 0.
    pub index: usize,
    pub player: Player,
    pub vertex: usize,
    pub gain: u32,
    pub newly_red: u32,
    pub phase: PhaseId,
    /// Extra points above 7 (Dominator) or 3 (Staller); Phase 1 only.
    pub extra: Option<i64>,
    pub critical: bool,
}

/// The three alternatives for a 3-point Staller turn in Phase 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TurnCases {
    /// Dominator's preceding turn gained at least 8.
    pub previous_gain_ge8: bool,
    /// Dominator can gain at least 7 right after.
    pub next_gain_ge7: bool,
    /// Dominator played a stem of a critical P5 and Staller its center.
    pub critical_pattern: bool,
}

impl TurnCases {
    pub fn any(&self) -> bool {
        self.previous_gain_ge8 || self.next_gain_ge7 || self.critical_pattern
    }

    pub fn is_critical(&self) -> bool {
        self.critical_pattern && !self.previous_gain_ge8 && !self.next_gain_ge7
    }
}

/// Case flags for record `idx`, or `None` unless it is a 3-point Staller
/// turn in Phase 3. `snapshots[j]` is the dominated set before record `j`.
pub fn turn_cases(board: &Arc<Board>, snapshots: &[Mask], records: &[TurnRecord], idx: usize) -> Option<TurnCases> {
    let rec = records.get(idx)?;
    if rec.player != Player::Staller || rec.phase != PhaseId::Phase3 || rec.gain != 3 || idx == 0 {
        return None;
    }
    let prev = &records[idx - 1];
    let before_prev = ResidualState::with_dominated(Arc::clone(board), snapshots[idx - 1], idx - 1);
    let after = ResidualState::with_dominated(Arc::clone(board), snapshots[idx + 1], idx + 1);
    let critical_pattern = prev.player == Player::Dominator
        && before_prev
            .critical_p5s()
            .iter()
            .any(|p| p.stems().contains(&prev.vertex) && p.center == rec.vertex);
    Some(TurnCases {
        previous_gain_ge8: prev.gain >= 8,
        next_gain_ge7: max_gain(&after) >= 7,
        critical_pattern,
    })
}

/// Incrementally records a game, labeling turns with strategy phases.
///
/// Dominator turns advance the phase whether or not the move itself came
/// from the strategy, so the labels stay meaningful for human play.
pub struct TraceBuilder {
    forest: Forest,
    state: ResidualState,
    first: Player,
    phase: PhaseId,
    records: Vec<TurnRecord>,
    snapshots: Vec<Mask>,
}

impl TraceBuilder {
    pub fn new(forest: &Forest, first: Player) -> Result<Self, StrategyError> {
        let board = super::check_forest(forest)?;
        Ok(Self::on_board(forest.clone(), board, first))
    }

    pub(crate) fn on_board(forest: Forest, board: Arc<Board>, first: Player) -> Self {
        let phase = match first {
            Player::Dominator => PhaseId::Phase1,
            Player::Staller => PhaseId::Phase0,
        };
        TraceBuilder {
            forest,
            state: ResidualState::on_board(board),
            first,
            phase,
            records: Vec::new(),
            snapshots: vec![0],
        }
    }

    pub fn state(&self) -> &ResidualState {
        &self.state
    }

    pub fn phase(&self) -> PhaseId {
        self.phase
    }

    pub fn first(&self) -> Player {
        self.first
    }

    pub fn records(&self) -> &[TurnRecord] {
        &self.records
    }

    pub fn is_over(&self) -> bool {
        self.state.is_terminal()
    }

    pub fn to_move(&self) -> Player {
        if self.records.len().is_multiple_of(2) {
            self.first
        } else {
            self.first.other()
        }
    }

    /// The phased strategy's move for Dominator now.
    pub fn strategy_move(&self) -> Result<usize, StrategyError> {
        let phase = advance_phase(self.phase, &self.state)?;
        dominator_choose(&self.state, phase)
    }

    /// The phase the next Dominator turn would be labeled with.
    pub fn upcoming_phase(&self) -> PhaseId {
        match self.to_move() {
            Player::Dominator => advance_phase(self.phase, &self.state).unwrap_or(self.phase),
            Player::Staller => self.phase,
        }
    }

    /// Plays `v` for the player to move.
    pub fn push(&mut self, v: usize) -> Result<&TurnRecord, StrategyError> {
        if self.is_over() {
            return Err(StrategyError::GameOver);
        }
        let player = self.to_move();
        let phase = match player {
            Player::Dominator => advance_phase(self.phase, &self.state)?,
            Player::Staller => self.phase,
        };
        let outcome = self.state.play(v)?;
        self.phase = phase;
        let extra = (phase == PhaseId::Phase1).then(|| {
            let base = if player == Player::Dominator { 7 } else { 3 };
            outcome.gain as i64 - base
        });
        let index = match self.first {
            Player::Dominator => self.records.len() + 1,
            Player::Staller => self.records.len(),
        };
        self.records.push(TurnRecord {
            index,
            player,
            vertex: v,
            gain: outcome.gain,
            newly_red: outcome.newly_red,
            phase,
            extra,
            critical: false,
        });
        self.snapshots.push(self.state.dominated());
        let idx = self.records.len() - 1;
        if let Some(cases) = turn_cases(self.state.board(), &self.snapshots, &self.records, idx) {
            self.records[idx].critical = cases.is_critical();
        }
        Ok(&self.records[idx])
    }

    /// The trace so far (complete once the game is over).
    pub fn trace(&self) -> GameTrace {
        GameTrace::assemble(
            self.forest.clone(),
            Arc::clone(self.state.board()),
            self.first,
            self.records.clone(),
            self.snapshots.clone(),
        )
    }

    pub fn finish(self) -> GameTrace {
        GameTrace::assemble(self.forest, Arc::clone(self.state.board()), self.first, self.records, self.snapshots)
    }
}

/// A recorded game with its phase ledgers.
#[derive(Debug, Clone, Serialize)]
pub struct GameTrace {
    pub forest: Forest,
    pub first: Player,
    pub records: Vec<TurnRecord>,
    /// Dominated set before each record, then the final one.
    pub snapshots: Vec<Mask>,
    /// Sum of Phase-1 extras.
    pub e_star: i64,
    /// Number of critical turns.
    pub c_star: u32,
    /// Red vertices when Phase 1 is over.
    pub r_k: usize,
    /// Non-red vertices when Phase 3 begins.
    pub n_ell: usize,
    pub per_phase_decrease: BTreeMap<PhaseId, u32>,
    /// Staller-start only: `3·r0 + b0 - 5` after the opening.
    pub e0_star: Option<i64>,
    pub r0: Option<usize>,
    pub b0: Option<usize>,
    #[serde(skip)]
    board: Arc<Board>,
}

impl PartialEq for GameTrace {
    fn eq(&self, other: &Self) -> bool {
        self.forest == other.forest
            && self.first == other.first
            && self.records == other.records
            && self.snapshots == other.snapshots
    }
}

impl Eq for GameTrace {}

impl GameTrace {
    fn assemble(
        forest: Forest,
        board: Arc<Board>,
        first: Player,
        records: Vec<TurnRecord>,
        snapshots: Vec<Mask>,
    ) -> Self {
        let reds = |j: usize| board.red_mask(snapshots[j]).count_ones() as usize;
        let n = forest.n();
        let end1 = records.iter().take_while(|r| r.phase <= PhaseId::Phase1).count();
        let start3 = records.iter().take_while(|r| r.phase <= PhaseId::Phase2).count();
        let mut per_phase_decrease = BTreeMap::new();
        for r in &records {
            *per_phase_decrease.entry(r.phase).or_insert(0) += r.gain;
        }
        let (e0_star, r0, b0) = match (first, records.first()) {
            (Player::Staller, Some(_)) => {
                let r0 = reds(1);
                let b0 = (snapshots[1].count_ones() as usize) - r0;
                (Some(3 * r0 as i64 + b0 as i64 - 5), Some(r0), Some(b0))
            }
            _ => (None, None, None),
        };
        GameTrace {
            e_star: records.iter().filter_map(|r| r.extra).sum(),
            c_star: records.iter().filter(|r| r.critical).count() as u32,
            r_k: reds(end1),
            n_ell: n - reds(start3),
            per_phase_decrease,
            e0_star,
            r0,
            b0,
            forest,
            first,
            records,
            snapshots,
            board,
        }
    }

    pub fn board(&self) -> &Arc<Board> {
        &self.board
    }

    pub fn turns(&self) -> usize {
        self.records.len()
    }

    pub fn is_complete(&self) -> bool {
        self.snapshots.last() == Some(&self.board.all())
    }

    /// Residual state after `j` records.
    pub fn state_at(&self, j: usize) -> ResidualState {
        ResidualState::with_dominated(Arc::clone(&self.board), self.snapshots[j], j)
    }

    /// Number of records up to and including the last one in `phase` or an
    /// earlier phase; the state index where later phases begin.
    pub fn phase_boundary(&self, phase: PhaseId) -> usize {
        self.records.iter().take_while(|r| r.phase <= phase).count()
    }

    pub fn turn_cases(&self, idx: usize) -> Option<TurnCases> {
        turn_cases(&self.board, &self.snapshots, &self.records, idx)
    }

    /// Whether record `idx` is a critical turn.
    pub fn is_critical_turn(&self, idx: usize) -> Result<bool, StrategyError> {
        if idx >= self.records.len() {
            return Err(StrategyError::IndexOutOfRange(idx));
        }
        Ok(self.turn_cases(idx).is_some_and(|c| c.is_critical()))
    }

    pub fn ledger(&self) -> Result<LedgerSummary, StrategyError> {
        if !self.is_complete() {
            return Err(StrategyError::IncompleteTrace(format!(
                "{} turns recorded, game not over",
                self.records.len()
            )));
        }
        let mut phases: Vec<PhaseLedger> = Vec::new();
        for r in &self.records {
            if phases.last().is_none_or(|p| p.phase != r.phase) {
                phases.push(PhaseLedger { phase: r.phase, ..PhaseLedger::empty(r.phase) });
            }
            let p = phases.last_mut().expect("just pushed");
            p.decrease += r.gain;
            match r.player {
                Player::Dominator => p.dominator_turns += 1,
                Player::Staller => p.staller_turns += 1,
            }
        }
        Ok(LedgerSummary {
            n: self.forest.n(),
            turns: self.records.len(),
            phases,
            e_star: self.e_star,
            c_star: self.c_star,
            r_k: self.r_k,
            n_ell: self.n_ell,
            e0_star: self.e0_star,
        })
    }

    /// One record per line, framed by `#` header and summary lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("# n={} first={} turns={}\n", self.forest.n(), self.first, self.turns());
        out.push_str("# index player vertex gain phase flags\n");
        for r in &self.records {
            let mut flags = Vec::new();
            if let Some(e) = r.extra {
                flags.push(format!("e={e}"));
            }
            if r.critical {
                flags.push("critical".to_string());
            }
            let flags = if flags.is_empty() { "-".to_string() } else { flags.join(",") };
            let who = match r.player {
                Player::Dominator => 'D',
                Player::Staller => 'S',
            };
            let _ = writeln!(out, "{} {who} {} {} {} {flags}", r.index, r.vertex, r.gain, r.phase);
        }
        let decreases: Vec<String> = self.per_phase_decrease.iter().map(|(p, d)| format!("{p}={d}")).collect();
        let _ = write!(
            out,
            "# e*={} c*={} r_k={} n_ell={} decrease {}",
            self.e_star,
            self.c_star,
            self.r_k,
            self.n_ell,
            decreases.join(" ")
        );
        if let Some(e0) = self.e0_star {
            let _ = write!(out, " e0*={e0}");
        }
        out.push('\n');
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("traces serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhaseLedger {
    pub phase: PhaseId,
    pub dominator_turns: usize,
    pub staller_turns: usize,
    pub decrease: u32,
}

impl PhaseLedger {
    fn empty(phase: PhaseId) -> Self {
        PhaseLedger { phase, dominator_turns: 0, staller_turns: 0, decrease: 0 }
    }

    pub fn turns(&self) -> usize {
        self.dominator_turns + self.staller_turns
    }
}

/// Per-phase turn counts and decreases plus the derived check quantities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerSummary {
    pub n: usize,
    pub turns: usize,
    pub phases: Vec<PhaseLedger>,
    pub e_star: i64,
    pub c_star: u32,
    pub r_k: usize,
    pub n_ell: usize,
    pub e0_star: Option<i64>,
}

impl LedgerSummary {
    pub fn phase(&self, phase: PhaseId) -> PhaseLedger {
        self.phases.iter().find(|p| p.phase == phase).cloned().unwrap_or(PhaseLedger::empty(phase))
    }

    /// `5k + e*` for Phase 1.
    pub fn phase1_nominal(&self) -> i64 {
        5 * self.phase(PhaseId::Phase1).turns() as i64 + self.e_star
    }

    /// Exact Phase-1 decrease implied by the extras: `7·kD + 3·kS + e*`.
    /// Equals [`Self::phase1_nominal`] unless Dominator ends the game.
    pub fn phase1_exact(&self) -> i64 {
        let p = self.phase(PhaseId::Phase1);
        7 * p.dominator_turns as i64 + 3 * p.staller_turns as i64 + self.e_star
    }

    /// `5k` for the given phase.
    pub fn five_k(&self, phase: PhaseId) -> i64 {
        5 * self.phase(phase).turns() as i64
    }

    /// `5k - c*` for Phase 3.
    pub fn phase3_floor(&self) -> i64 {
        self.five_k(PhaseId::Phase3) - self.c_star as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::{run_game, StallerPolicy};

    #[test]
    fn p5_optimal_trace() {
        let t = run_game(&Forest::path(5), StallerPolicy::Optimal, Player::Dominator, 0).unwrap();
        let summary: Vec<(Player, usize, u32, PhaseId)> =
            t.records.iter().map(|r| (r.player, r.vertex, r.gain, r.phase)).collect();
        assert_eq!(
            summary,
            vec![
                (Player::Dominator, 1, 7, PhaseId::Phase1),
                (Player::Staller, 2, 3, PhaseId::Phase1),
                (Player::Dominator, 3, 5, PhaseId::Phase4),
            ]
        );
        assert_eq!(t.per_phase_decrease, BTreeMap::from([(PhaseId::Phase1, 10), (PhaseId::Phase4, 5)]));
        assert_eq!((t.e_star, t.c_star), (0, 0));
        assert_eq!(t.records[1].extra, Some(0));
        assert!(!t.is_critical_turn(1).unwrap());
        assert_eq!(t.is_critical_turn(7), Err(StrategyError::IndexOutOfRange(7)));
        let l = t.ledger().unwrap();
        assert_eq!(l.phase(PhaseId::Phase1).turns(), 2);
        assert_eq!(l.phase1_nominal(), 10);
        assert_eq!(l.phase(PhaseId::Phase4).decrease as i64, l.five_k(PhaseId::Phase4));
        assert_eq!(t.r_k, 3);
        assert_eq!(t.n_ell, 2);
    }

    #[test]
    fn critical_turn_on_spider() {
        // Dominator settles the long leg, Staller's reply leaves a critical
        // P5 5-4-0-6-7; Dominator takes stem 4 for 6 and Staller the center
        let f = Forest::new(8, [(0, 1), (0, 4), (0, 6), (1, 2), (2, 3), (4, 5), (6, 7)]).unwrap();
        let t = run_game(&f, StallerPolicy::Optimal, Player::Dominator, 0).unwrap();
        let moves: Vec<(usize, u32, PhaseId)> = t.records.iter().map(|r| (r.vertex, r.gain, r.phase)).collect();
        assert_eq!(
            moves,
            vec![
                (2, 7, PhaseId::Phase1),
                (1, 3, PhaseId::Phase1),
                (4, 6, PhaseId::Phase3),
                (0, 3, PhaseId::Phase3),
                (6, 5, PhaseId::Phase4),
            ]
        );
        let critical = t.state_at(2).critical_p5s();
        assert_eq!(critical.len(), 1);
        assert_eq!(critical[0].center, 0);
        assert!(t.is_critical_turn(3).unwrap());
        assert_eq!(
            t.turn_cases(3),
            Some(TurnCases { previous_gain_ge8: false, next_gain_ge7: false, critical_pattern: true })
        );
        assert!(!t.is_critical_turn(1).unwrap());
        assert_eq!((t.c_star, t.r_k, t.n_ell), (1, 3, 5));
        assert_eq!(t.ledger().unwrap().phase3_floor(), 9);
    }

    #[test]
    fn p2_single_phase3_turn() {
        for policy in StallerPolicy::ALL {
            let t = run_game(&Forest::path(2), policy, Player::Dominator, 3).unwrap();
            assert_eq!(t.turns(), 1);
            assert_eq!(t.records[0].phase, PhaseId::Phase3);
            assert_eq!(t.records[0].gain, 6);
        }
    }

    #[test]
    fn p3_staller_start() {
        let t = run_game(&Forest::path(3), StallerPolicy::Optimal, Player::Staller, 0).unwrap();
        assert_eq!(t.turns(), 2);
        assert_eq!(t.records[0].index, 0);
        assert_eq!(t.records[0].phase, PhaseId::Phase0);
        assert!(t.records[0].gain >= 4);
        let (r0, b0) = (t.r0.unwrap(), t.b0.unwrap());
        assert!(r0 >= 1);
        assert_eq!(t.e0_star, Some(3 * r0 as i64 + b0 as i64 - 5));
        assert_eq!(t.ledger().unwrap().e0_star, t.e0_star);
    }

    #[test]
    fn incomplete_traces_have_no_ledger() {
        let mut b = TraceBuilder::new(&Forest::path(5), Player::Dominator).unwrap();
        b.push(1).unwrap();
        assert!(matches!(b.trace().ledger(), Err(StrategyError::IncompleteTrace(_))));
        assert_eq!(b.to_move(), Player::Staller);
        assert!(b.push(0).is_err());
    }

    #[test]
    fn text_export_is_stable() {
        let t = run_game(&Forest::path(5), StallerPolicy::Optimal, Player::Dominator, 0).unwrap();
        let text = t.to_text();
        assert!(text.contains("\n1 D 1 7 Phase1 e=0\n2 S 2 3 Phase1 e=0\n3 D 3 5 Phase4 -\n"), "{text}");
        assert!(text.ends_with("# e*=0 c*=0 r_k=3 n_ell=2 decrease Phase1=10 Phase4=5\n"));
        let again = run_game(&Forest::path(5), StallerPolicy::Optimal, Player::Dominator, 0).unwrap();
        assert_eq!(text, again.to_text());
        assert_eq!(t.to_json(), again.to_json());
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["c_star"], 0);
        assert_eq!(v["per_phase_decrease"]["Phase1"], 10);
    }
}
