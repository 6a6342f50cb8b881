//! Per-trace and per-state checks of the strategy's structural claims, and
//! exact bound checks per forest.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{Check, VerifyError, Violation};
use crate::bounds::{
    LinearBound, FIVE_EIGHTHS, FIVE_EIGHTHS_STALLER, SEVEN_ELEVENTHS, THREE_FIFTHS, THREE_FIFTHS_STALLER,
};
use crate::graph::{leaf_pair_at_distance, Forest};
use crate::residual::{vertices, Color, ResidualState, WhiteKind};
use crate::solver::{domination_number, game_dom_number, worst_case_turns, Player};
use crate::strategy::{max_gain, GameTrace, PhaseId, PhasedDominator};
use crate::Approx;

/// Every phase-ledger and per-turn claim on a complete strategy trace.
pub fn check_trace_invariants(trace: &GameTrace) -> Vec<Violation> {
    let mut out = Vec::new();
    let ledger = match trace.ledger() {
        Ok(l) => l,
        Err(e) => {
            out.push(Violation::new(Check::CompleteGame, None, e.to_string()));
            return out;
        }
    };
    let n = trace.forest.n() as i64;
    let total: i64 = trace.records.iter().map(|r| r.gain as i64).sum();
    if total != 3 * n {
        out.push(Violation::new(Check::TotalDecrease, None, format!("gains sum to {total}, expected {}", 3 * n)));
    }

    let mut prev_phase = None;
    for r in &trace.records {
        let turn = Some(r.index);
        if prev_phase.is_some_and(|p| r.phase < p) {
            out.push(Violation::new(Check::PhaseMonotone, turn, format!("{} after {}", r.phase, prev_phase.unwrap())));
        }
        prev_phase = Some(r.phase);
        if r.gain < 3 {
            out.push(Violation::new(Check::GainAtLeastThree, turn, format!("gain {}", r.gain)));
        }
        let dominator = r.player == Player::Dominator;
        match r.phase {
            PhaseId::Phase0 => {
                if r.gain < 4 {
                    out.push(Violation::new(Check::StallerOpeningGain, turn, format!("gain {}", r.gain)));
                }
            }
            PhaseId::Phase1 => {
                if dominator && (r.gain < 7 || r.newly_red < 2) {
                    out.push(Violation::new(
                        Check::PhaseOneDominatorGain,
                        turn,
                        format!("gain {} with {} new reds", r.gain, r.newly_red),
                    ));
                }
                if r.extra.is_none_or(|e| e < 0) {
                    out.push(Violation::new(Check::PhaseOneExtras, turn, format!("extra {:?}", r.extra)));
                }
            }
            PhaseId::Phase2 => {
                if dominator && r.gain < 7 {
                    out.push(Violation::new(Check::PhaseTwoDominatorGain, turn, format!("gain {}", r.gain)));
                }
            }
            PhaseId::Phase3 => {
                if dominator && r.gain < 6 {
                    out.push(Violation::new(Check::PhaseThreeDominatorGain, turn, format!("gain {}", r.gain)));
                }
            }
            PhaseId::Phase4 => {
                if r.gain != 5 {
                    out.push(Violation::new(Check::PhaseFourGain, turn, format!("gain {}", r.gain)));
                }
            }
        }
        if r.phase != PhaseId::Phase1 && r.extra.is_some() {
            out.push(Violation::new(Check::PhaseOneExtras, turn, format!("extra recorded in {}", r.phase)));
        }
    }

    // Phase ledgers.
    let p1 = ledger.phase(PhaseId::Phase1);
    if ledger.e_star < 0 {
        out.push(Violation::new(Check::PhaseOneExtras, None, format!("e* = {}", ledger.e_star)));
    }
    if p1.decrease as i64 != ledger.phase1_exact() || (p1.decrease as i64) < ledger.phase1_nominal() {
        out.push(Violation::new(
            Check::PhaseOneDecrease,
            None,
            format!(
                "decrease {} vs 7kD+3kS+e* = {} and 5k+e* = {}",
                p1.decrease,
                ledger.phase1_exact(),
                ledger.phase1_nominal()
            ),
        ));
    }
    let p2 = ledger.phase(PhaseId::Phase2);
    if (p2.decrease as i64) < ledger.five_k(PhaseId::Phase2) {
        out.push(Violation::new(
            Check::PhaseTwoDecrease,
            None,
            format!("decrease {} < 5k = {}", p2.decrease, ledger.five_k(PhaseId::Phase2)),
        ));
    }
    let p3 = ledger.phase(PhaseId::Phase3);
    if (p3.decrease as i64) < ledger.phase3_floor() {
        out.push(Violation::new(
            Check::PhaseThreeDecrease,
            None,
            format!("decrease {} < 5k - c* = {}", p3.decrease, ledger.phase3_floor()),
        ));
    }

    // Three-point Staller turns in Phase 3.
    for (idx, r) in trace.records.iter().enumerate() {
        if let Some(cases) = trace.turn_cases(idx) {
            if !cases.any() {
                out.push(Violation::new(Check::ThreePointTurnCases, Some(r.index), format!("{cases:?}")));
            }
            if cases.is_critical() != r.critical {
                out.push(Violation::new(Check::ThreePointTurnCases, Some(r.index), "critical flag out of date"));
            }
        } else if r.critical {
            out.push(Violation::new(Check::ThreePointTurnCases, Some(r.index), "flagged critical but not eligible"));
        }
    }

    // Critical centers from the end of Phase 1 on.
    let end1 = trace.phase_boundary(PhaseId::Phase1);
    let centers: BTreeSet<usize> = (end1..trace.snapshots.len())
        .flat_map(|j| trace.state_at(j).critical_p5s().into_iter().map(|p| p.center))
        .collect();
    let count = centers.len() as i64;
    let (r_k, e_star, c_star) = (trace.r_k as i64, trace.e_star, trace.c_star as i64);
    let center_cap3 = match (trace.r0, trace.b0) {
        (Some(r0), Some(b0)) => r_k - r0 as i64 + 3 * e_star + 3 * b0 as i64,
        _ => r_k + 3 * e_star,
    };
    if 3 * count > center_cap3 {
        out.push(Violation::new(
            Check::CriticalCenterCount,
            None,
            format!("{count} critical centers {centers:?}, three times exceeds {center_cap3}"),
        ));
    }
    if c_star > count {
        out.push(Violation::new(
            Check::CriticalCenterCount,
            None,
            format!("c* = {c_star} exceeds {count} critical centers"),
        ));
    }
    if 5 * c_star > trace.n_ell as i64 {
        out.push(Violation::new(
            Check::CriticalTurnCount,
            None,
            format!("5c* = {} > n_ell = {}", 5 * c_star, trace.n_ell),
        ));
    }

    // Phase 4 positions.
    let start4 = trace.phase_boundary(PhaseId::Phase3);
    for j in start4..trace.snapshots.len() {
        let s = trace.state_at(j);
        let report = s.structure_report();
        if let Some(c) = report.components.iter().find(|c| !c.is_bw_pair) {
            out.push(Violation::new(
                Check::PhaseFourStructure,
                None,
                format!("after {j} moves: component {:?} is not a Blue-White pair", c.vertices),
            ));
            break;
        }
    }

    // Turn-count skeleton.
    let t = trace.turns() as i64;
    let n_ell = trace.n_ell as i64;
    match trace.e0_star {
        None => {
            if 5 * t > 3 * n - e_star + c_star {
                out.push(Violation::new(
                    Check::TurnCountIdentity,
                    None,
                    format!("5t = {} > 3n - e* + c* = {}", 5 * t, 3 * n - e_star + c_star),
                ));
            }
            if n < r_k + n_ell || r_k + n_ell < 8 * (c_star - e_star) {
                out.push(Violation::new(
                    Check::VertexCountChain,
                    None,
                    format!("n = {n}, r_k + n_ell = {}, 8(c* - e*) = {}", r_k + n_ell, 8 * (c_star - e_star)),
                ));
            }
        }
        Some(e0) => {
            if e0 < -1 {
                out.push(Violation::new(Check::StallerOpeningGain, Some(0), format!("e0* = {e0}")));
            }
            if 5 * t > 3 * n - e_star - e0 + c_star {
                out.push(Violation::new(
                    Check::TurnCountIdentity,
                    None,
                    format!("5t' = {} > 3n - e* - e0* + c* = {}", 5 * t, 3 * n - e_star - e0 + c_star),
                ));
            }
            let deficit = c_star - e_star - (e0 + 1);
            if n < r_k + n_ell || 3 * deficit > r_k + 2 || 5 * deficit > n_ell {
                out.push(Violation::new(
                    Check::VertexCountChain,
                    None,
                    format!("n = {n}, r_k = {r_k}, n_ell = {n_ell}, c* - e* - (e0* + 1) = {deficit}"),
                ));
            }
        }
    }

    // Without leaves at distance 4 no critical P5 can appear.
    if !leaf_pair_at_distance(trace.forest.graph(), 4) {
        for j in 0..trace.snapshots.len() {
            if let Some(p) = trace.state_at(j).critical_p5s().first() {
                out.push(Violation::new(
                    Check::NoCriticalP5WithoutLeafPairs,
                    None,
                    format!("after {j} moves: {:?}", p.path),
                ));
                break;
            }
        }
    }

    out
}

/// White components of order 1 or 2; Blue residual degree at most 4.
fn white_and_blue_basics(s: &ResidualState, out: &mut Vec<Violation>, white_check: Check, blue_check: Check) {
    for wc in s.white_components() {
        if wc.kind == WhiteKind::Larger {
            out.push(Violation::new(white_check, None, format!("White component {:?}", wc.vertices)));
        }
    }
    for v in vertices(s.blue_mask()) {
        let d = s.residual_degree(v);
        if d > 4 {
            out.push(Violation::new(blue_check, None, format!("Blue {v} has residual degree {d}")));
        }
    }
}

fn single_whites(s: &ResidualState) -> BTreeSet<usize> {
    s.white_components()
        .into_iter()
        .filter(|c| c.kind == WhiteKind::SingleW)
        .map(|c| c.vertices[0])
        .collect()
}

fn white_pair_members(s: &ResidualState) -> BTreeSet<usize> {
    s.white_components()
        .into_iter()
        .filter(|c| c.kind == WhiteKind::WPair)
        .flat_map(|c| c.vertices)
        .collect()
}

/// Structure of a position where no move gains 7 or more: small White
/// components, White leaves in components of order at least 3, Blue
/// vertices next to a single White have one more neighbor (in a White pair),
/// Blue degree at most 4.
pub fn check_phase2_end_structure(s: &ResidualState) -> Result<Vec<Violation>, VerifyError> {
    if s.is_terminal() {
        return Ok(Vec::new());
    }
    let best = max_gain(s);
    if best >= 7 {
        return Err(VerifyError::PreconditionNotMet { max_gain: best });
    }
    Ok(low_gain_structure(s, true))
}

/// The same properties except the degree bound, without the precondition.
/// The structure is expected (not proved) at the end of Phase 1.
pub fn exploratory_phase1_end_structure(s: &ResidualState) -> Vec<Violation> {
    low_gain_structure(s, false)
}

fn low_gain_structure(s: &ResidualState, with_degree: bool) -> Vec<Violation> {
    let mut out = Vec::new();
    white_and_blue_basics(s, &mut out, Check::WhiteComponentsSmall, Check::BlueDegree);
    if !with_degree {
        out.retain(|v| v.check != Check::BlueDegree);
    }
    let singles = single_whites(s);
    let pairs = white_pair_members(s);
    for comp in s.residual_components() {
        if comp.len() < 3 {
            continue;
        }
        for &v in &comp {
            let nbrs = s.residual_neighbors(v);
            if nbrs.len() == 1 && s.color(v) != Color::White {
                out.push(Violation::new(Check::LeavesWhite, None, format!("leaf {v} is {:?}", s.color(v))));
            }
            if s.color(v) != Color::Blue {
                continue;
            }
            if let Some(&u) = nbrs.iter().find(|w| singles.contains(w)) {
                let others: Vec<usize> = nbrs.iter().copied().filter(|&w| w != u).collect();
                if others.len() != 1 || !pairs.contains(&others[0]) {
                    out.push(Violation::new(
                        Check::BlueNextToSingleWhite,
                        None,
                        format!("Blue {v} next to single White {u} has further neighbors {others:?}"),
                    ));
                }
            }
        }
    }
    out
}

/// Structure and gain envelopes of a Phase 3 or Phase 4 position.
pub fn check_midgame_structure(s: &ResidualState) -> Vec<Violation> {
    let mut out = Vec::new();
    white_and_blue_basics(s, &mut out, Check::WhiteComponentsSmall, Check::BlueDegree);
    let report = s.structure_report();
    let pairs = white_pair_members(s);
    let lonely: BTreeSet<usize> = report.single_whites_without_blue_leaf.iter().copied().collect();
    let with_leaf: BTreeSet<usize> = report.single_whites_with_blue_leaf.iter().copied().collect();
    for v in vertices(s.blue_mask()) {
        let nbrs = s.residual_neighbors(v);
        if let Some(&u) = nbrs.iter().find(|w| lonely.contains(w)) {
            let others: Vec<usize> = nbrs.iter().copied().filter(|&w| w != u).collect();
            let ok = others.len() == 1 && (pairs.contains(&others[0]) || with_leaf.contains(&others[0]));
            if !ok {
                out.push(Violation::new(
                    Check::BlueNextToSingleWhite,
                    None,
                    format!("Blue {v} next to single White {u} has further neighbors {others:?}"),
                ));
            }
        }
    }
    let board = s.board();
    for comp in &report.components {
        let best = comp.vertices.iter().map(|&v| board.quick_gain(s.dominated(), v).0).max().unwrap_or(0);
        if comp.order() >= 3 && !comp.is_bwb && !comp.blue_leaves.is_empty() && best < 8 {
            out.push(Violation::new(
                Check::BlueLeafGain,
                None,
                format!("component {:?} has a Blue leaf but best gain {best}", comp.vertices),
            ));
        }
        if comp.order() >= 4 && comp.blue_leaves.is_empty() && best > 6 {
            out.push(Violation::new(
                Check::NoBlueLeafGain,
                None,
                format!("component {:?} has no Blue leaf but a move gains {best}", comp.vertices),
            ));
        }
    }
    out
}

/// Structural checks at the Phase 2 / Phase 3 boundary and on every later
/// position of the trace, labeled with the number of moves played.
pub fn check_trace_structure(trace: &GameTrace) -> Vec<Violation> {
    let mut out = Vec::new();
    let start3 = trace.phase_boundary(PhaseId::Phase2);
    let boundary = trace.state_at(start3);
    match check_phase2_end_structure(&boundary) {
        Ok(vs) => out.extend(vs.into_iter().map(|v| v.after_moves(start3))),
        Err(e) => out.push(Violation::new(Check::PhaseTwoEndGain, None, e.to_string()).after_moves(start3)),
    }
    for j in start3..trace.snapshots.len() {
        out.extend(check_midgame_structure(&trace.state_at(j)).into_iter().map(|v| v.after_moves(j)));
    }
    out
}

/// Exact game values of one forest against the classical and strategy bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsRow {
    pub n: usize,
    /// Some two leaves are at distance exactly 4.
    pub leaf_pair_at_distance_4: bool,
    pub gamma: usize,
    pub gamma_g: u32,
    pub gamma_g_staller: u32,
    /// Longest game the phased strategy can be forced into.
    pub worst_dominator_start: Option<u32>,
    pub worst_staller_start: Option<u32>,
    /// `7n/11 - gamma_g`, for comparison with the earlier general bound.
    pub seven_elevenths_slack: Approx,
    pub violations: Vec<Violation>,
}

impl BoundsRow {
    pub fn threshold_dominator(&self) -> i64 {
        self.applicable_dominator().floor(self.n)
    }

    pub fn threshold_staller(&self) -> i64 {
        self.applicable_staller().floor(self.n)
    }

    /// The tightest bound asserted for Dominator-start games.
    pub fn applicable_dominator(&self) -> LinearBound {
        if self.leaf_pair_at_distance_4 {
            FIVE_EIGHTHS
        } else {
            THREE_FIFTHS
        }
    }

    pub fn applicable_staller(&self) -> LinearBound {
        if self.leaf_pair_at_distance_4 {
            FIVE_EIGHTHS_STALLER
        } else {
            THREE_FIFTHS_STALLER
        }
    }
}

/// Computes γ, γ_g and γ_g′ exactly and checks the classical inequalities
/// and the 5/8 bounds, plus the 3/5 bounds when no two leaves are at
/// distance 4. With `worst_case`, also bounds the phased strategy's longest
/// forced game by the same thresholds.
pub fn check_bounds_exact(forest: &Forest, worst_case: bool) -> Result<BoundsRow, VerifyError> {
    let g = forest.graph();
    let gamma = domination_number(g)?;
    let gamma_g = game_dom_number(g, Player::Dominator)?.value;
    let gamma_g_staller = game_dom_number(g, Player::Staller)?.value;
    let (worst_d, worst_s) = if worst_case {
        (
            Some(worst_case_turns(g, &PhasedDominator, Player::Dominator)?.turns),
            Some(worst_case_turns(g, &PhasedDominator, Player::Staller)?.turns),
        )
    } else {
        (None, None)
    };
    let n = forest.n();
    let mut row = BoundsRow {
        n,
        leaf_pair_at_distance_4: leaf_pair_at_distance(g, 4),
        gamma,
        gamma_g,
        gamma_g_staller,
        worst_dominator_start: worst_d,
        worst_staller_start: worst_s,
        seven_elevenths_slack: SEVEN_ELEVENTHS.slack::<Approx>(n, gamma_g as usize),
        violations: Vec::new(),
    };
    let (gd, gs, gm) = (gamma_g as usize, gamma_g_staller as usize, gamma);
    if !(gm <= gd && gd < 2 * gm) {
        row.violations.push(Violation::new(
            Check::ClassicalBounds,
            None,
            format!("gamma = {gm}, gamma_g = {gd}; expected gamma <= gamma_g <= 2gamma - 1"),
        ));
    }
    if !(gm <= gs && gs <= 2 * gm) {
        row.violations.push(Violation::new(
            Check::ClassicalBounds,
            None,
            format!("gamma = {gm}, gamma_g' = {gs}; expected gamma <= gamma_g' <= 2gamma"),
        ));
    }
    let mut bound = |check: Check, b: LinearBound, what: &str, value: Option<u32>| {
        if let Some(v) = value {
            if !b.admits(n, v as usize) {
                row.violations.push(Violation::new(check, None, format!("{what} = {v} > {} = {}", b, b.floor(n))));
            }
        }
    };
    bound(Check::FiveEighths, FIVE_EIGHTHS, "gamma_g", Some(gamma_g));
    bound(Check::FiveEighths, FIVE_EIGHTHS_STALLER, "gamma_g'", Some(gamma_g_staller));
    bound(Check::StrategyFiveEighths, FIVE_EIGHTHS, "worst strategy game", worst_d);
    bound(Check::StrategyFiveEighths, FIVE_EIGHTHS_STALLER, "worst Staller-start strategy game", worst_s);
    if !row.leaf_pair_at_distance_4 {
        bound(Check::ThreeFifths, THREE_FIFTHS, "gamma_g", Some(gamma_g));
        bound(Check::ThreeFifths, THREE_FIFTHS_STALLER, "gamma_g'", Some(gamma_g_staller));
        bound(Check::StrategyThreeFifths, THREE_FIFTHS, "worst strategy game", worst_d);
        bound(Check::StrategyThreeFifths, THREE_FIFTHS_STALLER, "worst Staller-start strategy game", worst_s);
    }
    Ok(row)
}
