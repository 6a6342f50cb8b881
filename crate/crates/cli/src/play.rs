//! Text-mode game against the engine.

use std::io::{self, BufRead, Write};

use domgame_core::{Color, Forest, Player, StallerPolicy};
use domgame_service::{EngineConfig, Session, SessionError};

use crate::Failure;

fn board(s: &Session, out: &mut impl Write) -> io::Result<()> {
    let view = s.view();
    let state = s.builder().state();
    writeln!(out, "value {} after {} turns, phase {:?}", view.value, view.turns, view.phase)?;
    for v in &view.vertices {
        if v.color == Color::Red {
            continue;
        }
        let nbrs: Vec<String> = state
            .residual_neighbors(v.id)
            .into_iter()
            .map(|u| format!("{u}{}", state.color(u).letter()))
            .collect();
        let gain = v.gain.map(|g| format!("  gain {g}")).unwrap_or_default();
        writeln!(out, "  {}{}: {}{gain}", v.id, v.color.letter(), nbrs.join(" "))?;
    }
    Ok(())
}

fn report_engine(s: &Session, from: usize, out: &mut impl Write) -> io::Result<()> {
    for r in &s.builder().records()[from..] {
        if r.player != s.human() {
            writeln!(out, "engine ({}) plays {} for {} points", r.player, r.vertex, r.gain)?;
        }
    }
    Ok(())
}

/// Reads one vertex id per line; `hint` asks for the optimal move and `quit`
/// or end of input resigns.
pub fn run(
    forest: Forest,
    side: Player,
    start: Player,
    staller: StallerPolicy,
    seed: u64,
    mut input: impl BufRead,
    mut out: impl Write,
) -> Result<(), Failure> {
    let mut s = Session::new(forest, side, start, EngineConfig { policy: staller, seed })
        .map_err(|e| Failure::new(2, e.to_string()))?;
    writeln!(out, "you are {side}")?;
    report_engine(&s, 0, &mut out)?;
    let mut line = String::new();
    while !s.builder().is_over() {
        board(&s, &mut out)?;
        write!(out, "your move (vertex id, hint, quit): ")?;
        out.flush()?;
        line.clear();
        if input.read_line(&mut line)? == 0 || line.trim() == "quit" {
            writeln!(out, "\nresigned after {} turns", s.move_log().len())?;
            return Ok(());
        }
        let cmd = line.trim();
        if cmd == "hint" {
            match s.hint() {
                Ok(h) => writeln!(out, "hint: {} (game length {} with best play)", h.vertex, h.total_turns)?,
                Err(e) => writeln!(out, "no hint: {e}")?,
            }
            continue;
        }
        let Ok(v) = cmd.parse::<usize>() else {
            writeln!(out, "not a vertex id: {cmd:?}, try again")?;
            continue;
        };
        let before = s.builder().records().len();
        match s.human_move(v) {
            Ok(_) => report_engine(&s, before + 1, &mut out)?,
            Err(SessionError::IllegalVertex(v)) => writeln!(out, "vertex {v} is not a legal move, try again")?,
            Err(e) => return Err(Failure::new(2, e.to_string())),
        }
    }
    let view = s.view();
    writeln!(out, "game over after {} turns", view.turns)?;
    match view.bounds.three_fifths {
        Some(t) => writeln!(out, "thresholds: {t} (3/5), {} (5/8)", view.bounds.five_eighths)?,
        None => writeln!(out, "thresholds: {} (5/8); 3/5 n/a: leaves at distance 4", view.bounds.five_eighths)?,
    }
    Ok(())
}
