//! Colors, point values and the residual graph.
//!
//! The only stored game data is the set of dominated vertices. Every color
//! is recomputed from it: undominated vertices are White (3 points),
//! dominated vertices with an undominated neighbor are Blue (2 points), and
//! the rest are Red (0 points). The residual graph is the base graph minus
//! Red vertices and minus edges joining two Blue vertices; the base graph
//! itself is kept untouched so pruned structure can still be inspected.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{parse_graph, to_edge_list, Graph, GraphError};
use crate::Mask;

pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("graph has {n} vertices; at most {MAX_VERTICES} are supported")]
    TooLarge { n: usize },
    #[error("vertex {v} is isolated")]
    IsolatedVertexPresent { v: usize },
    #[error("vertex {v} is not a legal move")]
    IllegalMove { v: usize },
    #[error("the game is already over")]
    GameOver,
    #[error("bad snapshot: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[inline]
pub(crate) fn bit(v: usize) -> Mask {
    1u64 << v
}

pub(crate) fn vertices(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    White,
    Blue,
    Red,
}

impl Color {
    pub fn value(self) -> u32 {
        match self {
            Color::White => 3,
            Color::Blue => 2,
            Color::Red => 0,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Color::White => 'W',
            Color::Blue => 'B',
            Color::Red => 'R',
        }
    }

    pub fn from_letter(c: char) -> Option<Color> {
        match c {
            'W' => Some(Color::White),
            'B' => Some(Color::Blue),
            'R' => Some(Color::Red),
            _ => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Base graph with precomputed neighborhood masks; shared by all states of
/// one game.
#[derive(Debug)]
pub struct Board {
    graph: Graph,
    closed: Vec<Mask>,
    ball2: Vec<Mask>,
    all: Mask,
}

impl Board {
    pub fn new(graph: Graph) -> Result<Self, EngineError> {
        let n = graph.n();
        if n > MAX_VERTICES {
            return Err(EngineError::TooLarge { n });
        }
        let closed: Vec<Mask> = (0..n)
            .map(|v| graph.neighbors(v).iter().fold(bit(v), |m, &w| m | bit(w)))
            .collect();
        let ball2 = (0..n)
            .map(|v| vertices(closed[v]).fold(0, |m, w| m | closed[w]))
            .collect();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Ok(Board { graph, closed, ball2, all })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn all(&self) -> Mask {
        self.all
    }

    /// Closed neighborhood `N[v]` as a mask.
    pub fn closed(&self, v: usize) -> Mask {
        self.closed[v]
    }

    #[inline]
    pub(crate) fn color_in(&self, dominated: Mask, v: usize) -> Color {
        if dominated & bit(v) == 0 {
            Color::White
        } else if self.closed[v] & !dominated == 0 {
            Color::Red
        } else {
            Color::Blue
        }
    }

    pub(crate) fn legal_mask(&self, dominated: Mask) -> Mask {
        let open = self.all & !dominated;
        (0..self.n()).filter(|&v| self.closed[v] & open != 0).fold(0, |m, v| m | bit(v))
    }

    pub(crate) fn is_legal(&self, dominated: Mask, v: usize) -> bool {
        v < self.n() && self.closed[v] & !dominated & self.all != 0
    }

    pub(crate) fn red_mask(&self, dominated: Mask) -> Mask {
        vertices(dominated).filter(|&v| self.closed[v] & !dominated == 0).fold(0, |m, v| m | bit(v))
    }

    pub(crate) fn potential(&self, dominated: Mask) -> u32 {
        let white = (self.all & !dominated).count_ones();
        let red = self.red_mask(dominated).count_ones();
        let blue = dominated.count_ones() - red;
        3 * white + 2 * blue
    }

    /// `(gain, newly red)` of playing `v`; only the ball of radius 2 around
    /// `v` can change color.
    #[inline]
    pub(crate) fn quick_gain(&self, dominated: Mask, v: usize) -> (u32, u32) {
        let after = dominated | self.closed[v];
        let (mut gain, mut reds) = (0u32, 0u32);
        for x in vertices(self.ball2[v]) {
            let (a, b) = (self.color_in(dominated, x), self.color_in(after, x));
            if a != b {
                gain += a.value() - b.value();
                if b == Color::Red {
                    reds += 1;
                }
            }
        }
        (gain, reds)
    }

    pub(crate) fn transitions(&self, dominated: Mask, v: usize) -> Vec<Transition> {
        let after = dominated | self.closed[v];
        vertices(self.ball2[v])
            .filter_map(|x| {
                let (from, to) = (self.color_in(dominated, x), self.color_in(after, x));
                (from != to).then_some(Transition { vertex: x, from, to })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub vertex: usize,
    pub from: Color,
    pub to: Color,
}

/// Result of one move: the points seized and every color change.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveOutcome {
    pub played: usize,
    pub gain: u32,
    pub transitions: Vec<Transition>,
    pub newly_red: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WhiteKind {
    SingleW,
    WPair,
    Larger,
}

/// A connected component of the subgraph induced by White vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WhiteComponent {
    pub kind: WhiteKind,
    pub vertices: Vec<usize>,
}

/// A residual path `v1..v5` colored W W B W W whose ends are residual leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CriticalP5 {
    pub path: [usize; 5],
    pub center: usize,
}

impl CriticalP5 {
    /// The two White stems next to the leaf ends.
    pub fn stems(&self) -> [usize; 2] {
        [self.path[1], self.path[3]]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub vertices: Vec<usize>,
    pub whites: Vec<usize>,
    pub blues: Vec<usize>,
    pub blue_leaves: Vec<usize>,
    /// A path of order 3 colored B W B.
    pub is_bwb: bool,
    /// A `K2` with one Blue and one White endpoint.
    pub is_bw_pair: bool,
}

impl ComponentReport {
    pub fn order(&self) -> usize {
        self.vertices.len()
    }
}

/// Raw structural facts about a residual graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub components: Vec<ComponentReport>,
    /// `(blue vertex, residual degree)`.
    pub blue_degrees: Vec<(usize, usize)>,
    pub single_whites_with_blue_leaf: Vec<usize>,
    pub single_whites_without_blue_leaf: Vec<usize>,
    pub white_pairs: Vec<(usize, usize)>,
}

/// A position of the game: the board plus the dominated set.
#[derive(Debug, Clone)]
pub struct ResidualState {
    board: Arc<Board>,
    dominated: Mask,
    moves: usize,
}

impl PartialEq for ResidualState {
    fn eq(&self, other: &Self) -> bool {
        self.dominated == other.dominated
            && self.moves == other.moves
            && (Arc::ptr_eq(&self.board, &other.board) || self.board.graph == other.board.graph)
    }
}

impl Eq for ResidualState {}

impl ResidualState {
    /// Fresh all-White state. The graph must be isolate-free.
    pub fn new(graph: &Graph) -> Result<Self, EngineError> {
        if let Some(&v) = graph.isolated_vertices().first() {
            return Err(EngineError::IsolatedVertexPresent { v });
        }
        Ok(Self::on_board(Arc::new(Board::new(graph.clone())?)))
    }

    pub fn on_board(board: Arc<Board>) -> Self {
        ResidualState { board, dominated: 0, moves: 0 }
    }

    pub(crate) fn with_dominated(board: Arc<Board>, dominated: Mask, moves: usize) -> Self {
        let dominated = dominated & board.all;
        ResidualState { board, dominated, moves }
    }

    pub fn board(&self) -> &Arc<Board> {
        &self.board
    }

    pub fn graph(&self) -> &Graph {
        &self.board.graph
    }

    pub fn n(&self) -> usize {
        self.board.n()
    }

    pub fn dominated(&self) -> Mask {
        self.dominated
    }

    pub fn move_count(&self) -> usize {
        self.moves
    }

    pub fn is_terminal(&self) -> bool {
        self.dominated == self.board.all
    }

    pub fn color(&self, v: usize) -> Color {
        self.board.color_in(self.dominated, v)
    }

    pub fn colors(&self) -> Vec<Color> {
        (0..self.n()).map(|v| self.color(v)).collect()
    }

    pub fn white_mask(&self) -> Mask {
        self.board.all & !self.dominated
    }

    pub fn red_mask(&self) -> Mask {
        self.board.red_mask(self.dominated)
    }

    pub fn blue_mask(&self) -> Mask {
        self.dominated & !self.red_mask()
    }

    pub fn white_count(&self) -> usize {
        self.white_mask().count_ones() as usize
    }

    pub fn blue_count(&self) -> usize {
        self.blue_mask().count_ones() as usize
    }

    pub fn red_count(&self) -> usize {
        self.red_mask().count_ones() as usize
    }

    /// `3·#White + 2·#Blue`.
    pub fn value(&self) -> u32 {
        self.board.potential(self.dominated)
    }

    pub fn legal_mask(&self) -> Mask {
        self.board.legal_mask(self.dominated)
    }

    /// Vertices whose closed neighborhood is not yet fully dominated.
    pub fn legal_moves(&self) -> Vec<usize> {
        vertices(self.legal_mask()).collect()
    }

    pub fn is_legal(&self, v: usize) -> bool {
        self.board.is_legal(self.dominated, v)
    }

    /// `(gain, newly red count)` without building transitions.
    pub fn quick_gain(&self, v: usize) -> Result<(u32, u32), EngineError> {
        if !self.is_legal(v) {
            return Err(EngineError::IllegalMove { v });
        }
        Ok(self.board.quick_gain(self.dominated, v))
    }

    /// The outcome of playing `v`, without changing the state.
    pub fn gain_of(&self, v: usize) -> Result<MoveOutcome, EngineError> {
        if !self.is_legal(v) {
            return Err(EngineError::IllegalMove { v });
        }
        let transitions = self.board.transitions(self.dominated, v);
        let gain = transitions.iter().map(|t| t.from.value() - t.to.value()).sum();
        let newly_red = transitions.iter().filter(|t| t.to == Color::Red).count() as u32;
        Ok(MoveOutcome { played: v, gain, transitions, newly_red })
    }

    pub fn apply_move(&self, v: usize) -> Result<(ResidualState, MoveOutcome), EngineError> {
        let outcome = self.gain_of(v)?;
        let next = ResidualState {
            board: Arc::clone(&self.board),
            dominated: self.dominated | self.board.closed[v],
            moves: self.moves + 1,
        };
        Ok((next, outcome))
    }

    pub fn play(&mut self, v: usize) -> Result<MoveOutcome, EngineError> {
        let (next, outcome) = self.apply_move(v)?;
        *self = next;
        Ok(outcome)
    }

    pub fn is_active(&self, v: usize) -> bool {
        self.color(v) != Color::Red
    }

    fn edge_active(&self, u: usize, v: usize) -> bool {
        let (cu, cv) = (self.color(u), self.color(v));
        cu != Color::Red && cv != Color::Red && !(cu == Color::Blue && cv == Color::Blue)
    }

    /// Neighbors of `v` in the residual graph (empty for Red `v`).
    pub fn residual_neighbors(&self, v: usize) -> Vec<usize> {
        if !self.is_active(v) {
            return Vec::new();
        }
        self.graph().neighbors(v).iter().copied().filter(|&w| self.edge_active(v, w)).collect()
    }

    pub fn residual_degree(&self, v: usize) -> usize {
        self.residual_neighbors(v).len()
    }

    pub fn active_edges(&self) -> Vec<(usize, usize)> {
        self.graph().edges().iter().copied().filter(|&(u, v)| self.edge_active(u, v)).collect()
    }

    /// Base edges that are no longer part of the residual graph.
    pub fn pruned_edges(&self) -> Vec<(usize, usize)> {
        self.graph().edges().iter().copied().filter(|&(u, v)| !self.edge_active(u, v)).collect()
    }

    /// The residual graph on the original vertex ids (Red vertices isolated).
    pub fn residual_graph(&self) -> Graph {
        Graph::new(self.n(), self.active_edges()).expect("subgraph of a simple graph")
    }

    /// Components of the residual graph, Red vertices excluded.
    pub fn residual_components(&self) -> Vec<Vec<usize>> {
        let g = self.residual_graph();
        g.components().into_iter().filter(|c| self.is_active(c[0])).collect()
    }

    pub fn white_components(&self) -> Vec<WhiteComponent> {
        let white = self.white_mask();
        let g = Graph::new(
            self.n(),
            self.graph()
                .edges()
                .iter()
                .copied()
                .filter(|&(u, v)| white & bit(u) != 0 && white & bit(v) != 0),
        )
        .expect("subgraph of a simple graph");
        g.components()
            .into_iter()
            .filter(|c| white & bit(c[0]) != 0)
            .map(|vertices| {
                let kind = match vertices.len() {
                    1 => WhiteKind::SingleW,
                    2 => WhiteKind::WPair,
                    _ => WhiteKind::Larger,
                };
                WhiteComponent { kind, vertices }
            })
            .collect()
    }

    /// All critical P5s, each reported once with `path[1] < path[3]`.
    pub fn critical_p5s(&self) -> Vec<CriticalP5> {
        let white = self.white_mask();
        let is_white = |v: usize| white & bit(v) != 0;
        // White vertices keep their full base neighborhood, so a White
        // residual leaf is a White base leaf.
        let white_leaf = |v: usize| is_white(v) && self.graph().degree(v) == 1;
        let mut out = Vec::new();
        for center in vertices(self.blue_mask()) {
            let stems: Vec<usize> =
                self.graph().neighbors(center).iter().copied().filter(|&w| is_white(w)).collect();
            for (i, &a) in stems.iter().enumerate() {
                for &b in &stems[i + 1..] {
                    let leaves = |s: usize| -> Vec<usize> {
                        self.graph().neighbors(s).iter().copied().filter(|&x| x != center && white_leaf(x)).collect()
                    };
                    for &la in &leaves(a) {
                        for &lb in &leaves(b) {
                            out.push(CriticalP5 { path: [la, a, center, b, lb], center });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn structure_report(&self) -> StructureReport {
        let colors = self.colors();
        let deg: Vec<usize> = (0..self.n()).map(|v| self.residual_degree(v)).collect();
        let blue_leaf = |v: usize| colors[v] == Color::Blue && deg[v] == 1;
        let components = self
            .residual_components()
            .into_iter()
            .map(|vertices| {
                let whites: Vec<usize> =
                    vertices.iter().copied().filter(|&v| colors[v] == Color::White).collect();
                let blues: Vec<usize> =
                    vertices.iter().copied().filter(|&v| colors[v] == Color::Blue).collect();
                let blue_leaves: Vec<usize> = blues.iter().copied().filter(|&v| blue_leaf(v)).collect();
                let is_bwb = vertices.len() == 3 && whites.len() == 1 && blue_leaves.len() == 2;
                let is_bw_pair = vertices.len() == 2 && whites.len() == 1 && blues.len() == 1;
                ComponentReport { vertices, whites, blues, blue_leaves, is_bwb, is_bw_pair }
            })
            .collect();
        let blue_degrees = vertices(self.blue_mask()).map(|v| (v, deg[v])).collect();
        let mut with_leaf = Vec::new();
        let mut without_leaf = Vec::new();
        let mut white_pairs = Vec::new();
        for wc in self.white_components() {
            match wc.kind {
                WhiteKind::SingleW => {
                    let v = wc.vertices[0];
                    if self.residual_neighbors(v).iter().any(|&w| blue_leaf(w)) {
                        with_leaf.push(v);
                    } else {
                        without_leaf.push(v);
                    }
                }
                WhiteKind::WPair => white_pairs.push((wc.vertices[0], wc.vertices[1])),
                WhiteKind::Larger => {}
            }
        }
        StructureReport {
            components,
            blue_degrees,
            single_whites_with_blue_leaf: with_leaf,
            single_whites_without_blue_leaf: without_leaf,
            white_pairs,
        }
    }

    /// Edge list plus a `colors` line and a `moves` line.
    pub fn to_snapshot(&self) -> String {
        let letters: String = self.colors().iter().map(|c| c.letter()).collect();
        format!("{}colors {letters}\nmoves {}\n", to_edge_list(self.graph()), self.moves)
    }

    /// Loads a snapshot; the colors must be consistent with some dominated
    /// set (White exactly on the undominated vertices).
    pub fn from_snapshot(text: &str) -> Result<Self, EngineError> {
        let mut letters = None;
        let mut moves = 0;
        let mut body = String::new();
        for line in text.lines() {
            let t = line.trim();
            if let Some(rest) = t.strip_prefix("colors") {
                letters = Some(rest.trim().to_string());
            } else if let Some(rest) = t.strip_prefix("moves") {
                moves = rest.trim().parse().map_err(|_| EngineError::Snapshot(format!("bad move count {rest:?}")))?;
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        let graph = parse_graph(&body)?.value;
        let letters = letters.ok_or_else(|| EngineError::Snapshot("missing colors line".into()))?;
        let colors: Vec<Color> = letters
            .chars()
            .map(|c| Color::from_letter(c).ok_or_else(|| EngineError::Snapshot(format!("unknown color {c:?}"))))
            .collect::<Result<_, _>>()?;
        if colors.len() != graph.n() {
            return Err(EngineError::Snapshot(format!("{} colors for {} vertices", colors.len(), graph.n())));
        }
        if let Some(&v) = graph.isolated_vertices().first() {
            return Err(EngineError::IsolatedVertexPresent { v });
        }
        let board = Arc::new(Board::new(graph)?);
        let dominated = colors.iter().enumerate().filter(|(_, &c)| c != Color::White).fold(0, |m, (v, _)| m | bit(v));
        let state = ResidualState::with_dominated(board, dominated, moves);
        if state.colors() != colors {
            return Err(EngineError::Snapshot("colors inconsistent with the dominated set".into()));
        }
        Ok(state)
    }
}

impl fmt::Display for ResidualState {
    /// One line per active vertex: `v:C -> neighbors`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in 0..self.n() {
            if !self.is_active(v) {
                continue;
            }
            let nb: Vec<String> = self.residual_neighbors(v).iter().map(|w| format!("{w}{}", self.color(*w))).collect();
            writeln!(f, "{v}{} -> {}", self.color(v), nb.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Forest;

    fn p(n: usize) -> ResidualState {
        ResidualState::new(&Forest::path(n)).unwrap()
    }

    fn snapshot(n: usize, edges: &[(usize, usize)], colors: &str) -> ResidualState {
        let g = Graph::new(n, edges.iter().copied()).unwrap();
        ResidualState::from_snapshot(&format!("{}colors {colors}\n", to_edge_list(&g))).unwrap()
    }

    #[test]
    fn init_values() {
        let s = p(3);
        assert!(s.colors().iter().all(|&c| c == Color::White));
        assert_eq!(s.value(), 9);
        let two = Forest::path(2).disjoint_union(&Forest::path(2));
        assert_eq!(ResidualState::new(&two).unwrap().value(), 12);
        assert_eq!(
            ResidualState::new(&Graph::empty(1)),
            Err(EngineError::IsolatedVertexPresent { v: 0 })
        );
        assert_eq!(ResidualState::new(&Forest::path(70)).unwrap_err(), EngineError::TooLarge { n: 70 });
    }

    #[test]
    fn legal_moves_shrink() {
        let s = p(3);
        assert_eq!(s.legal_moves(), vec![0, 1, 2]);
        let (t, _) = s.apply_move(1).unwrap();
        assert!(t.is_terminal());
        assert!(t.legal_moves().is_empty());
        let (t, _) = p(5).apply_move(1).unwrap();
        assert_eq!(t.legal_moves(), vec![2, 3, 4]);
        assert_eq!(t.colors(), vec![Color::Red, Color::Red, Color::Blue, Color::White, Color::White]);
    }

    #[test]
    fn gains() {
        let o = p(3).gain_of(1).unwrap();
        assert_eq!(o.gain, 9);
        assert_eq!(o.newly_red, 3);
        let o = p(5).gain_of(1).unwrap();
        assert_eq!(o.gain, 7);
        assert_eq!(
            o.transitions,
            vec![
                Transition { vertex: 0, from: Color::White, to: Color::Red },
                Transition { vertex: 1, from: Color::White, to: Color::Red },
                Transition { vertex: 2, from: Color::White, to: Color::Blue },
            ]
        );
        // B-W-B component, center played
        let bwb = snapshot(3, &[(0, 1), (1, 2)], "BWB");
        assert_eq!(bwb.gain_of(1).unwrap().gain, 7);
        // B-W pair, either endpoint
        let bw = snapshot(2, &[(0, 1)], "BW");
        assert_eq!(bw.gain_of(0).unwrap().gain, 5);
        assert_eq!(bw.gain_of(1).unwrap().gain, 5);
    }

    #[test]
    fn apply_sequences() {
        let (t, o) = p(2).apply_move(0).unwrap();
        assert!(t.is_terminal());
        assert_eq!(o.gain, 6);
        let (t, _) = p(5).apply_move(1).unwrap();
        assert_eq!(t.value(), 8);
        let (u, _) = t.apply_move(2).unwrap();
        assert_eq!(u.colors()[2..], [Color::Red, Color::Blue, Color::White]);
        assert_eq!(u.value(), 5);
        assert_eq!(u.active_edges(), vec![(3, 4)]);
        assert_eq!(u.move_count(), 2);
        assert_eq!(t.apply_move(0).unwrap_err(), EngineError::IllegalMove { v: 0 });
        assert_eq!(t.gain_of(9).unwrap_err(), EngineError::IllegalMove { v: 9 });
    }

    #[test]
    fn white_component_kinds() {
        assert_eq!(p(2).white_components()[0].kind, WhiteKind::WPair);
        assert_eq!(p(3).white_components()[0].kind, WhiteKind::Larger);
        let (t, _) = p(5).apply_move(1).unwrap();
        assert_eq!(
            t.white_components(),
            vec![WhiteComponent { kind: WhiteKind::WPair, vertices: vec![3, 4] }]
        );
    }

    #[test]
    fn critical_p5_detection() {
        let s = snapshot(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], "WWBWW");
        let hits = s.critical_p5s();
        assert_eq!(hits, vec![CriticalP5 { path: [0, 1, 2, 3, 4], center: 2 }]);
        assert!(p(5).critical_p5s().is_empty());
        // v5 has an extra White neighbor, so it is not a leaf
        let s = snapshot(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)], "WWBWWW");
        assert!(s.critical_p5s().is_empty());
    }

    #[test]
    fn structure_reports() {
        let bw = snapshot(2, &[(0, 1)], "BW");
        let r = bw.structure_report();
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].blue_leaves, vec![0]);
        assert!(r.components[0].is_bw_pair);
        assert!(p(6).structure_report().blue_degrees.is_empty());
        let (t, _) = p(5).apply_move(1).unwrap();
        let r = t.structure_report();
        assert_eq!(r.blue_degrees, vec![(2, 1)]);
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].order(), 3);
        assert_eq!(r.components[0].blue_leaves, vec![2]);
    }

    #[test]
    fn blue_blue_edges_are_pruned() {
        // x=0, a=1, b=2, y=3 on a path; 4 hangs off a, 5 off b
        let g = Forest::new(6, [(0, 1), (1, 2), (2, 3), (1, 4), (2, 5)]).unwrap();
        let mut s = ResidualState::new(&g).unwrap();
        s.play(4).unwrap();
        s.play(5).unwrap();
        let letters: String = s.colors().iter().map(|c| c.letter()).collect();
        assert_eq!(letters, "WBBWRR");
        assert_eq!(s.residual_neighbors(1), vec![0]);
        assert_eq!(s.active_edges(), vec![(0, 1), (2, 3)]);
        assert!(s.pruned_edges().contains(&(1, 2)));
        assert_eq!(s.residual_components(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn snapshot_roundtrip_and_rejects() {
        let (t, _) = p(5).apply_move(1).unwrap();
        let text = t.to_snapshot();
        assert_eq!(ResidualState::from_snapshot(&text).unwrap(), t);
        // Red vertex next to a White one is impossible
        let bad = "2\n0 1\ncolors RW\n";
        assert!(matches!(ResidualState::from_snapshot(bad), Err(EngineError::Snapshot(_))));
        assert!(ResidualState::from_snapshot("2\n0 1\n").is_err());
    }
}
