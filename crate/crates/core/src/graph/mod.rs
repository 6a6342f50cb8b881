//! Simple undirected graphs and forests with vertex ids `0..n`.
//!
//! [`Graph`] accepts any simple graph; [`Forest`] additionally guarantees
//! acyclicity and is the board type for the strategy and verification
//! layers. Vertex ids are never relabeled after construction.

mod classify;
mod enumerate;
mod generate;
mod io;

use std::collections::VecDeque;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use classify::{classify_vertices, leaf_pair_at_distance, VertexClass};
pub use enumerate::{
    count_trees, enumerate_trees, enumerate_trees_with_limit, rooted_canonical_form,
    tree_canonical_form, TreeEnumerator, DEFAULT_ENUMERATION_LIMIT,
};
pub use generate::{random_caterpillar, random_forest, random_forest_allowing_isolates, random_tree};
pub use io::{parse_edge_list, parse_graph, to_edge_list, ParseWarning, Parsed};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {u}-{v} closes a cycle")]
    CycleDetected { u: usize, v: usize },
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },
    #[error("vertex {v} out of range for n = {n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("line {line}: malformed input {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("missing vertex-count header line")]
    MissingHeader,
    #[error("cannot build {components} isolate-free components on {n} vertices")]
    InfeasibleShape { n: usize, components: usize },
    #[error("order {n} exceeds the enumeration limit {limit}")]
    LimitExceeded { n: usize, limit: usize },
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = GraphError;
    fn try_from(r: GraphRepr) -> Result<Self, Self::Error> {
        Graph::new(r.n, r.edges)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { n: g.n(), edges: g.edges }
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, parallel edges and ids `>= n`.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { v: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { v: u });
            }
            if adj[u].contains(&v) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
            adj[u].push(v);
            adj[v].push(u);
            list.push((u.min(v), u.max(v)));
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        list.sort_unstable();
        Ok(Graph { adj, edges: list })
    }

    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.adj[v].is_empty()).collect()
    }

    pub fn is_isolate_free(&self) -> bool {
        self.adj.iter().all(|nb| !nb.is_empty())
    }

    /// First edge (in sorted order) that closes a cycle, if any.
    pub fn find_cycle_edge(&self) -> Option<(usize, usize)> {
        let mut uf = UnionFind::new(self.n());
        self.edges.iter().copied().find(|&(u, v)| !uf.union(u, v))
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle_edge().is_none()
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// BFS distances from `src`; `None` for unreachable vertices.
    pub fn distances_from(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n(), "permutation length mismatch");
        Graph::new(self.n(), self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
            .expect("relabeling preserves simplicity")
    }
}

/// An acyclic [`Graph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Graph", into = "Graph")]
pub struct Forest(Graph);

impl Forest {
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Graph::new(n, edges)?.try_into()
    }

    pub fn path(n: usize) -> Self {
        Forest::new(n, (1..n).map(|v| (v - 1, v))).expect("paths are forests")
    }

    /// `K_{1,leaves}` with the center at vertex 0.
    pub fn star(leaves: usize) -> Self {
        Forest::new(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("stars are forests")
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Forest) -> Forest {
        let off = self.n();
        let edges = self
            .edges()
            .iter()
            .copied()
            .chain(other.edges().iter().map(|&(u, v)| (u + off, v + off)));
        Forest::new(off + other.n(), edges).expect("union of forests is a forest")
    }

    pub fn graph(&self) -> &Graph {
        &self.0
    }

    pub fn into_graph(self) -> Graph {
        self.0
    }

    pub fn relabeled(&self, perm: &[usize]) -> Forest {
        Forest(self.0.relabeled(perm))
    }
}

impl Deref for Forest {
    type Target = Graph;
    fn deref(&self) -> &Graph {
        &self.0
    }
}

impl TryFrom<Graph> for Forest {
    type Error = GraphError;
    fn try_from(g: Graph) -> Result<Self, Self::Error> {
        match g.find_cycle_edge() {
            Some((u, v)) => Err(GraphError::CycleDetected { u, v }),
            None => Ok(Forest(g)),
        }
    }
}

impl From<Forest> for Graph {
    fn from(f: Forest) -> Graph {
        f.0
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::new(2, [(0, 0)]), Err(GraphError::SelfLoop { v: 0 }));
        assert_eq!(
            Graph::new(2, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { u: 1, v: 0 })
        );
        assert_eq!(
            Graph::new(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange { v: 2, n: 2 })
        );
    }

    #[test]
    fn triangle_is_not_a_forest() {
        let g = Graph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!g.is_acyclic());
        assert!(matches!(Forest::try_from(g), Err(GraphError::CycleDetected { .. })));
    }

    #[test]
    fn components_and_distances() {
        let f = Forest::path(3).disjoint_union(&Forest::path(2));
        assert_eq!(f.components(), vec![vec![0, 1, 2], vec![3, 4]]);
        let d = f.distances_from(0);
        assert_eq!(d[2], Some(2));
        assert_eq!(d[3], None);
    }

    #[test]
    fn serde_rejects_cycles() {
        let json = r#"{"n":3,"edges":[[0,1],[1,2],[0,2]]}"#;
        assert!(serde_json::from_str::<Forest>(json).is_err());
        let ok: Forest = serde_json::from_str(r#"{"n":2,"edges":[[0,1]]}"#).unwrap();
        assert_eq!(ok.edge_count(), 1);
    }
}
