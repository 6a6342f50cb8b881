//! Non-isomorphic free trees via level sequences.
//!
//! Rooted trees are generated as canonical level sequences in decreasing
//! lexicographic order (each rooted tree exactly once). A rooted tree is
//! emitted only when its root is a centroid; with two centroids the rooting
//! with the larger canonical sequence wins, so every free tree appears once.

use super::{Forest, Graph, GraphError};

pub const DEFAULT_ENUMERATION_LIMIT: usize = 18;

/// Streams one representative per isomorphism class of trees of order `n`.
pub fn enumerate_trees(n: usize) -> Result<TreeEnumerator, GraphError> {
    enumerate_trees_with_limit(n, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_trees_with_limit(n: usize, limit: usize) -> Result<TreeEnumerator, GraphError> {
    if n == 0 || n > limit {
        return Err(GraphError::LimitExceeded { n, limit });
    }
    Ok(TreeEnumerator { levels: (0..n).collect(), done: false })
}

/// Number of free trees of order `n` (by enumeration).
pub fn count_trees(n: usize) -> Result<usize, GraphError> {
    Ok(enumerate_trees(n)?.count())
}

pub struct TreeEnumerator {
    levels: Vec<usize>,
    done: bool,
}

impl TreeEnumerator {
    fn advance(&mut self) {
        let l = &mut self.levels;
        let Some(p) = l.iter().rposition(|&x| x > 1) else {
            self.done = true;
            return;
        };
        let q = (0..p).rev().find(|&q| l[q] == l[p] - 1).expect("level sequences have parents");
        let shift = p - q;
        for i in p..l.len() {
            l[i] = l[i - shift];
        }
    }
}

impl Iterator for TreeEnumerator {
    type Item = Forest;

    fn next(&mut self) -> Option<Forest> {
        while !self.done {
            let accept = centroid_canonical(&self.levels);
            let tree = accept.then(|| levels_to_tree(&self.levels));
            self.advance();
            if tree.is_some() {
                return tree;
            }
        }
        None
    }
}

fn levels_to_tree(levels: &[usize]) -> Forest {
    let mut stack: Vec<usize> = Vec::new();
    let mut edges = Vec::with_capacity(levels.len().saturating_sub(1));
    for (v, &lv) in levels.iter().enumerate() {
        stack.truncate(lv);
        if let Some(&parent) = stack.last() {
            edges.push((parent, v));
        }
        stack.push(v);
    }
    Forest::new(levels.len(), edges).expect("level sequences describe trees")
}

fn centroid_canonical(levels: &[usize]) -> bool {
    let n = levels.len();
    let starts: Vec<usize> = (1..n).filter(|&i| levels[i] == 1).collect();
    let mut half_child = None;
    for (k, &s) in starts.iter().enumerate() {
        let end = starts.get(k + 1).copied().unwrap_or(n);
        let size = end - s;
        if 2 * size > n {
            return false;
        }
        if 2 * size == n {
            half_child = Some(s);
        }
    }
    match half_child {
        None => true,
        Some(c) => {
            let tree = levels_to_tree(levels);
            levels.to_vec() >= rooted_canonical_form(&tree, c)
        }
    }
}

/// Canonical level sequence of `g` rooted at `root` (largest ordering).
pub fn rooted_canonical_form(g: &Graph, root: usize) -> Vec<usize> {
    fn encode(g: &Graph, v: usize, parent: Option<usize>, depth: usize) -> Vec<usize> {
        let mut kids: Vec<Vec<usize>> = g
            .neighbors(v)
            .iter()
            .filter(|&&w| Some(w) != parent)
            .map(|&w| encode(g, w, Some(v), depth + 1))
            .collect();
        kids.sort_unstable_by(|a, b| b.cmp(a));
        let mut out = vec![depth];
        for k in kids {
            out.extend(k);
        }
        out
    }
    encode(g, root, None, 0)
}

/// Isomorphism-invariant code of a tree: the largest rooted canonical form
/// over its centroids. Panics on graphs that are not trees.
pub fn tree_canonical_form(g: &Graph) -> Vec<usize> {
    assert!(g.n() >= 1 && g.edge_count() + 1 == g.n(), "not a tree");
    let n = g.n();
    // subtree sizes from an arbitrary root to find centroids
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![0];
    let mut seen = vec![false; n];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    let mut size = vec![1usize; n];
    for &v in order.iter().rev() {
        if parent[v] != usize::MAX {
            size[parent[v]] += size[v];
        }
    }
    let centroids = (0..n).filter(|&v| {
        let up = n - size[v];
        let down = g.neighbors(v).iter().filter(|&&w| parent[w] == v).map(|&w| size[w]).max().unwrap_or(0);
        2 * up.max(down) <= n
    });
    centroids.map(|c| rooted_canonical_form(g, c)).max().expect("every tree has a centroid")
}
