//! Seeded random generators for forests, trees and caterpillars.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Forest, GraphError};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Decodes a Prüfer sequence over `0..len+2` into tree edges.
pub(crate) fn prufer_edges(code: &[usize]) -> Vec<(usize, usize)> {
    let n = code.len() + 2;
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let Reverse(leaf) = leaves.pop().expect("a Prüfer code always has a free leaf");
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(Reverse(c));
        }
    }
    let Reverse(a) = leaves.pop().expect("two vertices remain");
    let Reverse(b) = leaves.pop().expect("two vertices remain");
    edges.push((a, b));
    edges
}

fn tree_edges<R: Rng>(size: usize, rng: &mut R) -> Vec<(usize, usize)> {
    match size {
        0 | 1 => Vec::new(),
        2 => vec![(0, 1)],
        _ => {
            let code: Vec<usize> = (0..size - 2).map(|_| rng.gen_range(0..size)).collect();
            prufer_edges(&code)
        }
    }
}

/// Uniform random labeled tree on `n >= 1` vertices.
pub fn random_tree(n: usize, seed: u64) -> Forest {
    let mut r = rng(seed);
    Forest::new(n.max(1), tree_edges(n, &mut r)).expect("Prüfer decoding yields a tree")
}

/// Isolate-free random forest with exactly `components` trees.
pub fn random_forest(n: usize, components: usize, seed: u64) -> Result<Forest, GraphError> {
    build_forest(n, components, seed, 2)
}

/// Like [`random_forest`] but components may be single vertices.
pub fn random_forest_allowing_isolates(
    n: usize,
    components: usize,
    seed: u64,
) -> Result<Forest, GraphError> {
    build_forest(n, components, seed, 1)
}

fn build_forest(
    n: usize,
    components: usize,
    seed: u64,
    min_size: usize,
) -> Result<Forest, GraphError> {
    if n == 0 || components == 0 || components * min_size > n {
        return Err(GraphError::InfeasibleShape { n, components });
    }
    let mut r = rng(seed);
    // stars and bars over the vertices left after the per-component minimum
    let spare = n - components * min_size;
    let mut bars: Vec<usize> = index::sample(&mut r, spare + components - 1, components - 1).into_vec();
    bars.sort_unstable();
    let mut sizes = Vec::with_capacity(components);
    let mut prev = 0usize;
    for (i, &b) in bars.iter().enumerate() {
        sizes.push(b - i - prev + min_size);
        prev = b - i;
    }
    sizes.push(spare - prev + min_size);
    debug_assert_eq!(sizes.iter().sum::<usize>(), n);

    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut r);
    let mut edges = Vec::with_capacity(n - components);
    let mut offset = 0;
    for size in sizes {
        for (u, v) in tree_edges(size, &mut r) {
            edges.push((perm[offset + u], perm[offset + v]));
        }
        offset += size;
    }
    Forest::new(n, edges)
}

/// Random caterpillar: a tree whose non-leaf vertices induce a path.
pub fn random_caterpillar(n: usize, seed: u64) -> Forest {
    assert!(n >= 2, "a caterpillar needs at least two vertices");
    if n == 2 {
        return Forest::path(2);
    }
    let mut r = rng(seed);
    let spine = r.gen_range(1..=n - 2);
    let mut edges: Vec<(usize, usize)> = (1..spine).map(|i| (i - 1, i)).collect();
    let mut next = spine;
    // each spine end needs a leaf, a lone spine vertex needs two
    let anchors: Vec<usize> = if spine == 1 { vec![0, 0] } else { vec![0, spine - 1] };
    for a in anchors {
        edges.push((a, next));
        next += 1;
    }
    while next < n {
        edges.push((r.gen_range(0..spine), next));
        next += 1;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut r);
    Forest::new(n, edges.into_iter().map(|(u, v)| (perm[u], perm[v])))
        .expect("caterpillar construction is acyclic")
}
