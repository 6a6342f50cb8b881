//! Test-side oracles written without the engine: plain adjacency lists,
//! boolean vectors and exhaustive search.
#![allow(dead_code)]

use std::collections::BTreeMap;

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

/// Unmemoized minimax value of the domination game.
pub fn naive_game_value(n: usize, edges: &[(usize, usize)], dominator_first: bool) -> u32 {
    let adj = adjacency(n, edges);
    let mut dominated = vec![false; n];
    minimax(&adj, &mut dominated, dominator_first)
}

fn minimax(adj: &[Vec<usize>], dominated: &mut Vec<bool>, dominator: bool) -> u32 {
    if dominated.iter().all(|&d| d) {
        return 0;
    }
    let mut best: Option<u32> = None;
    for v in 0..adj.len() {
        let closed: Vec<usize> = std::iter::once(v).chain(adj[v].iter().copied()).collect();
        let fresh: Vec<usize> = closed.into_iter().filter(|&w| !dominated[w]).collect();
        if fresh.is_empty() {
            continue;
        }
        for &w in &fresh {
            dominated[w] = true;
        }
        let value = 1 + minimax(adj, dominated, !dominator);
        for &w in &fresh {
            dominated[w] = false;
        }
        best = Some(match best {
            None => value,
            Some(b) if dominator => b.min(value),
            Some(b) => b.max(value),
        });
    }
    best.expect("a non-dominated graph has a legal move")
}

/// Smallest dominating set size by trying subsets in order of size.
pub fn naive_domination_number(n: usize, edges: &[(usize, usize)]) -> usize {
    let adj = adjacency(n, edges);
    let closed: Vec<u64> = (0..n)
        .map(|v| adj[v].iter().fold(1u64 << v, |m, &w| m | (1u64 << w)))
        .collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    (0..=n)
        .find(|&k| subsets_of_size(n, k).any(|s| (0..n).filter(|&v| s >> v & 1 == 1).fold(0, |m, v| m | closed[v]) == all))
        .expect("the whole vertex set dominates")
}

fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    (0u64..(1u64 << n)).filter(move |s| s.count_ones() as usize == k)
}

/// Breadth-first distances from `src`.
pub fn distances(adj: &[Vec<usize>], src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[src] = Some(0);
    let mut queue = std::collections::VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(dist[u].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Canonical string of a free tree: AHU encoding rooted at each center,
/// taking the smaller one.
pub fn tree_code(n: usize, edges: &[(usize, usize)]) -> String {
    let adj = adjacency(n, edges);
    if n == 1 {
        return "()".to_string();
    }
    // peel leaves to find the center(s)
    let mut degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.iter().map(|&c| rooted_code(&adj, c, usize::MAX)).min().unwrap()
}

fn rooted_code(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v].iter().filter(|&&w| w != parent).map(|&w| rooted_code(adj, w, v)).collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// All free trees of each order `1..=n_max`, grown leaf by leaf and
/// deduplicated by [`tree_code`]. Returns edge lists per order.
pub fn grown_trees(n_max: usize) -> Vec<Vec<Vec<(usize, usize)>>> {
    let mut by_order: Vec<Vec<Vec<(usize, usize)>>> = vec![Vec::new(), vec![Vec::new()]];
    for n in 2..=n_max {
        let mut seen: BTreeMap<String, Vec<(usize, usize)>> = BTreeMap::new();
        for t in &by_order[n - 1] {
            for v in 0..n - 1 {
                let mut e = t.clone();
                e.push((v, n - 1));
                seen.entry(tree_code(n, &e)).or_insert(e);
            }
        }
        by_order.push(seen.into_values().collect());
    }
    by_order
}
