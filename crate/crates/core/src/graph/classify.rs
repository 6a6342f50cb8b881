use serde::Serialize;

use super::Graph;

/// Leaves, stems and the remaining (internal) vertices of a graph.
///
/// In a `K2` component both endpoints are leaves and stems at once.
/// Isolated vertices belong to none of the three sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexClass {
    pub leaves: Vec<usize>,
    pub stems: Vec<usize>,
    pub internal: Vec<usize>,
}

pub fn classify_vertices(g: &Graph) -> VertexClass {
    let is_leaf: Vec<bool> = (0..g.n()).map(|v| g.degree(v) == 1).collect();
    let mut class = VertexClass { leaves: Vec::new(), stems: Vec::new(), internal: Vec::new() };
    for v in 0..g.n() {
        let stem = g.neighbors(v).iter().any(|&w| is_leaf[w]);
        if is_leaf[v] {
            class.leaves.push(v);
        }
        if stem {
            class.stems.push(v);
        }
        if !is_leaf[v] && !stem && g.degree(v) > 0 {
            class.internal.push(v);
        }
    }
    class
}

/// True iff two distinct leaves lie at distance exactly `d`.
pub fn leaf_pair_at_distance(g: &Graph, d: usize) -> bool {
    let leaves: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) == 1).collect();
    leaves.iter().any(|&a| {
        let dist = g.distances_from(a);
        leaves.iter().any(|&b| b != a && dist[b] == Some(d))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Forest;

    #[test]
    fn p5_classes() {
        let c = classify_vertices(&Forest::path(5));
        assert_eq!(c.leaves, vec![0, 4]);
        assert_eq!(c.stems, vec![1, 3]);
        assert_eq!(c.internal, vec![2]);
    }

    #[test]
    fn star_classes() {
        let c = classify_vertices(&Forest::star(4));
        assert_eq!(c.leaves, vec![1, 2, 3, 4]);
        assert_eq!(c.stems, vec![0]);
    }

    #[test]
    fn k2_is_leaf_and_stem() {
        let c = classify_vertices(&Forest::path(2));
        assert_eq!(c.leaves, vec![0, 1]);
        assert_eq!(c.stems, vec![0, 1]);
        assert!(c.internal.is_empty());
    }

    #[test]
    fn leaf_distances() {
        assert!(leaf_pair_at_distance(&Forest::path(5), 4));
        assert!(!leaf_pair_at_distance(&Forest::path(4), 4));
        // spider: center 0 with legs 0-1-2, 0-3-4, 0-5-6
        let spider = Forest::new(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        assert!(leaf_pair_at_distance(&spider, 4));
        // leaves in different components have no distance
        let two = Forest::path(3).disjoint_union(&Forest::path(3));
        assert!(!leaf_pair_at_distance(&two, 4));
        assert!(leaf_pair_at_distance(&two, 2));
    }
}
