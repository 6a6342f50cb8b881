//! Edge-list text format.
//!
//! ```text
//! # comment
//! 5
//! 0 1
//! 1 2
//! ```
//! The first non-comment line is the vertex count, every further non-empty
//! line is one edge `u v`.

use std::fmt::Write as _;

use super::{Forest, Graph, GraphError};

/// Non-fatal findings from parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWarning {
    IsolatedVertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<ParseWarning>,
}

impl<T> Parsed<T> {
    pub fn has_isolated_vertices(&self) -> bool {
        self.warnings.iter().any(|w| matches!(w, ParseWarning::IsolatedVertex(_)))
    }
}

fn parse_index(tok: &str, line: usize, text: &str) -> Result<usize, GraphError> {
    tok.parse().map_err(|_| GraphError::MalformedLine { line, text: text.to_string() })
}

/// Parses any simple graph; cycles are allowed.
pub fn parse_graph(text: &str) -> Result<Parsed<Graph>, GraphError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        match (n, toks.as_slice()) {
            (None, [count]) => n = Some(parse_index(count, line, raw)?),
            (None, _) => return Err(GraphError::MissingHeader),
            (Some(_), [u, v]) => {
                edges.push((parse_index(u, line, raw)?, parse_index(v, line, raw)?));
            }
            (Some(_), _) => {
                return Err(GraphError::MalformedLine { line, text: raw.to_string() });
            }
        }
    }
    let n = n.ok_or(GraphError::MissingHeader)?;
    let graph = Graph::new(n, edges)?;
    let warnings = graph.isolated_vertices().into_iter().map(ParseWarning::IsolatedVertex).collect();
    Ok(Parsed { value: graph, warnings })
}

/// Parses a forest; a cycle is reported as [`GraphError::CycleDetected`].
pub fn parse_edge_list(text: &str) -> Result<Parsed<Forest>, GraphError> {
    let Parsed { value, warnings } = parse_graph(text)?;
    Ok(Parsed { value: Forest::try_from(value)?, warnings })
}

/// Serializes with edges sorted lexicographically, `u < v` on each line.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.n());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_p5() {
        let f = parse_edge_list("5\n0 1\n1 2\n2 3\n3 4").unwrap();
        assert_eq!(f.value.n(), 5);
        assert_eq!(f.value.edge_count(), 4);
        assert!(f.warnings.is_empty());
    }

    #[test]
    fn parses_k2_with_comments() {
        let f = parse_edge_list("# a K2\n2\n\n# edge\n0 1\n").unwrap();
        assert_eq!(f.value.edges(), &[(0, 1)]);
    }

    #[test]
    fn triangle_is_rejected() {
        assert!(matches!(
            parse_edge_list("3\n0 1\n1 2\n2 0"),
            Err(GraphError::CycleDetected { .. })
        ));
        // but the general parser keeps it
        assert_eq!(parse_graph("3\n0 1\n1 2\n2 0").unwrap().value.edge_count(), 3);
    }

    #[test]
    fn error_cases() {
        assert!(matches!(parse_edge_list("2\n0 1\n0 1"), Err(GraphError::DuplicateEdge { .. })));
        assert!(matches!(parse_edge_list("2\n0 5"), Err(GraphError::VertexOutOfRange { v: 5, n: 2 })));
        assert!(matches!(parse_edge_list("2\n0 x"), Err(GraphError::MalformedLine { line: 2, .. })));
        assert!(matches!(parse_edge_list("2\n0 1 2"), Err(GraphError::MalformedLine { .. })));
        assert_eq!(parse_edge_list("# nothing\n"), Err(GraphError::MissingHeader));
    }

    #[test]
    fn isolated_vertices_are_flagged_not_fatal() {
        let p = parse_edge_list("3\n0 1").unwrap();
        assert_eq!(p.warnings, vec![ParseWarning::IsolatedVertex(2)]);
        assert!(p.has_isolated_vertices());
    }

    #[test]
    fn serialization_sorts_edges() {
        let g = Graph::new(4, [(3, 2), (1, 0), (2, 0)]).unwrap();
        assert_eq!(to_edge_list(&g), "4\n0 1\n0 2\n2 3\n");
        assert_eq!(parse_graph(&to_edge_list(&g)).unwrap().value, g);
    }
}
