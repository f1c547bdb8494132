//! Plain-text edge lists.
//!
//! ```text
//! n m
//! u v
//! ...
//! ```
//!
//! The header gives the vertex and edge counts, followed by exactly `m`
//! whitespace-separated pairs with `0 <= u < v < n`. [`save_edge_list`]
//! writes edges sorted lexicographically, which is the canonical form.
//! The loader also accepts `u > v` and normalizes it.

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EdgeListError {
    #[error("malformed header: {0}")]
    Header(String),
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("header announces {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn load_edge_list(text: &str) -> Result<Graph, EdgeListError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| EdgeListError::Header("empty input".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [n, m] = fields[..] else {
        return Err(EdgeListError::Header(format!("expected \"n m\", got {header:?}")));
    };
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| EdgeListError::Header(format!("not a count: {s:?}")))
    };
    let (n, m) = (parse(n)?, parse(m)?);
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let fields: Vec<&str> = l.split_whitespace().collect();
        let [u, v] = fields[..] else {
            return Err(EdgeListError::Line {
                line,
                msg: format!("expected \"u v\", got {l:?}"),
            });
        };
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| EdgeListError::Line {
                line,
                msg: format!("not a vertex id: {s:?}"),
            })
        };
        edges.push((parse(u)?, parse(v)?));
    }
    if edges.len() != m {
        return Err(EdgeListError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    Ok(Graph::from_edges(n, edges)?)
}

pub fn save_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_path() {
        let g = load_edge_list("3 2\n0 1\n1 2").unwrap();
        assert_eq!(g.n(), 3);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
    }

    #[test]
    fn canonical_save_sorts_edges() {
        let g = load_edge_list("4 3\n2 3\n1 0\n0 3\n").unwrap();
        assert_eq!(save_edge_list(&g), "4 3\n0 1\n0 3\n2 3\n");
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(
            load_edge_list("2 1\n0 0"),
            Err(EdgeListError::Graph(GraphError::SelfLoop(0)))
        );
        assert_eq!(
            load_edge_list("3 2\n0 1\n1 0"),
            Err(EdgeListError::Graph(GraphError::DuplicateEdge(0, 1)))
        );
        assert_eq!(
            load_edge_list("3 1\n0 3"),
            Err(EdgeListError::Graph(GraphError::VertexOutOfRange { vertex: 3, n: 3 }))
        );
        assert!(matches!(load_edge_list("3"), Err(EdgeListError::Header(_))));
        assert!(matches!(load_edge_list(""), Err(EdgeListError::Header(_))));
        assert!(matches!(load_edge_list("3 1\n0 x"), Err(EdgeListError::Line { line: 2, .. })));
        assert!(matches!(load_edge_list("3 2\n0 1"), Err(EdgeListError::EdgeCount { .. })));
    }

    #[test]
    fn empty_graph_round_trips() {
        let g = load_edge_list("5 0\n").unwrap();
        assert_eq!(save_edge_list(&g), "5 0\n");
    }
}
