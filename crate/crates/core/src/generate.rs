//! Named graph families.
//!
//! Vertex numbering is canonical for each family: cliques come first and
//! isolated vertices last, bipartite graphs list the left side first, and
//! cycles and paths follow their natural order.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphError, Vertex};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Complete { n: usize },
    CompleteBipartite { a: usize, b: usize },
    Cycle { n: usize },
    Path { n: usize },
    Gnp { n: usize, p: f64 },
    RandomRegular { n: usize, d: usize },
    CliquePlusIsolated { clique: usize, isolated: usize },
    Petersen,
}

/// Restarts allowed before the pairing construction gives up.
const REGULAR_RESTARTS: usize = 1000;

/// Builds a member of `family`. The output is a pure function of
/// `(family, seed)`; deterministic families ignore the seed.
pub fn generate(family: &Family, seed: u64) -> Result<Graph, GraphError> {
    match *family {
        Family::Complete { n } => Ok(complete(n)),
        Family::CompleteBipartite { a, b } => {
            let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
            Ok(Graph::from_edges_dedup(a + b, edges))
        }
        Family::Cycle { n } => {
            if n < 3 {
                return Err(GraphError::InvalidParameter(format!(
                    "cycle needs n >= 3, got {n}"
                )));
            }
            Ok(Graph::from_edges_dedup(n, (0..n).map(|i| (i, (i + 1) % n))))
        }
        Family::Path { n } => Ok(Graph::from_edges_dedup(n, (1..n).map(|i| (i - 1, i)))),
        Family::Gnp { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(GraphError::InvalidParameter(format!(
                    "edge probability {p} outside [0, 1]"
                )));
            }
            let mut rng = rng_from_seed(seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen::<f64>() < p {
                        edges.push((u, v));
                    }
                }
            }
            Ok(Graph::from_edges_dedup(n, edges))
        }
        Family::RandomRegular { n, d } => random_regular(n, d, seed),
        Family::CliquePlusIsolated { clique, isolated } => {
            let mut g = complete(clique);
            if isolated > 0 {
                g = Graph::from_edges_dedup(clique + isolated, g.edges().collect::<Vec<_>>());
            }
            Ok(g)
        }
        Family::Petersen => {
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (i + 5, (i + 2) % 5 + 5));
            Ok(Graph::from_edges_dedup(10, outer.chain(spokes).chain(inner)))
        }
    }
}

fn complete(n: usize) -> Graph {
    Graph::from_edges_dedup(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Pairing-model `d`-regular graph. Points are paired one at a time; a pair
/// that would create a loop or a repeated edge is rejected and redrawn, and a
/// dead end restarts the whole pairing.
fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GraphError> {
    if d >= n.max(1) && !(n == 0 && d == 0) {
        return Err(GraphError::InvalidParameter(format!(
            "degree {d} must be below n = {n}"
        )));
    }
    if (n * d) % 2 == 1 {
        return Err(GraphError::InvalidParameter(format!(
            "n * d = {} is odd",
            n * d
        )));
    }
    let mut rng = rng_from_seed(seed);
    'restart: for _ in 0..REGULAR_RESTARTS {
        let mut points: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
        points.shuffle(&mut rng);
        let mut adj = vec![Vec::<Vertex>::new(); n];
        let mut edges = Vec::with_capacity(n * d / 2);
        while !points.is_empty() {
            let ok = |u: Vertex, v: Vertex, adj: &Vec<Vec<Vertex>>| u != v && !adj[u].contains(&v);
            let len = points.len();
            let mut found = None;
            for _ in 0..(4 * len).max(16) {
                let i = rng.gen_range(0..len);
                let j = rng.gen_range(0..len);
                if i != j && ok(points[i], points[j], &adj) {
                    found = Some((i, j));
                    break;
                }
            }
            if found.is_none() {
                // Random probing failed; either a valid pair exists and we
                // take the first one, or this pairing is stuck.
                found = (0..len)
                    .flat_map(|i| (i + 1..len).map(move |j| (i, j)))
                    .find(|&(i, j)| ok(points[i], points[j], &adj));
            }
            let Some((i, j)) = found else {
                continue 'restart;
            };
            let (u, v) = (points[i], points[j]);
            adj[u].push(v);
            adj[v].push(u);
            edges.push((u, v));
            let (hi, lo) = (i.max(j), i.min(j));
            points.swap_remove(hi);
            points.swap_remove(lo);
        }
        return Ok(Graph::from_edges_dedup(n, edges));
    }
    Err(GraphError::InvalidParameter(format!(
        "no simple {d}-regular pairing found on {n} vertices"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_family_examples() {
        assert_eq!(generate(&Family::Complete { n: 4 }, 0).unwrap().edge_count(), 6);
        let g = generate(&Family::CliquePlusIsolated { clique: 5, isolated: 1 }, 0).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.degree(5), 0);
        assert!((0..5).all(|v| g.degree(v) == 4));
        let p = generate(&Family::Petersen, 0).unwrap();
        assert_eq!(p.edge_count(), 15);
        assert!((0..10).all(|v| p.degree(v) == 3));
        let kb = generate(&Family::CompleteBipartite { a: 3, b: 4 }, 0).unwrap();
        assert_eq!(kb.edge_count(), 12);
        assert!(!kb.has_edge(0, 1));
    }

    #[test]
    fn gnp_is_deterministic_per_seed() {
        let f = Family::Gnp { n: 100, p: 0.05 };
        let a = generate(&f, 7).unwrap();
        let b = generate(&f, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate(&f, 8).unwrap());
    }

    #[test]
    fn gnp_extremes() {
        assert_eq!(generate(&Family::Gnp { n: 20, p: 0.0 }, 1).unwrap().edge_count(), 0);
        assert_eq!(generate(&Family::Gnp { n: 20, p: 1.0 }, 1).unwrap().edge_count(), 190);
    }

    #[test]
    fn invalid_parameters() {
        assert!(generate(&Family::Cycle { n: 2 }, 0).is_err());
        assert!(generate(&Family::Gnp { n: 5, p: 1.5 }, 0).is_err());
        assert!(generate(&Family::Gnp { n: 5, p: -0.1 }, 0).is_err());
        assert!(generate(&Family::RandomRegular { n: 5, d: 3 }, 0).is_err());
        assert!(generate(&Family::RandomRegular { n: 4, d: 4 }, 0).is_err());
    }

    #[test]
    fn random_regular_degrees() {
        for (n, d, seed) in [(24, 6, 1), (100, 3, 2), (50, 10, 3), (10, 9, 4), (30, 0, 5)] {
            let g = generate(&Family::RandomRegular { n, d }, seed).unwrap();
            assert!((0..n).all(|v| g.degree(v) == d), "n={n} d={d}");
        }
    }
}
