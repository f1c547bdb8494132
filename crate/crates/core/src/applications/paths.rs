//! Hamilton paths with prescribed ends and Hamilton cycles through an edge.

use thiserror::Error;

use crate::closing::{close_path, find_hamilton_cycle, HamiltonOptions, SearchFailure, SearchStats};
use crate::graph::{ordered, validate_cycle, validate_path, Cycle, Graph, Path, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("endpoints must differ")]
    SameVertex,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(Vertex),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(Vertex, Vertex),
    #[error(transparent)]
    Search(#[from] SearchFailure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathOutcome {
    /// Runs from `u` to `v`.
    pub path: Path,
    pub stats: SearchStats,
    /// Path edges removed while re-closing with `(u, v)` protected, plus
    /// the two cycle edges dropped by the re-routing.
    pub broken: Vec<(Vertex, Vertex)>,
}

/// `cycle` read from `u` so that it ends at `v`, where `u`, `v` are
/// neighbors on the cycle.
fn open_at(cycle: &[Vertex], u: Vertex, v: Vertex) -> Vec<Vertex> {
    let len = cycle.len();
    let i = cycle.iter().position(|&x| x == u).unwrap();
    if cycle[(i + 1) % len] == v {
        (0..len).map(|k| cycle[(i + len - k) % len]).collect()
    } else {
        (0..len).map(|k| cycle[(i + k) % len]).collect()
    }
}

/// Splices `(u, v)` into a Hamilton cycle that misses it: with `u = w_i`
/// and `v = w_j`, drops `(w_i, w_i+1)` and `(w_j, w_j+1)` and returns the
/// Hamilton path `w_i+1 … w_j, w_i … w_j+1`.
fn reroute(cycle: &[Vertex], u: Vertex, v: Vertex) -> Vec<Vertex> {
    let len = cycle.len();
    let i = cycle.iter().position(|&x| x == u).unwrap();
    let j = cycle.iter().position(|&x| x == v).unwrap();
    let mut out = Vec::with_capacity(len);
    let mut k = (i + 1) % len;
    loop {
        out.push(cycle[k]);
        if k == j {
            break;
        }
        k = (k + 1) % len;
    }
    let mut k = i;
    loop {
        out.push(cycle[k]);
        if k == (j + 1) % len {
            break;
        }
        k = (k + len - 1) % len;
    }
    out
}

/// A Hamilton path of `g` from `u` to `v`.
///
/// Finds a Hamilton cycle of `g + (u, v)`. If it uses `(u, v)` that edge is
/// dropped; otherwise the cycle is re-routed through `(u, v)` and closed
/// again with `(u, v)` never broken.
pub fn hamilton_path_between(
    g: &Graph,
    u: Vertex,
    v: Vertex,
    opts: &HamiltonOptions,
) -> Result<PathOutcome, PathError> {
    for x in [u, v] {
        if x >= g.n() {
            return Err(PathError::VertexOutOfRange(x));
        }
    }
    if u == v {
        return Err(PathError::SameVertex);
    }
    if g.n() == 2 && g.has_edge(u, v) {
        return Ok(PathOutcome {
            path: Path::from_parts(2, vec![u, v]),
            stats: SearchStats::default(),
            broken: Vec::new(),
        });
    }
    let guv = if g.has_edge(u, v) {
        g.clone()
    } else {
        g.with_edge(u, v).expect("checked range and distinctness")
    };
    let first = find_hamilton_cycle(&guv, opts)?;
    let mut stats = first.stats;
    let mut broken = Vec::new();
    let cycle = if first.cycle.contains_edge(u, v) {
        first.cycle.vertices().to_vec()
    } else {
        let c = first.cycle.vertices();
        let len = c.len();
        let at = |x: Vertex| c.iter().position(|&y| y == x).unwrap();
        broken.push(ordered(u, c[(at(u) + 1) % len]));
        broken.push(ordered(v, c[(at(v) + 1) % len]));
        let start = Path::new(&guv, reroute(c, u, v)).expect("re-routed path is a path of g + (u, v)");
        let mut path_opts = opts.clone();
        path_opts.faithful.tau = path_opts.faithful.tau.max(4);
        path_opts.record_broken = true;
        let second = close_path(&guv, &start, Some((u, v)), &path_opts).map_err(|mut e| {
            e.stats.rotations += stats.rotations;
            e.stats.restarts += stats.restarts;
            e.stats.families_built += stats.families_built;
            e
        })?;
        stats.rotations += second.stats.rotations;
        stats.restarts += second.stats.restarts;
        stats.families_built += second.stats.families_built;
        broken.extend(second.broken);
        second.cycle.vertices().to_vec()
    };
    debug_assert_eq!(validate_cycle(&guv, &cycle, true), Ok(()));
    let path = open_at(&cycle, u, v);
    validate_path(g, &path, true).expect("Hamilton path of g");
    assert_eq!((path[0], *path.last().unwrap()), (u, v));
    Ok(PathOutcome {
        path: Path::from_parts(g.n(), path),
        stats,
        broken,
    })
}

/// A Hamilton cycle of `g` through the edge `(u, v)`.
pub fn hamilton_cycle_through_edge(
    g: &Graph,
    u: Vertex,
    v: Vertex,
    opts: &HamiltonOptions,
) -> Result<(Cycle, SearchStats), PathError> {
    if u >= g.n() || v >= g.n() || !g.has_edge(u, v) {
        return Err(PathError::NotAnEdge(u, v));
    }
    let out = hamilton_path_between(g, u, v, opts)?;
    let cycle = Cycle::new(g, out.path.into_vertices()).expect("path plus its end edge");
    assert!(cycle.contains_edge(u, v));
    Ok((cycle, out.stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closing::{Mode, Stage};
    use crate::generate::{generate, Family};

    fn opts() -> HamiltonOptions {
        HamiltonOptions {
            budget: 20_000,
            ..HamiltonOptions::default()
        }
    }

    #[test]
    fn reroute_splices_the_edge() {
        let c = [0, 1, 2, 3, 4, 5];
        let p = reroute(&c, 1, 4);
        assert_eq!(p, vec![2, 3, 4, 1, 0, 5]);
        assert_eq!(open_at(&[0, 1, 2, 3], 2, 1), vec![2, 3, 0, 1]);
        assert_eq!(open_at(&[0, 1, 2, 3], 1, 2), vec![1, 0, 3, 2]);
    }

    #[test]
    fn path_examples() {
        let k5 = generate(&Family::Complete { n: 5 }, 0).unwrap();
        let p = hamilton_path_between(&k5, 0, 3, &opts()).unwrap();
        assert_eq!((p.path.first(), p.path.last(), p.path.len()), (0, 3, 5));
        let p3 = generate(&Family::Path { n: 3 }, 0).unwrap();
        let p = hamilton_path_between(&p3, 0, 2, &opts()).unwrap();
        assert_eq!(p.path.vertices(), &[0, 1, 2]);
        let err = hamilton_path_between(&p3, 0, 1, &opts()).unwrap_err();
        assert!(matches!(err, PathError::Search(SearchFailure { stage: Stage::Precheck, .. })));
        assert_eq!(hamilton_path_between(&k5, 2, 2, &opts()), Err(PathError::SameVertex));
    }

    #[test]
    fn every_pair_of_a_clique_in_every_mode() {
        let k9 = generate(&Family::Complete { n: 9 }, 0).unwrap();
        for mode in [Mode::Heuristic, Mode::Auto] {
            let o = HamiltonOptions { mode, ..opts() };
            for u in 0..9 {
                for v in 0..9 {
                    if u != v {
                        let out = hamilton_path_between(&k9, u, v, &o).unwrap();
                        assert!(!out.broken.contains(&ordered(u, v)));
                    }
                }
            }
        }
    }

    #[test]
    fn cycle_through_edge_examples() {
        let k4 = generate(&Family::Complete { n: 4 }, 0).unwrap();
        let (c, _) = hamilton_cycle_through_edge(&k4, 0, 1, &opts()).unwrap();
        assert!(c.contains_edge(0, 1));
        let c5 = generate(&Family::Cycle { n: 5 }, 0).unwrap();
        let (c, _) = hamilton_cycle_through_edge(&c5, 2, 3, &opts()).unwrap();
        assert_eq!(c.len(), 5);
        let k23 = generate(&Family::CompleteBipartite { a: 2, b: 3 }, 0).unwrap();
        assert!(hamilton_cycle_through_edge(&k23, 0, 2, &opts()).is_err());
    }
}
