//! Contracted half-graphs `H1`/`H2`: a run of segments glued by linking
//! edges that stand for whole subpaths.

use std::collections::BTreeMap;

use crate::graph::{ordered, Graph, Path, Vertex};
use crate::rotation::{endpoint_closure_oracle, Closure, ClosureOptions};

/// Local vertex `i` sits at position `i` of the model path, so the model
/// path is `0, 1, …, l-1` and starts at the fixed vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractedHalf {
    pub global: Vec<Vertex>,
    pub graph: Graph,
    /// Linking edge `(i, i+1)` keyed by `i`, with the hidden vertices listed
    /// from `i` towards `i+1`.
    pub links: BTreeMap<usize, Vec<Vertex>>,
    /// False for the ends of each run.
    pub interior: Vec<bool>,
}

/// Builds the model from `runs` (segments in model order and direction)
/// and the hidden subpaths between consecutive runs. Edges: run edges,
/// linking edges, and edges of `g` between interior run vertices.
pub fn build_contracted(g: &Graph, runs: &[Vec<Vertex>], hidden: &[Vec<Vertex>]) -> ContractedHalf {
    assert_eq!(hidden.len() + 1, runs.len(), "one hidden subpath between each pair of runs");
    let mut global = Vec::new();
    let mut interior = Vec::new();
    let mut links = BTreeMap::new();
    let mut edges = Vec::new();
    for (k, run) in runs.iter().enumerate() {
        for (j, &v) in run.iter().enumerate() {
            let i = global.len();
            if j > 0 {
                edges.push((i - 1, i));
            } else if k > 0 {
                edges.push((i - 1, i));
                links.insert(i - 1, hidden[k - 1].clone());
            }
            global.push(v);
            interior.push(j > 0 && j + 1 < run.len());
        }
    }
    let local: BTreeMap<Vertex, usize> = global.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    for (i, &v) in global.iter().enumerate() {
        if !interior[i] {
            continue;
        }
        for w in g.neighbors(v) {
            if let Some(&j) = local.get(w) {
                if j > i + 1 && interior[j] {
                    edges.push((i, j));
                }
            }
        }
    }
    let graph = Graph::from_edges_dedup(global.len(), edges);
    ContractedHalf {
        global,
        graph,
        links,
        interior,
    }
}

/// `H⁺` for one pivot: the model plus a vertex `w = l` joined to the pivot
/// by a real edge and to `l-1` by a linking edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedHalf {
    pub graph: Graph,
    pub start: Path,
    pub protected: Vec<(Vertex, Vertex)>,
    pub w: Vertex,
}

impl ContractedHalf {
    pub fn len(&self) -> usize {
        self.global.len()
    }

    pub fn is_empty(&self) -> bool {
        self.global.is_empty()
    }

    pub fn path(&self) -> Path {
        Path::from_parts(self.len(), (0..self.len()).collect())
    }

    /// Inner model vertices that may serve as first pivots.
    pub fn pivot_candidates(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.len().saturating_sub(1)).filter(|&i| self.interior[i])
    }

    pub fn augment(&self, pivot: usize) -> AugmentedHalf {
        let l = self.len();
        let w = l;
        let edges = self.graph.edges().chain([(l - 1, w), (pivot, w)]);
        let graph = Graph::from_edges_dedup(l + 1, edges);
        let mut start: Vec<Vertex> = (0..=pivot).collect();
        start.push(w);
        start.extend((pivot + 1..l).rev());
        let mut protected: Vec<_> = self.links.keys().map(|&i| (i, i + 1)).collect();
        protected.push((l - 1, w));
        AugmentedHalf {
            start: Path::from_parts(l + 1, start),
            graph,
            protected,
            w,
        }
    }

    /// Rotation closure from the start path of `H⁺` at `pivot`, with every
    /// linking edge protected and the model start vertex fixed.
    pub fn closure(&self, pivot: usize, max_states: usize, stop_after: Option<usize>) -> (AugmentedHalf, Closure) {
        let aug = self.augment(pivot);
        let opts = ClosureOptions {
            max_states,
            protected: aug.protected.clone(),
            stop_after,
        };
        let c = endpoint_closure_oracle(&aug.graph, &aug.start, 0, &opts).expect("0 starts the model path");
        (aug, c)
    }

    /// Replaces each linking edge of a model path by its hidden subpath and
    /// maps back to graph vertices. `w_global` and `tail` describe the extra
    /// vertex and the subpath hidden in its linking edge, listed from `l-1`
    /// towards `w`.
    pub fn expand(&self, model: &[Vertex], w_global: Vertex, tail: &[Vertex]) -> Vec<Vertex> {
        let l = self.len();
        let name = |i: usize| if i == l { w_global } else { self.global[i] };
        let mut out = Vec::with_capacity(model.len());
        for (k, &s) in model.iter().enumerate() {
            out.push(name(s));
            let Some(&t) = model.get(k + 1) else { break };
            let (lo, hi) = ordered(s, t);
            let hidden: Option<&[Vertex]> = if hi == l && lo == l - 1 {
                Some(tail)
            } else if hi == lo + 1 {
                self.links.get(&lo).map(Vec::as_slice)
            } else {
                None
            };
            if let Some(h) = hidden {
                if s < t {
                    out.extend_from_slice(h);
                } else {
                    out.extend(h.iter().rev());
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family};
    use crate::graph::validate_path;

    #[test]
    fn model_of_two_runs() {
        let k10 = generate(&Family::Complete { n: 10 }, 0).unwrap();
        // runs (0 1 2) and (5 6 7) with 3 4 hidden between them
        let m = build_contracted(&k10, &[vec![0, 1, 2], vec![5, 6, 7]], &[vec![3, 4]]);
        assert_eq!(m.len(), 6);
        assert_eq!(m.links.get(&2), Some(&vec![3, 4]));
        assert!(m.graph.has_edge(1, 4));
        // run ends get no extra edges
        assert!(!m.graph.has_edge(0, 5));
        assert_eq!(m.graph.degree(0), 1);
        assert_eq!(m.pivot_candidates().collect::<Vec<_>>(), vec![1, 4]);
        let expanded = m.expand(&[0, 1, 2, 3, 4, 5], 9, &[8]);
        assert_eq!(expanded, vec![0, 1, 2, 3, 4, 5, 6, 7]);
        let back = m.expand(&[4, 3, 2], 9, &[8]);
        assert_eq!(back, vec![6, 5, 4, 3, 2]);
    }

    #[test]
    fn closure_never_breaks_links() {
        let k12 = generate(&Family::Complete { n: 12 }, 0).unwrap();
        let m = build_contracted(&k12, &[vec![0, 1, 2, 3], vec![6, 7, 8, 9]], &[vec![4, 5]]);
        let (aug, c) = m.closure(1, 10_000, None);
        assert!(c.complete);
        for &e in &c.endpoints {
            if e == aug.w {
                continue;
            }
            let p = c.path_to(e, aug.graph.n()).unwrap();
            for &(a, b) in &aug.protected {
                assert!(p.has_edge(a, b));
            }
            let real = m.expand(p.vertices(), 11, &[10]);
            assert_eq!(validate_path(&k12, &real, true), Ok(()));
            assert_eq!(real[0], 0);
        }
    }
}
