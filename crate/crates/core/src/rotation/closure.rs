//! Exhaustive rotation closure: every endpoint reachable from a path by any
//! sequence of rotations with the first vertex fixed.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{rotate_unchecked, RotationError};
use crate::graph::{ordered, Graph, Path, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureOptions {
    /// Distinct paths explored before giving up.
    pub max_states: usize,
    /// Path edges that may never be broken.
    #[serde(default)]
    pub protected: Vec<(Vertex, Vertex)>,
    /// Stop as soon as this many endpoints are known.
    #[serde(default)]
    pub stop_after: Option<usize>,
}

impl ClosureOptions {
    pub fn new(max_states: usize) -> ClosureOptions {
        ClosureOptions {
            max_states,
            protected: Vec::new(),
            stop_after: None,
        }
    }
}

/// Result of a breadth-first closure. For each endpoint, the first path
/// found (so one using the fewest rotations) and its rotation count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub fixed: Vertex,
    pub endpoints: Vec<Vertex>,
    /// False when the search stopped early.
    pub complete: bool,
    pub states: usize,
    reached: BTreeMap<Vertex, (Vec<Vertex>, usize)>,
}

impl Closure {
    pub fn path_to(&self, v: Vertex, universe: usize) -> Option<Path> {
        self.reached
            .get(&v)
            .map(|(p, _)| Path::from_parts(universe, p.clone()))
    }

    pub fn rotations_to(&self, v: Vertex) -> Option<usize> {
        self.reached.get(&v).map(|&(_, r)| r)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.reached.contains_key(&v)
    }
}

/// Breadth-first search over all paths reachable from `p` by rotations that
/// keep `fixed` in place. `fixed` must be an endpoint of `p`.
pub fn endpoint_closure_oracle(
    g: &Graph,
    p: &Path,
    fixed: Vertex,
    opts: &ClosureOptions,
) -> Result<Closure, RotationError> {
    let start = if p.first() == fixed {
        p.clone()
    } else if p.last() == fixed {
        p.reversed()
    } else {
        return Err(RotationError::NotAnEndpoint(fixed));
    };
    let protected: Vec<(Vertex, Vertex)> = opts.protected.iter().map(|&(u, v)| ordered(u, v)).collect();
    let mut reached = BTreeMap::new();
    reached.insert(start.last(), (start.vertices().to_vec(), 0));
    let mut seen: HashSet<Vec<Vertex>> = HashSet::from([start.vertices().to_vec()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    let mut complete = true;
    'search: while let Some((cur, depth)) = queue.pop_front() {
        let len = cur.len();
        if len < 3 {
            continue;
        }
        let last = cur.last();
        for &pivot in g.neighbors(last) {
            let Some(pos) = cur.position(pivot) else { continue };
            if pos + 2 >= len {
                continue;
            }
            let next = cur.vertices()[pos + 1];
            if protected.contains(&ordered(pivot, next)) {
                continue;
            }
            let mut q = cur.clone();
            rotate_unchecked(&mut q, pos);
            if seen.contains(q.vertices()) {
                continue;
            }
            if seen.len() >= opts.max_states {
                complete = false;
                break 'search;
            }
            seen.insert(q.vertices().to_vec());
            reached
                .entry(q.last())
                .or_insert_with(|| (q.vertices().to_vec(), depth + 1));
            if opts.stop_after.is_some_and(|k| reached.len() >= k) {
                complete = false;
                break 'search;
            }
            queue.push_back((q, depth + 1));
        }
    }
    Ok(Closure {
        fixed,
        endpoints: reached.keys().copied().collect(),
        complete,
        states: seen.len(),
        reached,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family};

    #[test]
    fn closure_examples() {
        let c5 = generate(&Family::Cycle { n: 5 }, 0).unwrap();
        let p = Path::new(&c5, vec![0, 1, 2, 3, 4]).unwrap();
        let c = endpoint_closure_oracle(&c5, &p, 0, &ClosureOptions::new(1000)).unwrap();
        assert_eq!(c.endpoints, vec![1, 4]);
        assert!(c.complete);
        assert_eq!(c.states, 2);

        let k4 = generate(&Family::Complete { n: 4 }, 0).unwrap();
        let p = Path::new(&k4, vec![0, 1, 2, 3]).unwrap();
        let c = endpoint_closure_oracle(&k4, &p, 0, &ClosureOptions::new(1000)).unwrap();
        assert_eq!(c.endpoints, vec![1, 2, 3]);

        let p4 = generate(&Family::Path { n: 4 }, 0).unwrap();
        let p = Path::new(&p4, vec![0, 1, 2, 3]).unwrap();
        let c = endpoint_closure_oracle(&p4, &p, 0, &ClosureOptions::new(1000)).unwrap();
        assert_eq!(c.endpoints, vec![3]);
        // fixing the other end works through reversal
        let c = endpoint_closure_oracle(&p4, &p, 3, &ClosureOptions::new(1000)).unwrap();
        assert_eq!(c.endpoints, vec![0]);
        assert_eq!(
            endpoint_closure_oracle(&p4, &p, 1, &ClosureOptions::new(10)),
            Err(RotationError::NotAnEndpoint(1))
        );
    }

    #[test]
    fn budget_flags_partial_result() {
        let k8 = generate(&Family::Complete { n: 8 }, 0).unwrap();
        let p = Path::new(&k8, (0..8).collect()).unwrap();
        let c = endpoint_closure_oracle(&k8, &p, 0, &ClosureOptions::new(3)).unwrap();
        assert!(!c.complete);
        assert_eq!(c.states, 3);
    }
}
