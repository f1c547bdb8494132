//! Exact Hamiltonicity by dynamic programming over vertex subsets.
//!
//! `reach[mask]` holds, as a bit set, every `v` such that some path starts
//! at the root, visits exactly `mask`, and ends at `v`. Work is
//! `O(2^n · n²)`, so inputs are capped at [`ORACLE_MAX_N`] vertices.

use thiserror::Error;

use crate::graph::{Cycle, Graph, Path, Vertex};

pub const ORACLE_MAX_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle handles at most {ORACLE_MAX_N} vertices, got {0}")]
    TooLarge(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(Vertex),
}

struct Table {
    n: usize,
    reach: Vec<u32>,
}

impl Table {
    fn build(g: &Graph, root: Vertex) -> Table {
        let n = g.n();
        let adj: Vec<u32> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
            .collect();
        let mut reach = vec![0u32; 1 << n];
        reach[1 << root] = 1 << root;
        for mask in 1usize..1 << n {
            let ends = reach[mask];
            if ends == 0 {
                continue;
            }
            let mut e = ends;
            while e != 0 {
                let v = e.trailing_zeros() as usize;
                e &= e - 1;
                let mut fresh = adj[v] & !(mask as u32);
                while fresh != 0 {
                    let w = fresh.trailing_zeros() as usize;
                    fresh &= fresh - 1;
                    reach[mask | (1 << w)] |= 1 << w;
                }
            }
        }
        Table { n, reach }
    }

    fn full(&self) -> usize {
        (1 << self.n) - 1
    }

    /// A root-to-`end` path through every vertex, back-traced.
    fn trace(&self, g: &Graph, end: Vertex) -> Option<Vec<Vertex>> {
        let mut mask = self.full();
        if self.reach[mask] & (1 << end) == 0 {
            return None;
        }
        let mut out = vec![end];
        let mut v = end;
        while mask.count_ones() > 1 {
            let prev_mask = mask & !(1 << v);
            let prev = (0..self.n)
                .find(|&u| self.reach[prev_mask] & (1 << u) != 0 && g.has_edge(u, v))
                .expect("a recorded end has a predecessor");
            out.push(prev);
            mask = prev_mask;
            v = prev;
        }
        out.reverse();
        Some(out)
    }
}

fn guard(g: &Graph) -> Result<(), OracleError> {
    if g.n() > ORACLE_MAX_N {
        Err(OracleError::TooLarge(g.n()))
    } else {
        Ok(())
    }
}

/// A Hamilton cycle if one exists.
pub fn hamiltonian_oracle(g: &Graph) -> Result<Option<Cycle>, OracleError> {
    guard(g)?;
    if g.n() < 3 {
        return Ok(None);
    }
    let t = Table::build(g, 0);
    let ends = t.reach[t.full()];
    let close = g.neighbors(0).iter().copied().find(|&v| ends & (1 << v) != 0);
    Ok(close.map(|v| Cycle::from_vec_unchecked(t.trace(g, v).unwrap())))
}

/// A Hamilton path from `u` to `v` if one exists.
pub fn hamilton_path_oracle(g: &Graph, u: Vertex, v: Vertex) -> Result<Option<Path>, OracleError> {
    guard(g)?;
    for x in [u, v] {
        if x >= g.n() {
            return Err(OracleError::VertexOutOfRange(x));
        }
    }
    if u == v {
        return Ok((g.n() == 1).then(|| Path::single(1, u)));
    }
    let t = Table::build(g, u);
    Ok(t.trace(g, v).map(|p| Path::from_parts(g.n(), p)))
}

/// True iff every pair of distinct vertices is joined by a Hamilton path.
pub fn is_hamilton_connected(g: &Graph) -> Result<bool, OracleError> {
    guard(g)?;
    let n = g.n();
    for u in 0..n {
        let t = Table::build(g, u);
        let ends = t.reach[t.full()];
        let want = ((1u64 << n) - 1) as u32 & !(1 << u);
        if ends & want != want {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family};
    use crate::graph::{validate_cycle, validate_path};

    #[test]
    fn oracle_examples() {
        let k4 = generate(&Family::Complete { n: 4 }, 0).unwrap();
        let c = hamiltonian_oracle(&k4).unwrap().unwrap();
        assert_eq!(validate_cycle(&k4, c.vertices(), true), Ok(()));
        let k23 = generate(&Family::CompleteBipartite { a: 2, b: 3 }, 0).unwrap();
        assert_eq!(hamiltonian_oracle(&k23).unwrap(), None);
        let petersen = generate(&Family::Petersen, 0).unwrap();
        assert_eq!(hamiltonian_oracle(&petersen).unwrap(), None);
        let big = generate(&Family::Complete { n: 21 }, 0).unwrap();
        assert_eq!(hamiltonian_oracle(&big), Err(OracleError::TooLarge(21)));
    }

    #[test]
    fn path_oracle_examples() {
        let p3 = generate(&Family::Path { n: 3 }, 0).unwrap();
        assert_eq!(hamilton_path_oracle(&p3, 0, 2).unwrap().unwrap().vertices(), &[0, 1, 2]);
        assert_eq!(hamilton_path_oracle(&p3, 0, 1).unwrap(), None);
        let k5 = generate(&Family::Complete { n: 5 }, 0).unwrap();
        let p = hamilton_path_oracle(&k5, 0, 3).unwrap().unwrap();
        assert_eq!(validate_path(&k5, p.vertices(), true), Ok(()));
        assert!(is_hamilton_connected(&k5).unwrap());
        let c6 = generate(&Family::Cycle { n: 6 }, 0).unwrap();
        assert!(!is_hamilton_connected(&c6).unwrap());
        // a Hamilton path between adjacent vertices would close a cycle
        let petersen = generate(&Family::Petersen, 0).unwrap();
        assert!(!is_hamilton_connected(&petersen).unwrap());
    }
}
