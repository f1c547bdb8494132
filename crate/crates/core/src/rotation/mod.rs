//! Pósa rotations and greedy extension.
//!
//! A rotation of `P = (v1, …, vq)` at pivot position `i` uses the edge
//! `(vq, vi)` to produce `(v1, …, vi, vq, …, v(i+1))`. Positions here are
//! zero-based, so the pivot sits at `0..=q-3` and the rotation reverses
//! everything after it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ordered, Graph, Path, Vertex};

mod closure;
mod double;
mod family;
mod small;

pub use closure::{endpoint_closure_oracle, Closure, ClosureOptions};
pub use double::{double_rotation_targets, DoubleRotation, DoubleRotationParams, EndpointSource, PairPath};
pub use family::{
    endpoint_family, endpoint_family_with, reconstruct_path, EndpointFamily, FamilyOptions, Link, Schedule,
    StopReason,
};
pub use small::{small_aware_family, SmallAwareFamily, SmallAwareParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RotationError {
    #[error("pivot position {position} not in 0..={} for a path of length {len}", len.saturating_sub(3))]
    PivotOutOfRange { position: usize, len: usize },
    #[error("({u}, {v}) is not an edge")]
    NotAnEdge { u: Vertex, v: Vertex },
    #[error("vertex {0} is not on the path")]
    NotOnPath(Vertex),
    #[error("vertex {0} is the fixed endpoint")]
    FixedEndpoint(Vertex),
    #[error("vertex {0} is not an endpoint of the family")]
    NotInFamily(Vertex),
    #[error("vertex {0} is not an endpoint of the path")]
    NotAnEndpoint(Vertex),
}

/// One rotation: the pivot, the path edge it broke, and the endpoint it
/// produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RotationStep {
    pub pivot: Vertex,
    pub broken: (Vertex, Vertex),
    pub new_endpoint: Vertex,
}

/// Rotates `p` at `pivot_position`, checking the rotation edge.
pub fn rotate(g: &Graph, p: &Path, pivot_position: usize) -> Result<(Path, RotationStep), RotationError> {
    let len = p.len();
    if len < 3 || pivot_position > len - 3 {
        return Err(RotationError::PivotOutOfRange {
            position: pivot_position,
            len,
        });
    }
    let (pivot, last) = (p.vertices()[pivot_position], p.last());
    if !g.has_edge(pivot, last) {
        return Err(RotationError::NotAnEdge { u: last, v: pivot });
    }
    let mut q = p.clone();
    let step = rotate_unchecked(&mut q, pivot_position);
    Ok((q, step))
}

/// Rotation without the edge check.
pub(crate) fn rotate_unchecked(p: &mut Path, pivot_position: usize) -> RotationStep {
    let pivot = p.vertices()[pivot_position];
    let next = p.vertices()[pivot_position + 1];
    p.reverse_from(pivot_position + 1);
    RotationStep {
        pivot,
        broken: ordered(pivot, next),
        new_endpoint: next,
    }
}

/// Rotates at the vertex `pivot` rather than at a position.
pub fn rotate_at(g: &Graph, p: &Path, pivot: Vertex) -> Result<(Path, RotationStep), RotationError> {
    let pos = p.position(pivot).ok_or(RotationError::NotOnPath(pivot))?;
    rotate(g, p, pos)
}

/// Replays `steps` from `base`, checking each one.
pub fn replay(g: &Graph, base: &Path, steps: &[RotationStep]) -> Result<Path, RotationError> {
    let mut p = base.clone();
    for s in steps {
        let (q, done) = rotate_at(g, &p, s.pivot)?;
        debug_assert_eq!(done, *s);
        p = q;
    }
    Ok(p)
}

/// Appends unused neighbors at either end until neither end has one. Among
/// the unused neighbors the one with the fewest unused neighbors of its own
/// is taken, ties to the lowest id. The input stays a contiguous run of the
/// output in its original direction.
pub fn extend(g: &Graph, p: Path) -> Path {
    let mut p = p;
    grow_back(g, &mut p);
    p.reverse_from(0);
    grow_back(g, &mut p);
    p.reverse_from(0);
    p
}

fn grow_back(g: &Graph, p: &mut Path) {
    while let Some(w) = best_unused_neighbor(g, p, p.last()) {
        p.push(w);
    }
}

pub(crate) fn best_unused_neighbor(g: &Graph, p: &Path, v: Vertex) -> Option<Vertex> {
    g.neighbors(v)
        .iter()
        .filter(|&&w| !p.contains(w))
        .min_by_key(|&&w| (g.neighbors(w).iter().filter(|&&x| !p.contains(x)).count(), w))
        .copied()
}

/// True iff neither endpoint has a neighbor off the path.
pub fn is_maximal(g: &Graph, p: &Path) -> bool {
    [p.first(), p.last()]
        .iter()
        .all(|&v| g.neighbors(v).iter().all(|&w| p.contains(w)))
}
