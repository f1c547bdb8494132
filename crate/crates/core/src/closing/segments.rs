//! Segments of a base path, their survival on rotated paths, and ordered
//! oriented segment sequences.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::ClosingError;
use crate::graph::{ordered, Path, Vertex};

/// The base path cut into `2ρ` contiguous runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentDecomposition {
    pub rho: usize,
    pub segments: Vec<Vec<Vertex>>,
}

impl SegmentDecomposition {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Index of the segment holding `v`.
    pub fn segment_of(&self, v: Vertex) -> Option<usize> {
        self.segments.iter().position(|s| s.contains(&v))
    }
}

/// Balanced split into `2ρ` segments; the first `|P0| mod 2ρ` segments get
/// one extra vertex.
pub fn decompose(p0: &Path, rho: usize) -> Result<SegmentDecomposition, ClosingError> {
    decompose_keeping(p0, rho, None)
}

/// Like [`decompose`], but a boundary that would separate the two ends of
/// `keep` (a path edge) is moved by one vertex so the edge lies inside a
/// segment.
pub fn decompose_keeping(
    p0: &Path,
    rho: usize,
    keep: Option<(Vertex, Vertex)>,
) -> Result<SegmentDecomposition, ClosingError> {
    let q = p0.len();
    let k = 2 * rho;
    if rho == 0 || k > q {
        return Err(ClosingError::RhoTooLarge { rho, len: q });
    }
    let (base, extra) = (q / k, q % k);
    // cut positions: segment j covers cuts[j]..cuts[j+1]
    let mut cuts = vec![0usize];
    for j in 0..k {
        cuts.push(cuts[j] + base + usize::from(j < extra));
    }
    if let Some((u, v)) = keep {
        let (pu, pv) = match (p0.position(u), p0.position(v)) {
            (Some(a), Some(b)) if a.abs_diff(b) == 1 => (a, b),
            _ => return Err(ClosingError::NotAPathEdge(u, v)),
        };
        let hi = pu.max(pv);
        if let Some(j) = (1..k).find(|&j| cuts[j] == hi) {
            // move the cut right if the segment after it can spare a vertex
            if cuts[j + 1] - cuts[j] >= 2 {
                cuts[j] += 1;
            } else if cuts[j] - cuts[j - 1] >= 2 {
                cuts[j] -= 1;
            } else {
                return Err(ClosingError::RhoTooLarge { rho, len: q });
            }
        }
    }
    let w = p0.vertices();
    let segments = (0..k).map(|j| w[cuts[j]..cuts[j + 1]].to_vec()).collect();
    Ok(SegmentDecomposition { rho, segments })
}

/// A segment with its direction on some path: `forward` when it runs the
/// same way as on the base path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrientedSegment {
    pub segment: usize,
    pub forward: bool,
}

/// Which segments survive whole on the path `P(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotatedPathRecord {
    pub a: Vertex,
    pub b: Vertex,
    pub rotations: usize,
    /// Base path edges missing from `P(a, b)`.
    pub broken: Vec<(Vertex, Vertex)>,
    /// Unbroken segments in order of appearance from `a` to `b`.
    pub unbroken: Vec<OrientedSegment>,
}

/// Scans `path` (directed from its first to its last vertex) for segments
/// that appear as contiguous runs. Single-vertex segments count as forward.
pub fn unbroken_segments(
    d: &SegmentDecomposition,
    base: &Path,
    path: &Path,
    rotations: usize,
) -> RotatedPathRecord {
    let mut found: Vec<(usize, OrientedSegment)> = Vec::new();
    for (j, seg) in d.segments.iter().enumerate() {
        let Some(pos) = seg.iter().map(|&v| path.position(v)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let forward = pos.windows(2).all(|w| w[1] == w[0] + 1);
        let backward = pos.windows(2).all(|w| w[0] == w[1] + 1);
        if forward || backward {
            let start = *pos.iter().min().unwrap();
            found.push((
                start,
                OrientedSegment {
                    segment: j,
                    forward: forward || seg.len() == 1,
                },
            ));
        }
    }
    found.sort_unstable();
    let path_edges: BTreeSet<(Vertex, Vertex)> = path.edges().collect();
    let broken = base.edges().filter(|e| !path_edges.contains(e)).collect();
    RotatedPathRecord {
        a: path.first(),
        b: path.last(),
        rotations,
        broken,
        unbroken: found.into_iter().map(|e| e.1).collect(),
    }
}

/// An ordered, oriented list of distinct segments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TauSequence(pub Vec<OrientedSegment>);

impl TauSequence {
    pub fn contains_segment(&self, j: usize) -> bool {
        self.0.iter().any(|s| s.segment == j)
    }
}

impl RotatedPathRecord {
    /// Every τ-sequence contained in this record: all order-preserving
    /// choices of `tau` unbroken segments.
    pub fn sequences(&self, tau: usize) -> Vec<TauSequence> {
        let u = self.unbroken.len();
        let mut out = Vec::new();
        if tau == 0 || tau > u {
            return out;
        }
        let mut idx: Vec<usize> = (0..tau).collect();
        loop {
            out.push(TauSequence(idx.iter().map(|&i| self.unbroken[i]).collect()));
            if !crate::conditions::fconn::next_combination(&mut idx, u) {
                break;
            }
        }
        out
    }

    /// True iff the segments of `sigma` appear on this path in that order
    /// and with those orientations.
    pub fn contains(&self, sigma: &TauSequence) -> bool {
        let mut it = self.unbroken.iter();
        sigma.0.iter().all(|s| it.any(|u| u == s))
    }
}

/// Picks the τ-sequence contained in the most distinct `(a, b)` pairs (ties
/// to the smallest sequence), optionally only among sequences that include
/// segment `required`. Returns it with its pair set.
pub fn select_sigma0(
    records: &[RotatedPathRecord],
    tau: usize,
    required: Option<usize>,
) -> Result<(TauSequence, BTreeSet<(Vertex, Vertex)>), ClosingError> {
    if let Some(r) = records.iter().find(|r| r.unbroken.len() < tau) {
        return Err(ClosingError::TooFewUnbroken {
            a: r.a,
            b: r.b,
            unbroken: r.unbroken.len(),
            tau,
        });
    }
    let mut pairs: BTreeMap<TauSequence, BTreeSet<(Vertex, Vertex)>> = BTreeMap::new();
    for r in records {
        for s in r.sequences(tau) {
            if required.is_some_and(|j| !s.contains_segment(j)) {
                continue;
            }
            pairs.entry(s).or_default().insert((r.a, r.b));
        }
    }
    pairs
        .into_iter()
        .rev()
        .max_by_key(|(_, l)| l.len())
        .ok_or(ClosingError::NoSequence)
}

/// `(2ρ)_τ · 2^τ`, the number of τ-sequences over `2ρ` segments.
pub fn sequence_count(segments: usize, tau: usize) -> u128 {
    let falling: u128 = (0..tau).map(|i| (segments - i) as u128).product();
    falling << tau
}

/// Base path edges of `p0` as unordered pairs.
pub(crate) fn path_edge_set(p: &[Vertex]) -> BTreeSet<(Vertex, Vertex)> {
    p.windows(2).map(|w| ordered(w[0], w[1])).collect()
}
