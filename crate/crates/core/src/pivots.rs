//! Good and bad initial pivots on a graph with a spanning path.
//!
//! For a graph `H` with spanning path `P = (v1, …, vl)` and an inner vertex
//! `vi`, the augmented graph `H⁺ᵢ` adds a vertex `w` joined to `vl` and
//! `vi`. Rotating `P + (vl, w)` at `vi` gives the spanning path
//! `Pᵢ = (v1, …, vi, w, vl, …, v(i+1))`. The endpoint set `S^vi` collects
//! the vertices of `P` other than `v1` that end some spanning path reachable
//! from `Pᵢ` by rotations with `v1` fixed. A pivot is bad when that set has
//! fewer than `l / 43` vertices.
//!
//! [`process_vertices`] runs the doubling procedure that bounds the number
//! of bad pivots and returns a certificate whose invariants can be checked
//! independently with [`ProcessingCertificate::check`].

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conditions::BAD_PIVOT_DIVISOR;
use crate::graph::{validate_path, Graph, Path, Vertex, WalkViolation};
use crate::rotation::{endpoint_closure_oracle, rotate_unchecked, ClosureOptions, RotationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PivotError {
    #[error("path is not a spanning path of the graph: {0}")]
    NotSpanning(#[from] WalkViolation),
    #[error("vertex {0} is not an inner vertex of the spanning path")]
    NotInner(Vertex),
    #[error("processing invariant broken: {0}")]
    Invariant(String),
    #[error(transparent)]
    Rotation(#[from] RotationError),
}

/// `H⁺ᵢ` with its start path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Augmented {
    pub graph: Graph,
    /// The added vertex, numbered `l`.
    pub w: Vertex,
    pub pivot: Vertex,
    pub start: Path,
}

fn require_spanning(h: &Graph, p: &Path) -> Result<(), PivotError> {
    validate_path(h, p.vertices(), true)?;
    Ok(())
}

fn inner_position(p: &Path, pivot: Vertex) -> Result<usize, PivotError> {
    match p.position(pivot) {
        Some(i) if i >= 1 && i + 1 < p.len() => Ok(i),
        _ => Err(PivotError::NotInner(pivot)),
    }
}

/// Builds `H⁺ᵢ` for the inner vertex `pivot` of the spanning path `p`.
pub fn augment(h: &Graph, p: &Path, pivot: Vertex) -> Result<Augmented, PivotError> {
    require_spanning(h, p)?;
    let i = inner_position(p, pivot)?;
    let l = p.len();
    let w = h.n();
    let edges = h.edges().chain([(p.last(), w), (pivot, w)]);
    let graph = Graph::from_edges(l + 1, edges).expect("fresh vertex keeps the graph simple");
    let mut start: Vec<Vertex> = p.vertices()[..=i].to_vec();
    start.push(w);
    start.extend(p.vertices()[i + 1..].iter().rev());
    let start = Path::new(&graph, start).expect("augmented start path");
    Ok(Augmented {
        graph,
        w,
        pivot,
        start,
    })
}

/// `S^vi` by exhaustive closure over spanning paths of `H⁺ᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointSet {
    pub endpoints: Vec<Vertex>,
    /// False when the closure stopped early, so `endpoints` is a subset.
    pub complete: bool,
}

pub fn pivot_endpoint_set(
    h: &Graph,
    p: &Path,
    pivot: Vertex,
    opts: &ClosureOptions,
) -> Result<EndpointSet, PivotError> {
    let aug = augment(h, p, pivot)?;
    let c = endpoint_closure_oracle(&aug.graph, &aug.start, p.first(), opts)?;
    Ok(EndpointSet {
        endpoints: c.endpoints.into_iter().filter(|&v| v != aug.w).collect(),
        complete: c.complete,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditOptions {
    /// A pivot is bad when `|S^v| < threshold_ratio · l`.
    pub threshold_ratio: f64,
    pub max_states: usize,
    /// Stop each closure once the threshold is reached. Sizes of good
    /// pivots are then lower bounds.
    pub stop_at_threshold: bool,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            threshold_ratio: 1.0 / BAD_PIVOT_DIVISOR,
            max_states: 200_000,
            stop_at_threshold: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PivotRecord {
    pub pivot: Vertex,
    pub size: usize,
    /// The size is exact rather than a lower bound.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PivotAudit {
    pub l: usize,
    pub threshold: f64,
    pub per_pivot: Vec<PivotRecord>,
    pub good: Vec<Vertex>,
    pub bad: Vec<Vertex>,
    /// Closure ran out of states below the threshold.
    pub undetermined: Vec<Vertex>,
}

/// Classifies every inner vertex of the spanning path `p`.
pub fn classify_pivots(h: &Graph, p: &Path, opts: &AuditOptions) -> Result<PivotAudit, PivotError> {
    require_spanning(h, p)?;
    let l = p.len();
    let threshold = opts.threshold_ratio * l as f64;
    let mut audit = PivotAudit {
        l,
        threshold,
        per_pivot: Vec::new(),
        good: Vec::new(),
        bad: Vec::new(),
        undetermined: Vec::new(),
    };
    let needed = threshold.ceil().max(0.0) as usize;
    for &v in &p.vertices()[1..l.saturating_sub(1)] {
        let mut copts = ClosureOptions::new(opts.max_states);
        if opts.stop_at_threshold {
            // the added vertex may be among the endpoints found
            copts.stop_after = Some(needed.max(1) + 1);
        }
        let set = pivot_endpoint_set(h, p, v, &copts)?;
        let size = set.endpoints.len();
        let exact = set.complete;
        if (size as f64) >= threshold {
            audit.good.push(v);
        } else if exact {
            audit.bad.push(v);
        } else {
            audit.undetermined.push(v);
        }
        audit.per_pivot.push(PivotRecord { pivot: v, size, exact });
    }
    Ok(audit)
}

/// The doubling sets `W_0, …, W_k` grown for one processed vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub vertex: Vertex,
    pub successor: Vertex,
    /// The successor was already in `X`; nothing was grown.
    pub skipped: bool,
    pub w: Vec<Vec<Vertex>>,
    /// `|T_t|` for every `t`, the last one being the exit value.
    pub t_sizes: Vec<usize>,
    /// The exit set `T_k`.
    pub t_exit: Vec<Vertex>,
    /// Spanning paths of `H⁺` ending at the members of the `W` sets.
    #[serde(skip)]
    pub paths: BTreeMap<Vertex, Vec<Vertex>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessingCertificate {
    pub u: Vec<Vertex>,
    pub x: Vec<Vertex>,
    pub traces: Vec<Trace>,
}

/// `X` together with the path neighbors of its members.
pub fn ext(p: &Path, x: &FixedBitSet) -> FixedBitSet {
    let mut out = x.clone();
    let w = p.vertices();
    for v in x.ones() {
        if let Some(i) = p.position(v) {
            if i > 0 {
                out.insert(w[i - 1]);
            }
            if i + 1 < w.len() {
                out.insert(w[i + 1]);
            }
        }
    }
    out
}

fn bits(n: usize, vs: impl IntoIterator<Item = Vertex>) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    vs.into_iter().for_each(|v| b.insert(v));
    b
}

/// Processes `r` (taken in path order) and checks the certificate
/// invariants after every vertex.
pub fn process_vertices(h: &Graph, p: &Path, r: &[Vertex]) -> Result<ProcessingCertificate, PivotError> {
    require_spanning(h, p)?;
    let n = h.n();
    let mut order: Vec<(usize, Vertex)> = r
        .iter()
        .map(|&v| inner_position(p, v).map(|i| (i, v)))
        .collect::<Result<_, _>>()?;
    order.sort_unstable();
    order.dedup();
    let mut u = FixedBitSet::with_capacity(n);
    let mut x = FixedBitSet::with_capacity(n);
    let mut traces = Vec::new();
    for (i, v) in order {
        let successor = p.vertices()[i + 1];
        if x.contains(successor) {
            traces.push(Trace {
                vertex: v,
                successor,
                skipped: true,
                w: Vec::new(),
                t_sizes: Vec::new(),
                t_exit: Vec::new(),
                paths: BTreeMap::new(),
            });
        } else {
            let trace = grow(h, p, v, successor, &x)?;
            let last = trace.w.last().unwrap();
            last.iter().for_each(|&y| u.insert(y));
            trace.w.iter().flatten().chain(&trace.t_exit).for_each(|&y| x.insert(y));
            traces.push(trace);
        }
        let cert = ProcessingCertificate {
            u: u.ones().collect(),
            x: x.ones().collect(),
            traces: traces.clone(),
        };
        cert.check(h, p)?;
    }
    Ok(ProcessingCertificate {
        u: u.ones().collect(),
        x: x.ones().collect(),
        traces,
    })
}

/// [`process_vertices`] over the bad pivots of an audit.
pub fn process_bad_vertices(h: &Graph, p: &Path, audit: &PivotAudit) -> Result<ProcessingCertificate, PivotError> {
    process_vertices(h, p, &audit.bad)
}

fn grow(h: &Graph, p: &Path, v: Vertex, successor: Vertex, x: &FixedBitSet) -> Result<Trace, PivotError> {
    let n = h.n();
    let aug = augment(h, p, v)?;
    let (first, last) = (p.first(), p.last());
    let mut paths: HashMap<Vertex, Path> = HashMap::from([(successor, aug.start.clone())]);
    let mut ws: Vec<Vec<Vertex>> = vec![vec![successor]];
    let mut t_sizes = Vec::new();
    loop {
        let wt = ws.last().unwrap();
        let mut union = x.clone();
        ws.iter().flatten().for_each(|&y| union.insert(y));
        let blocked = ext(p, &union);
        let t: Vec<Vertex> = h
            .neighborhood(wt)
            .expect("vertices in range")
            .into_iter()
            .filter(|&y| !blocked.contains(y))
            .collect();
        t_sizes.push(t.len());
        if t.len() <= 5 * wt.len() {
            let w_final = ws;
            let mut kept = BTreeMap::new();
            for y in w_final.iter().flatten() {
                kept.insert(*y, paths[y].vertices().to_vec());
            }
            return Ok(Trace {
                vertex: v,
                successor,
                skipped: false,
                w: w_final,
                t_sizes,
                t_exit: t,
                paths: kept,
            });
        }
        let mut pivots: Vec<(usize, Vertex)> = t
            .iter()
            .filter(|&&y| y != first && y != last)
            .map(|&y| (p.position(y).unwrap(), y))
            .collect();
        pivots.sort_unstable();
        let mut placed = FixedBitSet::with_capacity(n + 1);
        let mut next: Vec<(Vertex, Path)> = Vec::new();
        for (_, pivot) in pivots {
            let y = *wt
                .iter()
                .filter(|&&y| h.has_edge(y, pivot))
                .min()
                .expect("pivot lies in N(W_t)");
            let q = &paths[&y];
            let j = q.position(pivot).unwrap();
            if j + 2 >= q.len() {
                return Err(PivotError::Invariant(format!("pivot {pivot} is next to endpoint {y}")));
            }
            let placed_v = q.vertices()[j + 1];
            if union.contains(placed_v) || placed_v == aug.w {
                return Err(PivotError::Invariant(format!(
                    "pivot {pivot} placed an already used vertex {placed_v}"
                )));
            }
            if placed.put(placed_v) {
                continue;
            }
            let mut r = q.clone();
            rotate_unchecked(&mut r, j);
            next.push((placed_v, r));
        }
        let want = 2 * wt.len();
        if next.len() < want {
            return Err(PivotError::Invariant(format!(
                "|T_t| = {} gave only {} new endpoints, need {want}",
                t.len(),
                next.len()
            )));
        }
        next.sort_by_key(|e| e.0);
        next.truncate(want);
        let layer: Vec<Vertex> = next.iter().map(|e| e.0).collect();
        for (y, r) in next {
            paths.insert(y, r);
        }
        ws.push(layer);
    }
}

impl ProcessingCertificate {
    /// Checks every invariant of the procedure against `h` and `p`:
    /// `U ⊆ X`, `N(U) ⊆ ext(X)`, `7|U| >= |X|`, `|ext(X)| <= 3|X|`, all
    /// processed successors in `X`, and for each trace `|W_t| = 2^t`,
    /// pairwise disjoint `W` sets and replayable paths.
    pub fn check(&self, h: &Graph, p: &Path) -> Result<(), PivotError> {
        let n = h.n();
        let fail = |m: String| Err(PivotError::Invariant(m));
        let u = bits(n, self.u.iter().copied());
        let x = bits(n, self.x.iter().copied());
        if !u.is_subset(&x) {
            return fail("U is not contained in X".into());
        }
        let ex = ext(p, &x);
        let nu = h.neighborhood(&self.u).expect("vertices in range");
        if let Some(&y) = nu.iter().find(|&&y| !ex.contains(y)) {
            return fail(format!("neighbor {y} of U lies outside ext(X)"));
        }
        if 7 * self.u.len() < self.x.len() {
            return fail(format!("|U| = {} < |X| / 7 with |X| = {}", self.u.len(), self.x.len()));
        }
        if ex.count_ones(..) > 3 * self.x.len() {
            return fail("|ext(X)| > 3|X|".into());
        }
        for tr in &self.traces {
            if !x.contains(tr.successor) {
                return fail(format!("successor {} of {} not in X", tr.successor, tr.vertex));
            }
            if tr.skipped {
                continue;
            }
            let mut seen = FixedBitSet::with_capacity(n);
            for (t, w) in tr.w.iter().enumerate() {
                if w.len() != 1 << t {
                    return fail(format!("|W_{t}| = {} for vertex {}", w.len(), tr.vertex));
                }
                for &y in w {
                    if seen.put(y) {
                        return fail(format!("W sets of vertex {} overlap at {y}", tr.vertex));
                    }
                }
            }
            if !tr.paths.is_empty() {
                let aug = augment(h, p, tr.vertex)?;
                for (&y, path) in &tr.paths {
                    validate_path(&aug.graph, path, true)?;
                    if path[0] != p.first() || *path.last().unwrap() != y {
                        return fail(format!("path for {y} has the wrong endpoints"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl PivotAudit {
    /// JSON form `{l, threshold, per_pivot_sizes, good, bad, certificate}`.
    pub fn to_json(&self, certificate: &ProcessingCertificate) -> serde_json::Value {
        let sizes: BTreeMap<String, usize> = self
            .per_pivot
            .iter()
            .map(|r| (r.pivot.to_string(), r.size))
            .collect();
        serde_json::json!({
            "schema": 1,
            "l": self.l,
            "threshold": self.threshold,
            "per_pivot_sizes": sizes,
            "good": self.good,
            "bad": self.bad,
            "undetermined": self.undetermined,
            "certificate": certificate,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family};

    fn spanning(g: &Graph) -> Path {
        Path::new(g, (0..g.n()).collect()).unwrap()
    }

    #[test]
    fn augment_examples() {
        let p3 = generate(&Family::Path { n: 3 }, 0).unwrap();
        let a = augment(&p3, &spanning(&p3), 1).unwrap();
        assert_eq!(a.start.vertices(), &[0, 1, 3, 2]);
        assert_eq!(a.w, 3);
        let p5 = generate(&Family::Path { n: 5 }, 0).unwrap();
        let a = augment(&p5, &spanning(&p5), 3).unwrap();
        assert_eq!(a.start.vertices(), &[0, 1, 2, 3, 5, 4]);
        assert_eq!(augment(&p5, &spanning(&p5), 0), Err(PivotError::NotInner(0)));
        assert_eq!(augment(&p5, &spanning(&p5), 4), Err(PivotError::NotInner(4)));
    }

    #[test]
    fn endpoint_sets() {
        let k4 = generate(&Family::Complete { n: 4 }, 0).unwrap();
        let s = pivot_endpoint_set(&k4, &spanning(&k4), 1, &ClosureOptions::new(10_000)).unwrap();
        assert!(s.complete);
        assert_eq!(s.endpoints, vec![1, 2, 3]);
        let p8 = generate(&Family::Path { n: 8 }, 0).unwrap();
        for v in 1..7 {
            let s = pivot_endpoint_set(&p8, &spanning(&p8), v, &ClosureOptions::new(10_000)).unwrap();
            assert_eq!(s.endpoints, vec![v + 1]);
        }
    }

    #[test]
    fn classification_examples() {
        let k10 = generate(&Family::Complete { n: 10 }, 0).unwrap();
        let a = classify_pivots(&k10, &spanning(&k10), &AuditOptions::default()).unwrap();
        assert!(a.bad.is_empty());
        assert_eq!(a.good.len(), 8);

        let p50 = generate(&Family::Path { n: 50 }, 0).unwrap();
        let a = classify_pivots(&p50, &spanning(&p50), &AuditOptions::default()).unwrap();
        assert_eq!(a.bad, (1..49).collect::<Vec<_>>());
        assert!(a.per_pivot.iter().all(|r| r.size == 1 && r.exact));

        let opts = AuditOptions {
            threshold_ratio: 0.0,
            ..AuditOptions::default()
        };
        assert!(classify_pivots(&p50, &spanning(&p50), &opts).unwrap().bad.is_empty());
    }

    #[test]
    fn processing_on_chordless_path() {
        let p8 = generate(&Family::Path { n: 8 }, 0).unwrap();
        let p = spanning(&p8);
        let cert = process_vertices(&p8, &p, &[3]).unwrap();
        assert_eq!(cert.u, vec![4]);
        assert!(cert.x.len() <= 7 * cert.u.len());
        assert_eq!(cert.traces.len(), 1);
        assert_eq!(cert.traces[0].w, vec![vec![4]]);
        assert!(process_vertices(&p8, &p, &[]).unwrap().u.is_empty());
    }

    #[test]
    fn processing_on_clique_doubles() {
        let k15 = generate(&Family::Complete { n: 15 }, 0).unwrap();
        let p = spanning(&k15);
        let all: Vec<_> = (1..14).collect();
        let cert = process_vertices(&k15, &p, &all).unwrap();
        cert.check(&k15, &p).unwrap();
        let grown = cert.traces.iter().find(|t| !t.skipped).unwrap();
        assert!(grown.w.len() >= 2);
    }
}
