//! Closing a longest path into a Hamilton cycle.
//!
//! [`find_hamilton_cycle`] runs one of two closers from a maximal path:
//!
//! * the segment pipeline ([`Mode::ProofFaithful`]): double rotations,
//!   a split of the base path into `2ρ` segments, the most popular ordered
//!   pair of unbroken segments, and rotations inside the two contracted
//!   halves until an edge joins their endpoint sets;
//! * a randomized rotation walk ([`Mode::Heuristic`]).
//!
//! [`Mode::Auto`] tries the pipeline once and falls back to the walk. A
//! returned cycle has always passed [`validate_cycle`]; failures carry the
//! stage that gave up.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ordered, validate_cycle, Cycle, Graph, Path, Vertex, WalkViolation};
use crate::rng::{derive_seed, rng_from_seed};
use crate::rotation::extend;

mod faithful;
mod heuristic;
mod model;
mod segments;

pub use faithful::FaithfulParams;
pub use model::{build_contracted, AugmentedHalf, ContractedHalf};
pub use segments::{
    decompose, decompose_keeping, select_sigma0, sequence_count, unbroken_segments, OrientedSegment,
    RotatedPathRecord, SegmentDecomposition, TauSequence,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosingError {
    #[error("cannot cut a path of {len} vertices into {} segments", 2 * rho)]
    RhoTooLarge { rho: usize, len: usize },
    #[error("({0}, {1}) is not an edge of the path")]
    NotAPathEdge(Vertex, Vertex),
    #[error("P({a}, {b}) keeps only {unbroken} segments, fewer than {tau}")]
    TooFewUnbroken {
        a: Vertex,
        b: Vertex,
        unbroken: usize,
        tau: usize,
    },
    #[error("no sequence satisfies the constraints")]
    NoSequence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    ProofFaithful,
    Heuristic,
    #[default]
    Auto,
}

/// Where a search gave up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// Fewer than three vertices, a vertex of degree below two, or
    /// disconnected.
    Precheck,
    DoubleRotation,
    Segments,
    Sigma0,
    AHat,
    GoodVertices,
    #[serde(rename = "v1_v2")]
    V1V2,
    /// A shorter cycle had no edge leaving it.
    Absorb,
    /// Both ends of the path have no usable rotation.
    Stuck,
    Budget,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string tag"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub rotations: u64,
    pub restarts: u64,
    pub families_built: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("search failed at stage {stage}")]
pub struct SearchFailure {
    pub stage: Stage,
    pub stats: SearchStats,
}

impl SearchFailure {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "stage": self.stage, "stats": self.stats })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonOptions {
    pub mode: Mode,
    /// Total rotations over all restarts.
    pub budget: u64,
    pub seed: u64,
    /// Rotations per walk before it restarts from a fresh vertex.
    pub restart_every: Option<u64>,
    /// Pipeline attempts before giving up in proof-faithful mode.
    pub faithful_restarts: usize,
    pub faithful: FaithfulParams,
    /// Keep every broken path edge in the outcome.
    pub record_broken: bool,
}

impl Default for HamiltonOptions {
    fn default() -> Self {
        HamiltonOptions {
            mode: Mode::Auto,
            budget: 1_000_000,
            seed: 0,
            restart_every: None,
            faithful_restarts: 2,
            faithful: FaithfulParams::default(),
            record_broken: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonOutcome {
    pub cycle: Cycle,
    pub stats: SearchStats,
    /// The closer that produced the cycle.
    pub mode: Mode,
    /// Path edges removed along the way, when recording was asked for.
    pub broken: Vec<(Vertex, Vertex)>,
}

/// Mutable bookkeeping shared by both closers.
#[derive(Debug, Default)]
pub(crate) struct Log {
    pub stats: SearchStats,
    pub record: bool,
    pub broken: Vec<(Vertex, Vertex)>,
}

impl Log {
    pub(crate) fn broke(&mut self, u: Vertex, v: Vertex) {
        if self.record {
            self.broken.push(ordered(u, v));
        }
    }
}

pub(crate) fn precheck(g: &Graph) -> bool {
    g.n() >= 3 && g.min_degree() >= 2 && g.is_connected()
}

/// Final check on every cycle handed out.
pub(crate) fn gate(g: &Graph, vertices: Vec<Vertex>) -> Result<Cycle, WalkViolation> {
    validate_cycle(g, &vertices, true)?;
    Ok(Cycle::from_vec_unchecked(vertices))
}

/// Turns a cycle that misses some vertex into a longer path: drops a cycle
/// edge at a vertex with an outside neighbor and appends that neighbor. The
/// protected edge is never the one dropped.
pub(crate) fn absorb(
    g: &Graph,
    cycle: &[Vertex],
    protected: Option<(Vertex, Vertex)>,
    log: &mut Log,
) -> Option<Path> {
    let n = g.n();
    let len = cycle.len();
    let mut on = vec![false; n];
    for &v in cycle {
        on[v] = true;
    }
    let k = (0..len).find(|&k| g.neighbors(cycle[k]).iter().any(|&u| !on[u]))?;
    let u = *g.neighbors(cycle[k]).iter().find(|&&u| !on[u]).unwrap();
    let c = cycle[k];
    let next = cycle[(k + 1) % len];
    let prev = cycle[(k + len - 1) % len];
    let mut seq = Vec::with_capacity(len + 1);
    if protected.map(|(a, b)| ordered(a, b)) != Some(ordered(c, next)) {
        log.broke(c, next);
        seq.extend((1..=len).map(|i| cycle[(k + i) % len]));
    } else {
        log.broke(prev, c);
        seq.extend((1..=len).map(|i| cycle[(k + len - i) % len]));
    }
    debug_assert_eq!(*seq.last().unwrap(), c);
    seq.push(u);
    Some(Path::from_parts(n, seq))
}

/// Searches for a Hamilton cycle of `g`.
pub fn find_hamilton_cycle(g: &Graph, opts: &HamiltonOptions) -> Result<HamiltonOutcome, SearchFailure> {
    let n = g.n();
    search(g, opts, None, |restart| {
        let mut rng = rng_from_seed(derive_seed(opts.seed, "start", restart));
        extend(g, Path::single(n, rng.gen_range(0..n)))
    })
}

/// Closes the given path into a Hamilton cycle that keeps `protected`, a
/// path edge, in place. Every restart begins from `start`.
pub fn close_path(
    g: &Graph,
    start: &Path,
    protected: Option<(Vertex, Vertex)>,
    opts: &HamiltonOptions,
) -> Result<HamiltonOutcome, SearchFailure> {
    if let Some((u, v)) = protected {
        assert!(start.has_edge(u, v), "protected edge must lie on the start path");
    }
    search(g, opts, protected, |_| start.clone())
}

fn search(
    g: &Graph,
    opts: &HamiltonOptions,
    protected: Option<(Vertex, Vertex)>,
    start: impl Fn(u64) -> Path,
) -> Result<HamiltonOutcome, SearchFailure> {
    let mut log = Log {
        record: opts.record_broken,
        ..Log::default()
    };
    if !precheck(g) {
        return Err(SearchFailure {
            stage: Stage::Precheck,
            stats: log.stats,
        });
    }
    let finish = |vertices: Vec<Vertex>, log: Log, mode: Mode| {
        let cycle = gate(g, vertices).expect("closers only produce valid Hamilton cycles");
        if let Some((u, v)) = protected {
            assert!(cycle.contains_edge(u, v), "protected edge kept");
        }
        HamiltonOutcome {
            cycle,
            stats: log.stats,
            mode,
            broken: log.broken,
        }
    };
    let mut last = Stage::Budget;
    if matches!(opts.mode, Mode::ProofFaithful | Mode::Auto) {
        let tries = if opts.mode == Mode::Auto { 1 } else { opts.faithful_restarts.max(1) };
        for r in 0..tries as u64 {
            if r > 0 {
                log.stats.restarts += 1;
            }
            match faithful::close(g, start(r), &opts.faithful, protected, &mut log) {
                Ok(c) => return Ok(finish(c, log, Mode::ProofFaithful)),
                Err(stage) => last = stage,
            }
        }
        if opts.mode == Mode::ProofFaithful {
            return Err(SearchFailure {
                stage: last,
                stats: log.stats,
            });
        }
    }
    let every = opts.restart_every.unwrap_or((20 * g.n() as u64).max(1000));
    let mut r = 0u64;
    while log.stats.rotations < opts.budget {
        if r > 0 {
            log.stats.restarts += 1;
        }
        let cap = (log.stats.rotations + every).min(opts.budget);
        let seed = derive_seed(opts.seed, "walk", r);
        match heuristic::close(g, start(r), cap, seed, protected, &mut log) {
            Ok(c) => return Ok(finish(c, log, Mode::Heuristic)),
            Err(Stage::Absorb) => {
                return Err(SearchFailure {
                    stage: Stage::Absorb,
                    stats: log.stats,
                })
            }
            Err(stage) => last = stage,
        }
        r += 1;
        // a walk stuck on both ends may not have used any budget
        if last == Stage::Stuck && r > 64 {
            break;
        }
    }
    Err(SearchFailure {
        stage: last,
        stats: log.stats,
    })
}
