//! Layered endpoint families.
//!
//! Starting from a maximal path `P0 = (v1, …, vq)` with `v1` fixed, layer
//! `S_t` is built from `S_(t-1)` by one rotation each. A vertex `vi` of
//! `P0` may act as pivot when it is adjacent to some `y ∈ S_(t-1)` and none
//! of `v(i-1), vi, v(i+1)` is an endpoint of an earlier layer. Both path
//! edges at such a pivot are still unbroken on the path `Q` ending at `y`,
//! so rotating `Q` at `vi` makes its successor on `Q` the new endpoint, and
//! the broken edge is always an edge of `P0`.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::{rotate_unchecked, RotationError, RotationStep};
use crate::graph::{ordered, Graph, Path, Vertex};

/// Layer size targets.
///
/// With `t0` the least `t` such that `(d/3)^(t-2) > s_small`, layer `t`
/// keeps `⌈(d/3)^t⌉` endpoints for `t <= t0 - 3`, `s_small` at `t0 - 2`,
/// `s_big` at `t0 - 1`, and is left untrimmed from `t0` on. For `d <= 3`
/// there is no `t0` and no layer is trimmed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub d: f64,
    pub s_small: usize,
    pub s_big: usize,
    /// Stop once this many distinct endpoints have been collected.
    pub final_target: usize,
    pub max_layers: usize,
    /// Trimmed layers keep up to `⌈retain · target⌉` endpoints.
    pub retain: f64,
}

impl Schedule {
    pub fn new(n: usize, d: f64, s_small: usize, s_big: usize) -> Schedule {
        Schedule {
            d,
            s_small,
            s_big,
            final_target: n.div_ceil(3),
            max_layers: n,
            retain: 1.0,
        }
    }

    /// No trimming, no early stop: layers grow until one comes out empty.
    pub fn unbounded(n: usize) -> Schedule {
        Schedule {
            d: 3.0,
            s_small: n.max(1),
            s_big: n.max(1),
            final_target: usize::MAX,
            max_layers: n,
            retain: 1.0,
        }
    }

    pub fn t0(&self) -> Option<usize> {
        if !(self.d > 3.0) {
            return None;
        }
        let ratio = self.d / 3.0;
        let mut t = 2usize;
        while ratio.powi(t as i32 - 2) <= self.s_small as f64 {
            t += 1;
            if t > 100_000 {
                return None;
            }
        }
        Some(t)
    }

    /// Target size of layer `t`, `None` when the layer is not trimmed.
    pub fn target(&self, t: usize) -> Option<usize> {
        if t == 0 {
            return Some(1);
        }
        let t0 = self.t0()?;
        let raw = if t + 3 <= t0 {
            (self.d / 3.0).powi(t as i32).ceil() as usize
        } else if t + 2 == t0 {
            self.s_small
        } else if t + 1 == t0 {
            self.s_big
        } else {
            return None;
        };
        Some((self.retain.max(1.0) * raw as f64).ceil() as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    EmptyLayer,
    MaxLayers,
    TargetReached,
    ScheduleComplete,
}

/// How an endpoint was reached: the endpoint of the previous layer whose
/// path was rotated, and the rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub from: Vertex,
    pub step: RotationStep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointFamily {
    pub fixed: Vertex,
    /// Path the layers are built from; `layers[0]` is its last vertex.
    pub base: Vec<Vertex>,
    pub layers: Vec<Vec<Vertex>>,
    /// Rotations that produced `base` from an earlier path, if any.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prefix: Vec<RotationStep>,
    pub links: BTreeMap<Vertex, Link>,
    pub targets: Vec<Option<usize>>,
    pub stop: StopReason,
}

impl EndpointFamily {
    pub fn contains(&self, v: Vertex) -> bool {
        self.base.last() == Some(&v) || self.links.contains_key(&v)
    }

    pub fn endpoints(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.layers.iter().flatten().copied()
    }

    pub fn layer_of(&self, v: Vertex) -> Option<usize> {
        self.layers.iter().position(|l| l.contains(&v))
    }

    /// Rotations from `base` to the path ending at `v`.
    pub fn chain(&self, v: Vertex) -> Result<Vec<RotationStep>, RotationError> {
        if v == self.fixed && self.base.len() > 1 {
            return Err(RotationError::FixedEndpoint(v));
        }
        if !self.contains(v) {
            return Err(RotationError::NotInFamily(v));
        }
        let mut steps = Vec::new();
        let mut cur = v;
        while let Some(link) = self.links.get(&cur) {
            steps.push(link.step);
            cur = link.from;
        }
        steps.reverse();
        Ok(steps)
    }

    /// Every broken edge along stored chains.
    pub fn broken_edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut e: Vec<_> = self.links.values().map(|l| l.step.broken).collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    /// JSON form `{fixed, layers, chains: {v: [{pivot, broken}]}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let chains: BTreeMap<String, Vec<serde_json::Value>> = self
            .endpoints()
            .map(|v| {
                let steps = self.chain(v).expect("stored endpoint");
                let steps = self.prefix.iter().chain(steps.iter());
                let list = steps
                    .map(|s| serde_json::json!({"pivot": s.pivot, "broken": [s.broken.0, s.broken.1]}))
                    .collect();
                (v.to_string(), list)
            })
            .collect();
        serde_json::json!({"fixed": self.fixed, "layers": self.layers, "chains": chains})
    }
}

/// Replays the chain of `v` from the family's base path.
pub fn reconstruct_path(g: &Graph, f: &EndpointFamily, v: Vertex) -> Result<Path, RotationError> {
    let steps = f.chain(v)?;
    let base = Path::from_parts(g.n(), f.base.clone());
    super::replay(g, &base, &steps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyOptions {
    pub schedule: Schedule,
    /// Path edges that may never be broken.
    #[serde(default)]
    pub protected: Vec<(Vertex, Vertex)>,
}

impl FamilyOptions {
    pub fn new(schedule: Schedule) -> FamilyOptions {
        FamilyOptions {
            schedule,
            protected: Vec::new(),
        }
    }
}

/// Builds the layered family of `p` with `p.first()` fixed.
pub fn endpoint_family(g: &Graph, p: &Path, schedule: &Schedule) -> EndpointFamily {
    endpoint_family_with(g, p, &FamilyOptions::new(*schedule))
}

pub fn endpoint_family_with(g: &Graph, p: &Path, opts: &FamilyOptions) -> EndpointFamily {
    let mut b = FamilyBuilder::new(g, p.clone(), &opts.protected);
    let s = &opts.schedule;
    let t0 = s.t0();
    let mut stop = StopReason::MaxLayers;
    let mut t = 1;
    loop {
        if t0.is_some_and(|t0| t > t0) {
            stop = StopReason::ScheduleComplete;
            break;
        }
        if t > s.max_layers {
            break;
        }
        let sources = b.family.layers[t - 1].clone();
        let candidates = b.candidates(&sources, |_| true);
        if candidates.is_empty() {
            stop = StopReason::EmptyLayer;
            break;
        }
        let target = s.target(t);
        b.family.targets.push(target);
        b.push_layer(trim(candidates, target));
        if b.seen >= s.final_target {
            stop = StopReason::TargetReached;
            break;
        }
        t += 1;
    }
    b.finish(stop)
}

/// Keeps the `target` lowest vertex ids, or everything when untrimmed.
pub(crate) fn trim(mut candidates: Vec<(Vertex, Link)>, target: Option<usize>) -> Vec<(Vertex, Link)> {
    candidates.sort_by_key(|c| c.0);
    if let Some(k) = target {
        candidates.truncate(k);
    }
    candidates
}

/// Incremental family construction shared with the sparse-graph schedule.
pub(crate) struct FamilyBuilder<'g> {
    g: &'g Graph,
    pub family: EndpointFamily,
    base: Path,
    /// Endpoints of all layers so far.
    used: FixedBitSet,
    protected: Vec<(Vertex, Vertex)>,
    /// Paths ending at the members of the newest layer.
    frontier: HashMap<Vertex, Path>,
    pub seen: usize,
}

impl<'g> FamilyBuilder<'g> {
    pub fn new(g: &'g Graph, base: Path, protected: &[(Vertex, Vertex)]) -> Self {
        let last = base.last();
        let mut used = FixedBitSet::with_capacity(g.n());
        used.insert(last);
        let family = EndpointFamily {
            fixed: base.first(),
            base: base.vertices().to_vec(),
            layers: vec![vec![last]],
            prefix: Vec::new(),
            links: BTreeMap::new(),
            targets: vec![Some(1)],
            stop: StopReason::EmptyLayer,
        };
        FamilyBuilder {
            g,
            family,
            frontier: HashMap::from([(last, base.clone())]),
            base,
            used,
            protected: protected.iter().map(|&(u, v)| ordered(u, v)).collect(),
            seen: 1,
        }
    }

    pub fn layer_count(&self) -> usize {
        self.family.layers.len()
    }

    pub fn path_to(&self, v: Vertex) -> Option<&Path> {
        self.frontier.get(&v)
    }

    fn admissible_pivot(&self, pos: usize) -> bool {
        let w = self.base.vertices();
        let lo = pos.saturating_sub(1);
        let hi = (pos + 1).min(w.len() - 1);
        (lo..=hi).all(|j| !self.used.contains(w[j]))
    }

    /// New endpoints reachable by one rotation from the paths of `sources`,
    /// pivots taken in ascending position on the base path. A placed vertex
    /// is kept only if `admit` accepts it; the first placement wins.
    pub fn candidates(&self, sources: &[Vertex], admit: impl Fn(Vertex) -> bool) -> Vec<(Vertex, Link)> {
        let n = self.g.n();
        // smallest adjacent source per pivot
        let mut source_of: Vec<Option<Vertex>> = vec![None; n];
        let mut sorted = sources.to_vec();
        sorted.sort_unstable();
        for &y in &sorted {
            for &v in self.g.neighbors(y) {
                if source_of[v].is_none() && self.base.contains(v) {
                    source_of[v] = Some(y);
                }
            }
        }
        let mut pivots: Vec<(usize, Vertex, Vertex)> = (0..n)
            .filter_map(|v| source_of[v].map(|y| (self.base.position(v).unwrap(), v, y)))
            .filter(|&(pos, _, _)| self.admissible_pivot(pos))
            .collect();
        pivots.sort_unstable();
        let mut placed = FixedBitSet::with_capacity(n);
        let mut out = Vec::new();
        for (_, pivot, y) in pivots {
            let q = &self.frontier[&y];
            let j = q.position(pivot).unwrap();
            if j + 2 >= q.len() {
                continue;
            }
            let next = q.vertices()[j + 1];
            let step = RotationStep {
                pivot,
                broken: ordered(pivot, next),
                new_endpoint: next,
            };
            if self.protected.contains(&step.broken) || next == self.family.fixed {
                continue;
            }
            if self.used.contains(next) || placed.contains(next) || !admit(next) {
                continue;
            }
            placed.insert(next);
            out.push((next, Link { from: y, step }));
        }
        out
    }

    /// Appends a layer and materializes the paths of its members.
    pub fn push_layer(&mut self, layer: Vec<(Vertex, Link)>) {
        let mut frontier = HashMap::with_capacity(layer.len());
        let mut vs = Vec::with_capacity(layer.len());
        for (v, link) in layer {
            let mut p = self.frontier[&link.from].clone();
            let pos = p.position(link.step.pivot).unwrap();
            let done = rotate_unchecked(&mut p, pos);
            debug_assert_eq!(done, link.step);
            self.used.insert(v);
            self.family.links.insert(v, link);
            frontier.insert(v, p);
            vs.push(v);
        }
        self.seen += vs.len();
        self.family.layers.push(vs);
        self.frontier = frontier;
    }

    pub fn finish(mut self, stop: StopReason) -> EndpointFamily {
        self.family.stop = stop;
        self.family
    }
}
