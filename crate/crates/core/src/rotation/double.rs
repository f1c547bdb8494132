//! Two rounds of rotations: first with `v1` fixed, then, for each endpoint
//! `a` found, with `a` fixed.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::closure::{endpoint_closure_oracle, ClosureOptions};
use super::family::{endpoint_family_with, reconstruct_path, EndpointFamily, FamilyOptions, Schedule};
use super::small::{small_aware_family, SmallAwareParams};
use crate::graph::{Graph, Path, Vertex};

/// Where endpoint sets come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum EndpointSource {
    /// Layered family under a schedule.
    Family { schedule: Schedule },
    /// Exhaustive closure.
    Closure { max_states: usize },
    /// Layered family that steers around low-degree vertices.
    SmallAware { params: SmallAwareParams },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleRotationParams {
    pub source: EndpointSource,
    /// At most this many first-round endpoints are expanded.
    pub cap: usize,
    /// At most this many second-round endpoints are kept per `a`.
    #[serde(default = "unlimited")]
    pub b_cap: usize,
    #[serde(default)]
    pub protected: Vec<(Vertex, Vertex)>,
}

fn unlimited() -> usize {
    usize::MAX
}

/// A path from `a` to `b` and the rotations spent on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPath {
    pub a: Vertex,
    pub b: Vertex,
    pub path: Vec<Vertex>,
    pub rotations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleRotation {
    pub fixed: Vertex,
    pub a0: Vec<Vertex>,
    pub b_map: BTreeMap<Vertex, Vec<Vertex>>,
    pub pairs: Vec<PairPath>,
    /// Largest rotation count over all pairs.
    pub rho: usize,
}

/// Endpoints reachable from `base` with its first vertex fixed, each with a
/// path and rotation count, ascending by endpoint.
pub(crate) fn reachable(
    g: &Graph,
    base: &Path,
    source: &EndpointSource,
    protected: &[(Vertex, Vertex)],
) -> Vec<(Vertex, Path, usize)> {
    match source {
        EndpointSource::Family { schedule } => {
            let opts = FamilyOptions {
                schedule: *schedule,
                protected: protected.to_vec(),
            };
            family_paths(g, &endpoint_family_with(g, base, &opts))
        }
        EndpointSource::SmallAware { params } => family_paths(g, &small_aware_family(g, base, params, protected).family),
        EndpointSource::Closure { max_states } => {
            let mut opts = ClosureOptions::new(*max_states);
            opts.protected = protected.to_vec();
            let c = endpoint_closure_oracle(g, base, base.first(), &opts).expect("first vertex is an endpoint");
            c.endpoints
                .iter()
                .map(|&v| (v, c.path_to(v, g.n()).unwrap(), c.rotations_to(v).unwrap()))
                .collect()
        }
    }
}

fn family_paths(g: &Graph, f: &EndpointFamily) -> Vec<(Vertex, Path, usize)> {
    let mut out: Vec<_> = f
        .endpoints()
        .map(|v| {
            let rotations = f.prefix.len() + f.layer_of(v).unwrap();
            (v, reconstruct_path(g, f, v).expect("stored chain replays"), rotations)
        })
        .collect();
    out.sort_by_key(|e| e.0);
    out
}

pub fn double_rotation_targets(g: &Graph, p: &Path, params: &DoubleRotationParams) -> DoubleRotation {
    let first = reachable(g, p, &params.source, &params.protected);
    let mut out = DoubleRotation {
        fixed: p.first(),
        a0: first.iter().map(|e| e.0).collect(),
        b_map: BTreeMap::new(),
        pairs: Vec::new(),
        rho: 0,
    };
    let base_edges: HashSet<(Vertex, Vertex)> = p.edges().collect();
    for (a, pa, r1) in first.into_iter().take(params.cap) {
        // the second round may only break edges of the original path
        let mut protected = params.protected.clone();
        protected.extend(pa.edges().filter(|e| !base_edges.contains(e)));
        let mut second = reachable(g, &pa.reversed(), &params.source, &protected);
        // a rotation edge can restore a broken edge of `p`; such paths no
        // longer break one base edge per rotation
        second.retain(|(_, pab, r2)| pab.edges().filter(|e| base_edges.contains(e)).count() + r1 + r2 == p.len() - 1);
        second.truncate(params.b_cap);
        out.b_map.insert(a, second.iter().map(|e| e.0).collect());
        for (b, pab, r2) in second {
            out.rho = out.rho.max(r1 + r2);
            out.pairs.push(PairPath {
                a,
                b,
                path: pab.into_vertices(),
                rotations: r1 + r2,
            });
        }
    }
    out
}
