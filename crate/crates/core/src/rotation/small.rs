//! Endpoint families that steer around low-degree ("SMALL") vertices.
//!
//! Layers are built as usual, with three changes:
//!
//! * the first time a candidate endpoint `u` is SMALL, its path `P_u` is
//!   rotated once more at a neighbor of `u`, giving an endpoint `w` two
//!   steps from `u`, and the family restarts from `P_w`;
//! * for `block` layers after the restart no SMALL vertex is admitted;
//! * when a layer `S_t` expands poorly (`|N(S_t)| < d |S_t|`) and holds
//!   SMALL vertices, the next layer is grown from those alone, keeps no
//!   SMALL vertex, and is trimmed to `|S_t|`.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::family::{trim, EndpointFamily, FamilyBuilder, Schedule, StopReason};
use super::{rotate_unchecked, RotationStep};
use crate::conditions::gnp::default_small_threshold;
use crate::graph::{ordered, Graph, Path, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallAwareParams {
    /// Vertices of degree at most this are SMALL.
    pub small_threshold: f64,
    /// Expansion factor of the stall test.
    pub d: f64,
    /// Layers after the restart that refuse SMALL vertices.
    pub block: usize,
    pub schedule: Schedule,
}

impl SmallAwareParams {
    pub fn defaults(n: usize) -> SmallAwareParams {
        SmallAwareParams {
            small_threshold: default_small_threshold(n),
            d: (n.max(2) as f64).ln().powf(0.1),
            block: 120,
            schedule: Schedule::unbounded(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallAwareFamily {
    pub family: EndpointFamily,
    /// The SMALL vertex that triggered the restart.
    pub restart_trigger: Option<Vertex>,
    /// Indices of layers produced by the stall rule.
    pub stall_layers: Vec<usize>,
}

/// One further rotation of `pu` (ending at the SMALL vertex `u`) at a
/// neighbor of `u`, such that the new endpoint is not SMALL.
fn detour(g: &Graph, pu: &Path, small: &FixedBitSet, protected: &[(Vertex, Vertex)]) -> Option<(Path, RotationStep)> {
    let u = pu.last();
    let len = pu.len();
    let mut spots: Vec<usize> = g
        .neighbors(u)
        .iter()
        .filter_map(|&z| pu.position(z))
        .filter(|&j| j + 2 < len)
        .collect();
    spots.sort_unstable();
    spots.into_iter().find_map(|j| {
        let w = pu.vertices()[j + 1];
        let broken = ordered(pu.vertices()[j], w);
        if small.contains(w) || protected.contains(&broken) {
            return None;
        }
        let mut q = pu.clone();
        let step = rotate_unchecked(&mut q, j);
        Some((q, step))
    })
}

pub fn small_aware_family(
    g: &Graph,
    p: &Path,
    params: &SmallAwareParams,
    protected: &[(Vertex, Vertex)],
) -> SmallAwareFamily {
    let n = g.n();
    let protected: Vec<_> = protected.iter().map(|&(u, v)| ordered(u, v)).collect();
    let mut small = FixedBitSet::with_capacity(n);
    (0..n)
        .filter(|&v| g.degree(v) as f64 <= params.small_threshold)
        .for_each(|v| small.insert(v));
    let s = &params.schedule;

    let mut b = FamilyBuilder::new(g, p.clone(), &protected);
    let mut restart_trigger = None;
    let mut restart_spent = false;
    let mut since_restart = 0usize;
    let mut stall_layers = Vec::new();

    // the start path itself may end at a SMALL vertex
    if small.contains(p.last()) {
        restart_spent = true;
        if let Some((pw, step)) = detour(g, p, &small, &protected) {
            b = FamilyBuilder::new(g, pw, &protected);
            b.family.prefix = vec![step];
            restart_trigger = Some(p.last());
        }
    }

    let mut t = 1;
    let stop = loop {
        if t > s.max_layers {
            break StopReason::MaxLayers;
        }
        let sources = b.family.layers[t - 1].clone();
        let small_sources: Vec<Vertex> = sources.iter().copied().filter(|&v| small.contains(v)).collect();
        let stall = !small_sources.is_empty() && (external_size(g, &sources) as f64) < params.d * sources.len() as f64;
        let blocked = restart_spent && since_restart < params.block;
        let (mut candidates, target) = if stall {
            (b.candidates(&small_sources, |v| !small.contains(v)), Some(sources.len()))
        } else {
            (b.candidates(&sources, |v| !(blocked && small.contains(v))), s.target(t))
        };
        if !restart_spent {
            if let Some(&(u, link)) = candidates.iter().find(|c| small.contains(c.0)) {
                restart_spent = true;
                let mut pu = b.path_to(link.from).expect("source on the frontier").clone();
                let pos = pu.position(link.step.pivot).unwrap();
                rotate_unchecked(&mut pu, pos);
                if let Some((pw, step)) = detour(g, &pu, &small, &protected) {
                    let mut prefix = b.family.prefix.clone();
                    prefix.extend(b.family.chain(link.from).unwrap_or_default());
                    prefix.push(link.step);
                    prefix.push(step);
                    b = FamilyBuilder::new(g, pw, &protected);
                    b.family.prefix = prefix;
                    restart_trigger = Some(u);
                    since_restart = 0;
                    t = 1;
                    continue;
                }
                candidates.retain(|c| !small.contains(c.0));
            }
        }
        if candidates.is_empty() {
            break StopReason::EmptyLayer;
        }
        b.family.targets.push(target);
        b.push_layer(trim(candidates, target));
        if stall {
            stall_layers.push(b.layer_count() - 1);
        }
        since_restart += 1;
        if b.seen >= s.final_target {
            break StopReason::TargetReached;
        }
        t += 1;
    };
    SmallAwareFamily {
        family: b.finish(stop),
        restart_trigger,
        stall_layers,
    }
}

/// `|N(S)|`, the vertices outside `set` adjacent to it.
fn external_size(g: &Graph, set: &[Vertex]) -> usize {
    let mut inside = FixedBitSet::with_capacity(g.n());
    set.iter().for_each(|&v| inside.insert(v));
    let mut out = FixedBitSet::with_capacity(g.n());
    for &v in set {
        for &w in g.neighbors(v) {
            if !inside.contains(w) {
                out.insert(w);
            }
        }
    }
    out.count_ones(..)
}
