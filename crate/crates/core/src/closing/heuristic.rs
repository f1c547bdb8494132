//! Randomized rotation walk with extension and absorption.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{absorb, Log, Stage};
use crate::graph::{ordered, Graph, Path, Vertex};
use crate::rng::rng_from_seed;
use crate::rotation::{extend, rotate_unchecked};

/// Pivot positions usable at the last vertex of `p`.
fn pivots(g: &Graph, p: &Path, protected: Option<(Vertex, Vertex)>) -> Vec<usize> {
    let len = p.len();
    g.neighbors(p.last())
        .iter()
        .filter_map(|&v| p.position(v))
        .filter(|&i| i + 2 < len)
        .filter(|&i| protected != Some(ordered(p.vertices()[i], p.vertices()[i + 1])))
        .collect()
}

/// Walks until the path closes into a Hamilton cycle or the rotation count
/// in `log` reaches `cap`. Rotations that make the ends adjacent win, then
/// rotations whose new end can be extended, then a uniform choice.
pub(crate) fn close(
    g: &Graph,
    start: Path,
    cap: u64,
    seed: u64,
    protected: Option<(Vertex, Vertex)>,
    log: &mut Log,
) -> Result<Vec<Vertex>, Stage> {
    let n = g.n();
    let protected = protected.map(|(u, v)| ordered(u, v));
    let mut rng = rng_from_seed(seed);
    let mut p = extend(g, start);
    loop {
        if p.len() >= 3 && g.has_edge(p.first(), p.last()) {
            if p.len() == n {
                return Ok(p.into_vertices());
            }
            let grown = absorb(g, p.vertices(), protected, log).ok_or(Stage::Absorb)?;
            p = extend(g, grown);
            continue;
        }
        if log.stats.rotations >= cap {
            return Err(Stage::Budget);
        }
        if rng.gen_bool(0.5) {
            p = p.reversed();
        }
        let mut options = pivots(g, &p, protected);
        if options.is_empty() {
            p = p.reversed();
            options = pivots(g, &p, protected);
            if options.is_empty() {
                return Err(Stage::Stuck);
            }
        }
        let w = p.vertices();
        let first = p.first();
        let closing = options.iter().copied().find(|&i| g.has_edge(w[i + 1], first));
        let growing = || {
            options
                .iter()
                .copied()
                .find(|&i| g.neighbors(w[i + 1]).iter().any(|&x| !p.contains(x)))
        };
        let pick = match closing.or_else(growing) {
            Some(i) => i,
            None => *options.choose(&mut rng).unwrap(),
        };
        let step = rotate_unchecked(&mut p, pick);
        log.stats.rotations += 1;
        log.broke(step.broken.0, step.broken.1);
        p = extend(g, p);
    }
}
