//! The segment pipeline.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::model::{build_contracted, ContractedHalf};
use super::segments::{decompose_keeping, path_edge_set, select_sigma0, unbroken_segments, OrientedSegment};
use super::{absorb, Log, SegmentDecomposition, Stage};
use crate::conditions::BAD_PIVOT_DIVISOR;
use crate::graph::{validate_cycle, Graph, Path, Vertex};
use crate::rotation::{double_rotation_targets, extend, DoubleRotationParams, EndpointSource, Schedule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FaithfulParams {
    /// Segments per chosen sequence; at least 2.
    pub tau: usize,
    /// Half the number of segments. Defaults to the largest rotation count
    /// seen among the pairs.
    pub rho: Option<usize>,
    /// Endpoint sets for the double rotation. Defaults to an untrimmed
    /// layered family.
    pub source: Option<EndpointSource>,
    /// First-round endpoints expanded.
    pub a_cap: usize,
    /// Second-round endpoints kept per first-round endpoint.
    pub b_cap: usize,
    /// Share of the starts `a`, ranked by pair count, kept in `Â`.
    pub a_hat_fraction: f64,
    /// A pivot of a half is good when its endpoint set reaches this share
    /// of the half.
    pub threshold_ratio: f64,
    pub max_states: usize,
    /// `(â, b̂)` pairs tried per round.
    pub max_attempts: usize,
    /// Absorption rounds before giving up.
    pub max_rounds: Option<usize>,
}

impl Default for FaithfulParams {
    fn default() -> Self {
        FaithfulParams {
            tau: 2,
            rho: None,
            source: None,
            a_cap: 24,
            b_cap: 48,
            a_hat_fraction: 0.5,
            threshold_ratio: 1.0 / BAD_PIVOT_DIVISOR,
            max_states: 20_000,
            max_attempts: 64,
            max_rounds: None,
        }
    }
}

/// Runs pipeline rounds, absorbing outside vertices after short cycles.
pub(crate) fn close(
    g: &Graph,
    start: Path,
    params: &FaithfulParams,
    protected: Option<(Vertex, Vertex)>,
    log: &mut Log,
) -> Result<Vec<Vertex>, Stage> {
    let n = g.n();
    let mut p = extend(g, start);
    for round in 0..params.max_rounds.unwrap_or(n) {
        if round > 0 {
            log.stats.restarts += 1;
        }
        let cycle = close_round(g, &p, params, protected, log)?;
        if cycle.len() == n {
            return Ok(cycle);
        }
        p = extend(g, absorb(g, &cycle, protected, log).ok_or(Stage::Absorb)?);
    }
    Err(Stage::Budget)
}

fn oriented(d: &SegmentDecomposition, s: OrientedSegment) -> Vec<Vertex> {
    let mut v = d.segments[s.segment].clone();
    if !s.forward {
        v.reverse();
    }
    v
}

/// One half prepared for a given `P̂`.
struct Half {
    model: ContractedHalf,
    /// Vertices hidden in the linking edge to the extra vertex, listed from
    /// the model end towards it.
    tail: Vec<Vertex>,
}

/// Kept runs of a half in `P̂` order. The required segment is dropped, but
/// `keep` (the vertex `x` or `y`) stays as a run of its own.
fn kept_runs(
    d: &SegmentDecomposition,
    half: &[OrientedSegment],
    required: Option<usize>,
    keep: Vertex,
) -> Vec<Vec<Vertex>> {
    half.iter()
        .filter_map(|&s| {
            let run = oriented(d, s);
            if Some(s.segment) != required {
                Some(run)
            } else if run.contains(&keep) {
                Some(vec![keep])
            } else {
                None
            }
        })
        .collect()
}

/// Vertices of `ph` strictly between positions `i` and `j`, `i < j`.
fn between(ph: &Path, i: usize, j: usize) -> Vec<Vertex> {
    ph.vertices()[i + 1..j].to_vec()
}

/// Builds the model for the first half (rooted at `x`, read backwards) or
/// the second half (rooted at `y`, read forwards).
fn prepare(g: &Graph, ph: &Path, runs: &[Vec<Vertex>], forward: bool) -> Half {
    let pos = |v: Vertex| ph.position(v).expect("run lies on P̂");
    let mut hidden: Vec<Vec<Vertex>> = runs
        .windows(2)
        .map(|w| between(ph, pos(*w[0].last().unwrap()), pos(w[1][0])))
        .collect();
    if forward {
        let end = pos(*runs.last().unwrap().last().unwrap());
        let tail = between(ph, end, ph.len() - 1);
        Half {
            model: build_contracted(g, runs, &hidden),
            tail,
        }
    } else {
        let model_runs: Vec<Vec<Vertex>> = runs.iter().rev().map(|r| r.iter().rev().copied().collect()).collect();
        hidden.reverse();
        hidden.iter_mut().for_each(|h| h.reverse());
        let mut tail = between(ph, 0, pos(runs[0][0]));
        tail.reverse();
        Half {
            model: build_contracted(g, &model_runs, &hidden),
            tail,
        }
    }
}

/// Good-pivot classification of one half, cached by model vertex.
struct Goodness {
    need: usize,
    max_states: usize,
    cache: HashMap<usize, bool>,
}

impl Goodness {
    fn new(model: &ContractedHalf, ratio: f64, max_states: usize) -> Goodness {
        Goodness {
            need: (ratio * model.len() as f64).ceil().max(1.0) as usize,
            max_states,
            cache: HashMap::new(),
        }
    }

    fn is_good(&mut self, model: &ContractedHalf, pivot: usize, log: &mut Log) -> bool {
        if let Some(&b) = self.cache.get(&pivot) {
            return b;
        }
        let (aug, c) = model.closure(pivot, self.max_states, Some(self.need + 1));
        log.stats.rotations += c.states as u64;
        let good = c.endpoints.iter().filter(|&&v| v != aug.w).count() >= self.need;
        self.cache.insert(pivot, good);
        good
    }

    /// First good pivot of `model` adjacent in `g` to `outside`.
    fn pivot_for(&mut self, g: &Graph, model: &ContractedHalf, outside: Vertex, log: &mut Log) -> Option<usize> {
        let cands: Vec<usize> = model
            .pivot_candidates()
            .filter(|&i| g.has_edge(outside, model.global[i]))
            .collect();
        cands.into_iter().find(|&i| self.is_good(model, i, log))
    }
}

/// One pass of the pipeline on the maximal path `p0`. Returns a cycle on
/// the vertices of `p0`.
fn close_round(
    g: &Graph,
    p0: &Path,
    params: &FaithfulParams,
    protected: Option<(Vertex, Vertex)>,
    log: &mut Log,
) -> Result<Vec<Vertex>, Stage> {
    let n = g.n();
    if g.has_edge(p0.first(), p0.last()) {
        return Ok(p0.vertices().to_vec());
    }
    let source = params.source.unwrap_or(EndpointSource::Family {
        schedule: Schedule::unbounded(n),
    });
    let dr = double_rotation_targets(
        g,
        p0,
        &DoubleRotationParams {
            source,
            cap: params.a_cap,
            b_cap: params.b_cap,
            protected: protected.into_iter().collect(),
        },
    );
    log.stats.families_built += 1 + dr.b_map.len() as u64;
    log.stats.rotations += (dr.a0.len() + dr.pairs.len()) as u64;
    if dr.pairs.is_empty() {
        return Err(Stage::DoubleRotation);
    }
    let rho = params.rho.unwrap_or(dr.rho).clamp(1, (p0.len() / 2).max(1));
    let d = decompose_keeping(p0, rho, protected).map_err(|_| Stage::Segments)?;
    let required = protected.map(|(u, _)| d.segment_of(u).expect("protected edge on the path"));
    let tau = params.tau.max(2).min(d.len());
    let paths: BTreeMap<(Vertex, Vertex), Path> = dr
        .pairs
        .iter()
        .map(|pp| ((pp.a, pp.b), Path::from_parts(n, pp.path.clone())))
        .collect();
    let records: Vec<_> = dr
        .pairs
        .iter()
        .map(|pp| unbroken_segments(&d, p0, &paths[&(pp.a, pp.b)], pp.rotations))
        .filter(|r| r.unbroken.len() >= tau)
        .collect();
    if records.is_empty() {
        return Err(Stage::Sigma0);
    }
    let (sigma, pairs) = select_sigma0(&records, tau, required).map_err(|_| Stage::Sigma0)?;

    let mut per_a: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &(a, b) in &pairs {
        per_a.entry(a).or_default().push(b);
    }
    let mut ranked: Vec<(Vertex, usize)> = per_a.iter().map(|(&a, bs)| (a, bs.len())).collect();
    ranked.sort_by_key(|&(a, c)| (std::cmp::Reverse(c), a));
    let keep = ((params.a_hat_fraction * ranked.len() as f64).ceil() as usize).max(1);
    let a_hat: Vec<Vertex> = ranked.into_iter().take(keep).map(|e| e.0).collect();

    let h = tau / 2;
    let (first, second) = sigma.0.split_at(h);
    let in_sigma = {
        let mut m = vec![false; n];
        for s in &sigma.0 {
            for &v in &d.segments[s.segment] {
                m[v] = true;
            }
        }
        m
    };
    let x = *oriented(&d, first[h - 1]).last().unwrap();
    let y = oriented(&d, second[0])[0];
    let runs1 = kept_runs(&d, first, required, x);
    let runs2 = kept_runs(&d, second, required, y);
    let base_edges = path_edge_set(p0.vertices());

    let mut good1: Option<Goodness> = None;
    let mut good2: Option<Goodness> = None;
    let mut last = Stage::AHat;
    let mut attempts = 0;
    for &a in &a_hat {
        if in_sigma[a] {
            continue;
        }
        for &b in &per_a[&a] {
            if in_sigma[b] {
                continue;
            }
            if attempts >= params.max_attempts {
                return Err(last);
            }
            attempts += 1;
            let ph = &paths[&(a, b)];
            let h1 = prepare(g, ph, &runs1, false);
            let h2 = prepare(g, ph, &runs2, true);
            let g1 = good1.get_or_insert_with(|| Goodness::new(&h1.model, params.threshold_ratio, params.max_states));
            let g2 = good2.get_or_insert_with(|| Goodness::new(&h2.model, params.threshold_ratio, params.max_states));
            let (Some(q1), Some(q2)) = (
                g1.pivot_for(g, &h1.model, a, log),
                g2.pivot_for(g, &h2.model, b, log),
            ) else {
                last = Stage::GoodVertices;
                continue;
            };
            let (aug1, c1) = h1.model.closure(q1, params.max_states, None);
            let (aug2, c2) = h2.model.closure(q2, params.max_states, None);
            log.stats.rotations += (c1.states + c2.states) as u64;
            let ends1: Vec<Vertex> = c1.endpoints.iter().copied().filter(|&v| v != aug1.w).collect();
            let ends2: Vec<Vertex> = c2.endpoints.iter().copied().filter(|&v| v != aug2.w).collect();
            let joined = ends1.iter().find_map(|&e1| {
                ends2
                    .iter()
                    .find(|&&e2| g.has_edge(h1.model.global[e1], h2.model.global[e2]))
                    .map(|&e2| (e1, e2))
            });
            let Some((e1, e2)) = joined else {
                last = Stage::V1V2;
                continue;
            };
            let r1 = h1
                .model
                .expand(c1.path_to(e1, aug1.graph.n()).unwrap().vertices(), a, &h1.tail);
            let r2 = h2
                .model
                .expand(c2.path_to(e2, aug2.graph.n()).unwrap().vertices(), b, &h2.tail);
            let (px, py) = (ph.position(x).unwrap(), ph.position(y).unwrap());
            let p3 = &ph.vertices()[px..=py];
            let mut cycle: Vec<Vertex> = r1.iter().rev().copied().collect();
            cycle.extend_from_slice(&p3[1..]);
            cycle.extend_from_slice(&r2[1..]);
            assert_eq!(validate_cycle(g, &cycle, false), Ok(()), "pipeline cycle");
            assert_eq!(cycle.len(), p0.len(), "pipeline cycle spans the path");
            assert!(
                cycle.windows(p3.len()).any(|w| w == p3),
                "middle subpath unchanged"
            );
            let kept = path_edge_set(&cycle);
            let closing = super::ordered(cycle[0], *cycle.last().unwrap());
            for &e in base_edges.iter().filter(|e| !kept.contains(e) && **e != closing) {
                log.broke(e.0, e.1);
            }
            return Ok(cycle);
        }
    }
    Err(last)
}
