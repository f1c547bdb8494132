//! Low-degree vertices and the four structural properties used to run the
//! rotation schedule on sparse random graphs.

use serde::{Deserialize, Serialize};

use super::search::{find_small_closure, WorkMeter};
use super::{or_indeterminate, ConditionError, ConditionReport, Mode, SearchMode, Verdict, Witness};
use crate::graph::{Graph, Vertex};

/// `(ln n)^0.2`.
pub fn default_small_threshold(n: usize) -> f64 {
    (n.max(2) as f64).ln().powf(0.2)
}

/// Vertices of degree at most `threshold`, ascending.
pub fn small_vertices(g: &Graph, threshold: f64) -> Vec<Vertex> {
    (0..g.n()).filter(|&v| g.degree(v) as f64 <= threshold).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GnpPropertyParams {
    /// Degree threshold for low-degree vertices.
    pub small_threshold: f64,
    /// Expansion factor; property (3) asks for `3d`.
    pub d: f64,
    /// Largest set size in property (3).
    pub s_small: usize,
    /// Required distance between two low-degree vertices.
    pub min_distance: usize,
    /// Cap on the number of vertices of degree at most 11, if any.
    pub low_degree_cap: Option<usize>,
    pub mode: SearchMode,
}

impl GnpPropertyParams {
    /// Defaults: threshold `(ln n)^0.2`, `d = (ln n)^0.1`, distance 250,
    /// `s_small = n / (d m(n, d))` where that is defined, else 1.
    pub fn defaults(n: usize) -> GnpPropertyParams {
        let ln = (n.max(2) as f64).ln();
        let d = ln.powf(0.1);
        let s_small = super::m_value(n as u64, d)
            .map(|m| ((n as f64 / (d * m)).floor() as usize).clamp(1, n.max(1)))
            .unwrap_or(1);
        GnpPropertyParams {
            small_threshold: ln.powf(0.2),
            d,
            s_small,
            min_distance: 250,
            low_degree_cap: None,
            mode: SearchMode::default(),
        }
    }
}

/// Reports the four properties as parts `min_degree`, `small_distance`,
/// `weak_expansion` and `low_degree_count`.
pub fn check_gnp_properties(g: &Graph, params: &GnpPropertyParams) -> Result<ConditionReport, ConditionError> {
    let small = small_vertices(g, params.small_threshold);
    let parts = vec![
        min_degree(g),
        small_distance(g, &small, params.min_distance),
        or_indeterminate("weak_expansion", weak_expansion(g, &small, params))?,
        low_degree_count(g, params.low_degree_cap),
    ];
    let mode = match params.mode {
        SearchMode::Exact { .. } => Mode::Exact,
        SearchMode::Sampled { .. } => Mode::Sampled,
    };
    Ok(ConditionReport::combine("gnp_properties", mode, parts)
        .param("small_threshold", params.small_threshold)
        .param("small", small))
}

fn min_degree(g: &Graph) -> ConditionReport {
    let mut r = ConditionReport::new("min_degree", Mode::Exact).param("min_degree", g.min_degree());
    r.work = g.n() as u64;
    let low: Vec<Vertex> = (0..g.n()).filter(|&v| g.degree(v) < 2).collect();
    if !low.is_empty() {
        r.verdict = Verdict::Fails;
        r.witness = Some(Witness::Vertices { vertices: low });
    }
    r
}

fn small_distance(g: &Graph, small: &[Vertex], min_distance: usize) -> ConditionReport {
    let mut r = ConditionReport::new("small_distance", Mode::Exact)
        .param("min_distance", min_distance)
        .param("vacuous", small.len() < 2);
    for &u in small {
        r.work += 1;
        let dist = g.bfs_distances(u);
        let close = small
            .iter()
            .filter(|&&v| v > u)
            .filter_map(|&v| dist[v].map(|d| (d, v)))
            .filter(|&(d, _)| d < min_distance)
            .min();
        if let Some((distance, v)) = close {
            r.verdict = Verdict::Fails;
            r.witness = Some(Witness::Distance { u, v, distance });
            break;
        }
    }
    r
}

fn weak_expansion(g: &Graph, small: &[Vertex], params: &GnpPropertyParams) -> Result<ConditionReport, ConditionError> {
    let candidates: Vec<Vertex> = (0..g.n()).filter(|v| small.binary_search(v).is_err()).collect();
    let factor = 3.0 * params.d;
    let mut r = ConditionReport::new("weak_expansion", Mode::Exact)
        .param("s", params.s_small)
        .param("factor", factor);
    let limit = |a: usize| a + (factor * a as f64).ceil() as usize;
    let found = match params.mode {
        SearchMode::Exact { budget } => {
            let mut meter = WorkMeter::new(budget);
            let mut found = None;
            for a in 1..=params.s_small.min(candidates.len()) {
                if let Some(f) = find_small_closure(g, &candidates, a, limit(a), &mut meter)? {
                    found = Some(f.set);
                    break;
                }
            }
            r.work = meter.work;
            found
        }
        SearchMode::Sampled { samples, seed } => {
            r.mode = Mode::Sampled;
            r.verdict = Verdict::Indeterminate;
            let upper = params.s_small.min(candidates.len()).max(1);
            let (found, work) = super::sample_small_closure(g, &candidates, 1..=upper, samples, seed, limit);
            r.work = work;
            found
        }
    };
    if let Some(set) = found {
        let nb = g.neighborhood(&set)?;
        assert!((nb.len() as f64) < factor * set.len() as f64);
        r.verdict = Verdict::Fails;
        r.witness = Some(Witness::Set { set, neighborhood: nb });
    }
    Ok(r)
}

fn low_degree_count(g: &Graph, cap: Option<usize>) -> ConditionReport {
    let low: Vec<Vertex> = (0..g.n()).filter(|&v| g.degree(v) <= 11).collect();
    let mut r = ConditionReport::new("low_degree_count", Mode::Exact)
        .param("count", low.len())
        .param("cap", cap);
    r.work = g.n() as u64;
    if cap.is_some_and(|c| low.len() > c) {
        r.verdict = Verdict::Fails;
        r.witness = Some(Witness::Vertices { vertices: low });
    }
    r
}
