//! Checkers for the expansion and joined conditions, their threshold
//! variants, f-connectivity and the sparse random graph properties.
//!
//! Every checker returns a [`ConditionReport`]. A `fails` verdict always
//! carries a witness, and the witness is re-checked against the plain
//! definition before the report leaves this module.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex};
use crate::rng::rng_from_seed;

pub mod fconn;
pub mod gnp;
mod scalars;
pub(crate) mod search;

pub use scalars::{alpha_value, ln_binomial, m_value, p2_failure_bound, P2Bound};
use search::{find_small_closure, WorkMeter};

/// Default ceiling on subset-search nodes for exact checks.
pub const DEFAULT_WORK_BUDGET: u64 = 100_000_000;

/// Constant in the joined-condition threshold `n / (4130 m)`.
pub const JOINED_CONSTANT: f64 = 4130.0;
/// Constant in the simplified joined threshold `n ln d / (1035 ln n)`.
pub const JOINED_CONSTANT_SIMPLE: f64 = 1035.0;
/// A pivot is bad when its endpoint set has fewer than `l / 43` vertices.
pub const BAD_PIVOT_DIVISOR: f64 = 43.0;
/// Expansion factor delivered by f-connectivity.
pub const FCONN_EXPANSION: f64 = 12.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConditionError {
    #[error("work budget of {budget} exceeded after {work} search nodes")]
    BudgetExceeded { work: u64, budget: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    /// Conjunction: any failure fails, otherwise any unknown is unknown.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fails, _) | (_, Fails) => Fails,
            (Holds, Holds) => Holds,
            _ => Indeterminate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Sampled,
}

/// How subsets are examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SearchMode {
    /// Branch-and-bound over every candidate set, up to `budget` nodes.
    Exact { budget: u64 },
    /// Random sets plus greedy growth. Can refute, never certify.
    Sampled { samples: u64, seed: u64 },
}

impl Default for SearchMode {
    fn default() -> Self {
        SearchMode::Exact {
            budget: DEFAULT_WORK_BUDGET,
        }
    }
}

impl SearchMode {
    fn mode(&self) -> Mode {
        match self {
            SearchMode::Exact { .. } => Mode::Exact,
            SearchMode::Sampled { .. } => Mode::Sampled,
        }
    }
}

/// Evidence attached to a `fails` verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A set and its external neighborhood.
    Set {
        set: Vec<Vertex>,
        neighborhood: Vec<Vertex>,
    },
    /// Two disjoint sets with no edge between them.
    DisjointPair { a: Vec<Vertex>, b: Vec<Vertex> },
    /// A separation `(A, B)`: `A ∪ B = V`, no edge joins `A ∖ B` to `B ∖ A`.
    Separation { a: Vec<Vertex>, b: Vec<Vertex> },
    Vertices { vertices: Vec<Vertex> },
    Distance { u: Vertex, v: Vertex, distance: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: String,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub params: BTreeMap<String, Value>,
    pub work: u64,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<ConditionReport>,
}

impl ConditionReport {
    pub(crate) fn new(condition: &str, mode: Mode) -> Self {
        ConditionReport {
            condition: condition.to_string(),
            verdict: Verdict::Holds,
            witness: None,
            params: BTreeMap::new(),
            work: 0,
            mode,
            parts: Vec::new(),
        }
    }

    pub(crate) fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Combines sub-reports: verdicts are conjoined, work is summed.
    pub(crate) fn combine(condition: &str, mode: Mode, parts: Vec<ConditionReport>) -> Self {
        let mut r = ConditionReport::new(condition, mode);
        r.verdict = parts.iter().fold(Verdict::Holds, |v, p| v.and(p.verdict));
        r.work = parts.iter().map(|p| p.work).sum();
        r.parts = parts;
        r
    }

    pub fn part(&self, condition: &str) -> Option<&ConditionReport> {
        self.parts.iter().find(|p| p.condition == condition)
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["schema"] = json!(1);
        v
    }
}

/// Turns a budget overrun into an `indeterminate` report so that composite
/// checks can still report their other parts.
pub(crate) fn or_indeterminate(
    condition: &str,
    result: Result<ConditionReport, ConditionError>,
) -> Result<ConditionReport, ConditionError> {
    match result {
        Err(ConditionError::BudgetExceeded { work, budget }) => {
            let mut r = ConditionReport::new(condition, Mode::Exact)
                .param("budget", budget)
                .param("budget_exceeded", true);
            r.verdict = Verdict::Indeterminate;
            r.work = work;
            Ok(r)
        }
        other => other,
    }
}

/// Smallest closed-neighborhood size that an `a`-set must reach to satisfy
/// `|N(A)| >= d·a`.
fn expansion_limit(a: usize, d: f64) -> usize {
    a + (d * a as f64).ceil().max(0.0) as usize
}

/// True iff `set` violates `|N(A)| >= d·|A|`.
pub fn violates_expansion(g: &Graph, set: &[Vertex], d: f64) -> Result<bool, ConditionError> {
    let nb = g.neighborhood(set)?;
    Ok((nb.len() as f64) < d * set.len() as f64)
}

/// True iff `a` and `b` are disjoint and no edge joins them.
pub fn unjoined(g: &Graph, a: &[Vertex], b: &[Vertex]) -> bool {
    let mut in_a = FixedBitSet::with_capacity(g.n());
    a.iter().for_each(|&v| in_a.insert(v));
    b.iter().all(|&v| !in_a.contains(v) && g.neighbors(v).iter().all(|&w| !in_a.contains(w)))
}

fn check_range(g: &Graph, s: usize, what: &str) -> Result<(), ConditionError> {
    if s == 0 || s > g.n() {
        return Err(ConditionError::InvalidParameter(format!(
            "{what} = {s} must lie in 1..={}",
            g.n()
        )));
    }
    Ok(())
}

/// Checks that every set `S` with `|S| <= s` has `|N(S)| >= d·|S|`. A
/// failing report names a violating set of minimum size.
pub fn check_expansion(
    g: &Graph,
    s: usize,
    d: f64,
    mode: SearchMode,
) -> Result<ConditionReport, ConditionError> {
    check_range(g, s, "s")?;
    if !(d >= 0.0) {
        return Err(ConditionError::InvalidParameter(format!("d = {d} must be non-negative")));
    }
    let all: Vec<Vertex> = (0..g.n()).collect();
    let mut report = ConditionReport::new("expansion", mode.mode())
        .param("s", s)
        .param("d", d);
    let found = match mode {
        SearchMode::Exact { budget } => {
            let mut meter = WorkMeter::new(budget);
            let mut found = None;
            for a in 1..=s {
                if let Some(f) = find_small_closure(g, &all, a, expansion_limit(a, d), &mut meter)? {
                    found = Some(f.set);
                    break;
                }
            }
            report.work = meter.work;
            found
        }
        SearchMode::Sampled { samples, seed } => {
            let (found, work) = sample_small_closure(g, &all, 1..=s, samples, seed, |a| {
                expansion_limit(a, d)
            });
            report.work = work;
            report.verdict = Verdict::Indeterminate;
            found
        }
    };
    if let Some(set) = found {
        assert!(violates_expansion(g, &set, d)?, "expansion witness does not violate");
        report.verdict = Verdict::Fails;
        report.witness = Some(Witness::Set {
            neighborhood: g.neighborhood(&set)?,
            set,
        });
    }
    Ok(report)
}

/// Checks that any two disjoint sets of size at least `s` are joined by an
/// edge. Implemented through single sets: it fails iff some `s`-set `A`
/// leaves at least `s` vertices outside `A ∪ N(A)`.
pub fn check_joined(g: &Graph, s: usize, mode: SearchMode) -> Result<ConditionReport, ConditionError> {
    check_range(g, s, "s")?;
    let n = g.n();
    let all: Vec<Vertex> = (0..n).collect();
    let mut report = ConditionReport::new("joined", mode.mode()).param("s", s);
    let limit = n + 1 - s;
    let found = match mode {
        SearchMode::Exact { budget } => {
            let mut meter = WorkMeter::new(budget);
            let f = find_small_closure(g, &all, s, limit, &mut meter)?;
            report.work = meter.work;
            f.map(|f| f.set)
        }
        SearchMode::Sampled { samples, seed } => {
            let (found, work) = sample_small_closure(g, &all, s..=s, samples, seed, |_| limit);
            report.work = work;
            report.verdict = Verdict::Indeterminate;
            found
        }
    };
    if let Some(a) = found {
        let closure = g.closed_neighborhood_bits(&a);
        let b: Vec<Vertex> = (0..n).filter(|&v| !closure.contains(v)).take(s).collect();
        assert!(b.len() == s && unjoined(g, &a, &b), "joined witness is not a disjoint unjoined pair");
        report.verdict = Verdict::Fails;
        report.witness = Some(Witness::DisjointPair { a, b });
    }
    Ok(report)
}

/// Random refutation: draws sets of random size from `sizes`, alternating
/// uniform subsets with greedy growth that adds the vertex enlarging the
/// closed neighborhood least.
pub(crate) fn sample_small_closure(
    g: &Graph,
    candidates: &[Vertex],
    sizes: std::ops::RangeInclusive<usize>,
    samples: u64,
    seed: u64,
    limit: impl Fn(usize) -> usize,
) -> (Option<Vec<Vertex>>, u64) {
    let mut rng = rng_from_seed(seed);
    let (lo, hi) = (*sizes.start(), (*sizes.end()).min(candidates.len()));
    if lo > hi {
        return (None, 0);
    }
    for i in 0..samples {
        let a = rng.gen_range(lo..=hi);
        let mut set: Vec<Vertex> = if i % 2 == 0 {
            candidates.choose_multiple(&mut rng, a).copied().collect()
        } else {
            greedy_set(g, candidates, a, *candidates.choose(&mut rng).unwrap())
        };
        if g.closed_neighborhood_bits(&set).count_ones(..) < limit(a) {
            set.sort_unstable();
            return (Some(set), i + 1);
        }
    }
    (None, samples)
}

fn greedy_set(g: &Graph, candidates: &[Vertex], size: usize, start: Vertex) -> Vec<Vertex> {
    let mut set = vec![start];
    let mut closure = g.closed_neighborhood_bits(&set);
    while set.len() < size {
        let best = candidates
            .iter()
            .filter(|v| !set.contains(v))
            .min_by_key(|&&v| {
                let fresh = g.neighbors(v).iter().filter(|&&w| !closure.contains(w)).count();
                (fresh + usize::from(!closure.contains(v)), v)
            });
        let Some(&v) = best else { break };
        set.push(v);
        closure.insert(v);
        g.neighbors(v).iter().for_each(|&w| closure.insert(w));
    }
    set
}

/// Which pair of threshold formulas to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `s_small = n / (d m)`, `s_big = n / (4130 m)`.
    P1P2,
    /// `s_small = n ln d / (d ln n)`, `s_big = n ln d / (1035 ln n)`.
    P1pP2p,
}

/// Integer set-size thresholds for one condition pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub d: f64,
    /// Largest set size that must expand.
    pub s_small: usize,
    /// Smallest set size that must be joined.
    pub s_big: usize,
    pub raw_small: f64,
    pub raw_big: f64,
    /// Some raw value fell outside `[1, n]` before clamping.
    pub vacuous: bool,
}

impl Thresholds {
    /// Rounds raw thresholds into `1..=n`: the expansion bound down, the
    /// joined bound up.
    pub fn from_raw(n: usize, d: f64, raw_small: f64, raw_big: f64) -> Thresholds {
        let nf = n as f64;
        let vacuous = [raw_small, raw_big].iter().any(|&r| !(1.0..=nf).contains(&r));
        Thresholds {
            d,
            s_small: (raw_small.floor().max(1.0) as usize).min(n),
            s_big: (raw_big.ceil().max(1.0) as usize).min(n),
            raw_small,
            raw_big,
            vacuous,
        }
    }

    pub fn for_variant(n: usize, d: f64, variant: Variant) -> Result<Thresholds, ConditionError> {
        if !(d >= 1.0) {
            return Err(ConditionError::InvalidParameter(format!("d = {d} must be at least 1")));
        }
        let nf = n as f64;
        let (small, big) = match variant {
            Variant::P1P2 => {
                let m = m_value(n as u64, d)?;
                (nf / (d * m), nf / (JOINED_CONSTANT * m))
            }
            Variant::P1pP2p => {
                let (ld, ln) = (d.ln(), nf.ln());
                if !(ld > 0.0 && ln > 0.0) {
                    return Err(ConditionError::Domain(format!("need n >= 2 and d > 1, got n = {n}, d = {d}")));
                }
                (nf * ld / (d * ln), nf * ld / (JOINED_CONSTANT_SIMPLE * ln))
            }
        };
        Ok(Thresholds::from_raw(n, d, small, big))
    }
}

/// Checks expansion up to `s_small` and joinedness from `s_big`, reporting
/// both parts. Budget overruns make the affected part indeterminate.
pub fn check_conditions(g: &Graph, t: &Thresholds, mode: SearchMode) -> Result<ConditionReport, ConditionError> {
    let expansion = or_indeterminate("expansion", check_expansion(g, t.s_small, t.d, mode))?;
    let joined = or_indeterminate("joined", check_joined(g, t.s_big, mode))?;
    Ok(
        ConditionReport::combine("conditions", mode.mode(), vec![expansion, joined])
            .param("d", t.d)
            .param("s_small", t.s_small)
            .param("s_big", t.s_big)
            .param("raw_small", t.raw_small)
            .param("raw_big", t.raw_big)
            .param("vacuous", t.vacuous),
    )
}

/// [`check_conditions`] with thresholds computed from `n` and `d`.
pub fn check_paper_conditions(
    g: &Graph,
    d: f64,
    variant: Variant,
    mode: SearchMode,
) -> Result<ConditionReport, ConditionError> {
    let t = Thresholds::for_variant(g.n(), d, variant)?;
    let mut r = check_conditions(g, &t, mode)?;
    r.condition = match variant {
        Variant::P1P2 => "p1_p2",
        Variant::P1pP2p => "p1p_p2p",
    }
    .to_string();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family};

    fn exact() -> SearchMode {
        SearchMode::Exact { budget: 1_000_000 }
    }

    fn family(f: Family) -> Graph {
        generate(&f, 0).unwrap()
    }

    #[test]
    fn expansion_examples() {
        let k34 = family(Family::CompleteBipartite { a: 3, b: 4 });
        assert_eq!(check_expansion(&k34, 1, 3.0, exact()).unwrap().verdict, Verdict::Holds);

        let c6 = family(Family::Cycle { n: 6 });
        let r = check_expansion(&c6, 2, 2.0, exact()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        match r.witness.unwrap() {
            Witness::Set { set, neighborhood } => {
                assert_eq!(set, vec![0, 1]);
                assert_eq!(neighborhood, vec![2, 5]);
            }
            w => panic!("unexpected witness {w:?}"),
        }

        let star = Graph::from_edges(6, (1..6).map(|v| (0, v))).unwrap();
        let r = check_expansion(&star, 1, 2.0, exact()).unwrap();
        assert_eq!(
            r.witness,
            Some(Witness::Set {
                set: vec![1],
                neighborhood: vec![0]
            })
        );
    }

    #[test]
    fn joined_examples() {
        let g = family(Family::CliquePlusIsolated { clique: 5, isolated: 1 });
        assert_eq!(check_joined(&g, 2, exact()).unwrap().verdict, Verdict::Holds);
        let r = check_joined(&g, 1, exact()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.witness, Some(Witness::DisjointPair { a: vec![0], b: vec![5] }));

        let c8 = family(Family::Cycle { n: 8 });
        let r = check_joined(&c8, 2, exact()).unwrap();
        let Some(Witness::DisjointPair { a, b }) = r.witness else {
            panic!("expected a pair")
        };
        assert_eq!((a, b), (vec![0, 1], vec![3, 4]));
    }

    #[test]
    fn sampled_mode_refutes_or_abstains() {
        let star = Graph::from_edges(6, (1..6).map(|v| (0, v))).unwrap();
        let r = check_expansion(&star, 1, 2.0, SearchMode::Sampled { samples: 50, seed: 3 }).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.mode, Mode::Sampled);
        let k8 = family(Family::Complete { n: 8 });
        let r = check_expansion(&k8, 2, 3.0, SearchMode::Sampled { samples: 50, seed: 3 }).unwrap();
        assert_eq!(r.verdict, Verdict::Indeterminate);
        assert_eq!(r.work, 50);
    }

    #[test]
    fn budget_overrun_is_an_error_or_indeterminate_part() {
        let g = family(Family::Complete { n: 40 });
        let tight = SearchMode::Exact { budget: 10 };
        assert!(matches!(
            check_joined(&g, 5, tight),
            Err(ConditionError::BudgetExceeded { .. })
        ));
        let t = Thresholds::from_raw(40, 2.0, 1.0, 5.0);
        let r = check_conditions(&g, &t, tight).unwrap();
        assert_eq!(r.part("joined").unwrap().verdict, Verdict::Indeterminate);
    }

    #[test]
    fn complete_graph_meets_simplified_thresholds() {
        let k = family(Family::Complete { n: 500 });
        let r = check_paper_conditions(&k, 12.0, Variant::P1pP2p, SearchMode::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.params["s_small"], json!(16));
        assert_eq!(r.params["s_big"], json!(1));
        assert_eq!(r.params["vacuous"], json!(true));
    }

    #[test]
    fn unbalanced_bipartite_passes_scaled_thresholds() {
        // K_{a,a+1} is not Hamiltonian, yet it expands and is joined at the
        // sizes used here
        let g = family(Family::CompleteBipartite { a: 20, b: 21 });
        let t = Thresholds::from_raw(41, 12.0, 1.0, 21.0);
        let r = check_conditions(&g, &t, exact()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn thresholds_reject_small_n_for_normalized_variant() {
        assert!(matches!(
            Thresholds::for_variant(15, 12.0, Variant::P1P2),
            Err(ConditionError::Domain(_))
        ));
        let t = Thresholds::for_variant(1_000_000, 12.0, Variant::P1P2).unwrap();
        assert!(t.s_small > t.s_big);
        assert!(!t.vacuous);
    }

    #[test]
    fn report_json_shape() {
        let c6 = family(Family::Cycle { n: 6 });
        let j = check_expansion(&c6, 2, 2.0, exact()).unwrap().to_json();
        for key in ["condition", "verdict", "witness", "params", "work", "mode", "schema"] {
            assert!(j.get(key).is_some(), "{key}");
        }
        assert_eq!(j["verdict"], "fails");
        assert_eq!(j["witness"]["kind"], "set");
    }
}
