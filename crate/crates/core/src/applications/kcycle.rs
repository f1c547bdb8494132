//! Cycles of a prescribed length: strip poorly expanding sets from a
//! vertex pool, then look for a Hamilton cycle on a `k`-subset of what
//! survives.

use rand::seq::{IteratorRandom, SliceRandom};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closing::{find_hamilton_cycle, HamiltonOptions, Mode};
use crate::conditions::search::{find_small_closure, WorkMeter};
use crate::conditions::{sample_small_closure, ConditionError, DEFAULT_WORK_BUDGET};
use crate::graph::{validate_cycle, Cycle, Graph, Vertex};
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripOptions {
    /// Largest set removed in one step.
    pub size_bound: usize,
    /// A set `A` is removed when `|N(A)| < ratio · |A|` inside the pool.
    pub ratio: f64,
    /// Never remove more than this many vertices in total.
    pub max_removed: usize,
    /// Sets up to this size are searched exhaustively; larger ones are
    /// sampled, and the result is then not certified.
    pub exact_sizes: usize,
    pub budget: u64,
    pub samples: u64,
    pub seed: u64,
}

impl StripOptions {
    pub fn exact(size_bound: usize, ratio: f64) -> StripOptions {
        StripOptions {
            size_bound,
            ratio,
            max_removed: usize::MAX,
            exact_sizes: size_bound,
            budget: DEFAULT_WORK_BUDGET,
            samples: 0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripStep {
    pub removed: Vec<Vertex>,
    /// `|N(A)|` inside the pool at the time of removal.
    pub neighborhood: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripResult {
    pub removed: Vec<Vertex>,
    pub survivors: Vec<Vertex>,
    pub trace: Vec<StripStep>,
    /// No violating set of size up to the bound remains, by exhaustive
    /// search.
    pub certified: bool,
    pub work: u64,
}

/// `|A ∪ N(A)|` must stay below this for `|N(A)| < ratio · |A|`.
fn closure_limit(a: usize, ratio: f64) -> usize {
    (a as f64 * (1.0 + ratio)).ceil() as usize
}

/// Removes violating sets from `v0` one at a time. Among singletons the
/// vertex of least degree in the pool goes first.
pub fn strip_nonexpanding(g: &Graph, v0: &[Vertex], opts: &StripOptions) -> Result<StripResult, ConditionError> {
    let mut pool: Vec<Vertex> = v0.to_vec();
    pool.sort_unstable();
    pool.dedup();
    let mut removed = Vec::new();
    let mut trace = Vec::new();
    let mut meter = WorkMeter::new(opts.budget);
    let mut certified;
    let mut round = 0;
    loop {
        let allowance = opts.max_removed.saturating_sub(removed.len());
        let amax = opts.size_bound.min(allowance).min(pool.len());
        let h = g.induced(&pool);
        let local: Vec<Vertex> = (0..pool.len()).collect();
        let exact_top = amax.min(opts.exact_sizes);
        certified = exact_top == opts.size_bound.min(pool.len()) || amax == 0;
        let mut hit: Option<Vec<Vertex>> = None;
        if exact_top >= 1 {
            // singletons: peel the lowest degree first
            meter.work += pool.len() as u64;
            let v = (0..pool.len()).min_by_key(|&v| (h.degree(v), v));
            hit = v.filter(|&v| h.degree(v) + 1 < closure_limit(1, opts.ratio)).map(|v| vec![v]);
        }
        for a in 2..=exact_top {
            if hit.is_some() {
                break;
            }
            match find_small_closure(&h, &local, a, closure_limit(a, opts.ratio), &mut meter) {
                Ok(Some(f)) => {
                    hit = Some(f.set);
                    break;
                }
                Ok(None) => {}
                Err(e) if opts.exact_sizes >= opts.size_bound => return Err(e),
                Err(_) => {
                    certified = false;
                    break;
                }
            }
        }
        if hit.is_none() && exact_top < amax {
            certified = false;
            let seed = derive_seed(opts.seed, "strip", round);
            let (found, spent) =
                sample_small_closure(&h, &local, exact_top + 1..=amax, opts.samples, seed, |a| {
                    closure_limit(a, opts.ratio)
                });
            meter.work += spent;
            hit = found;
        }
        let Some(set) = hit else { break };
        let nb = h.neighborhood(&set).expect("local ids").len();
        let mut global: Vec<Vertex> = set.iter().map(|&i| pool[i]).collect();
        global.sort_unstable();
        pool.retain(|v| global.binary_search(v).is_err());
        removed.extend_from_slice(&global);
        trace.push(StripStep {
            removed: global,
            neighborhood: nb,
        });
        round += 1;
    }
    removed.sort_unstable();
    Ok(StripResult {
        removed,
        survivors: pool,
        trace,
        certified,
        work: meter.work,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// Uniform `k`-subsets of the survivors.
    Uniform,
    /// Grow the subset greedily by most neighbors already chosen.
    Dense,
    /// Uniform for the first half of the retries, then dense.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KCycleOptions {
    pub t: f64,
    pub seed: u64,
    pub retries: usize,
    /// Defaults to `4 ln n / ln ln n`.
    pub ratio: Option<f64>,
    /// Draw the pool at random instead of taking the lowest ids.
    pub random_pool: bool,
    pub sampling: Sampling,
    pub hamilton: HamiltonOptions,
    pub strip_exact_sizes: usize,
    pub strip_samples: u64,
}

impl Default for KCycleOptions {
    fn default() -> Self {
        KCycleOptions {
            t: 10.0,
            seed: 0,
            retries: 20,
            ratio: None,
            random_pool: false,
            sampling: Sampling::Mixed,
            hamilton: HamiltonOptions {
                mode: Mode::Heuristic,
                budget: 100_000,
                ..HamiltonOptions::default()
            },
            strip_exact_sizes: 1,
            strip_samples: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KCycleError {
    #[error("k = {k} outside 3..={n}")]
    OutOfRange { k: usize, n: usize },
    #[error("no {k}-cycle found in {retries} attempts")]
    Exhausted { k: usize, retries: usize },
    #[error(transparent)]
    Strip(#[from] ConditionError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCycleOutcome {
    pub cycle: Cycle,
    pub strip: StripResult,
    /// Zero-based index of the successful attempt.
    pub attempt: usize,
}

pub fn default_ratio(n: usize) -> f64 {
    let ln = (n.max(3) as f64).ln();
    let lnln = ln.ln();
    if lnln > 0.0 {
        4.0 * ln / lnln
    } else {
        1.0
    }
}

fn dense_subset(g: &Graph, pool: &[Vertex], k: usize, rng: &mut impl rand::Rng) -> Vec<Vertex> {
    let n = g.n();
    let mut inside = vec![false; n];
    let mut allowed = vec![false; n];
    pool.iter().for_each(|&v| allowed[v] = true);
    let mut score = vec![0usize; n];
    let start = *pool.choose(rng).unwrap();
    let mut chosen = vec![start];
    inside[start] = true;
    for &w in g.neighbors(start) {
        score[w] += 1;
    }
    while chosen.len() < k {
        let best = pool
            .iter()
            .copied()
            .filter(|&v| !inside[v] && allowed[v])
            .max_by_key(|&v| (score[v], std::cmp::Reverse(v)))
            .unwrap();
        chosen.push(best);
        inside[best] = true;
        for &w in g.neighbors(best) {
            score[w] += 1;
        }
    }
    chosen.sort_unstable();
    chosen
}

/// A cycle of exactly `k` vertices: take a pool of `k + ⌈n/t⌉` vertices,
/// strip it with at most `⌈n/t⌉` removals, then search `k`-subsets of the
/// survivors for a Hamilton cycle.
pub fn cycle_of_length_k(g: &Graph, k: usize, opts: &KCycleOptions) -> Result<KCycleOutcome, KCycleError> {
    let n = g.n();
    if k < 3 || k > n {
        return Err(KCycleError::OutOfRange { k, n });
    }
    let extra = (n as f64 / opts.t).ceil() as usize;
    let size = (k + extra).min(n);
    let mut pool: Vec<Vertex> = if opts.random_pool {
        let mut rng = rng_from_seed(derive_seed(opts.seed, "pool", 0));
        (0..n).choose_multiple(&mut rng, size)
    } else {
        (0..size).collect()
    };
    pool.sort_unstable();
    let strip = strip_nonexpanding(
        g,
        &pool,
        &StripOptions {
            size_bound: extra.max(1),
            ratio: opts.ratio.unwrap_or_else(|| default_ratio(n)),
            max_removed: size - k,
            exact_sizes: opts.strip_exact_sizes,
            budget: DEFAULT_WORK_BUDGET,
            samples: opts.strip_samples,
            seed: derive_seed(opts.seed, "strip", 0),
        },
    )?;
    let survivors = &strip.survivors;
    for attempt in 0..opts.retries {
        let mut rng = rng_from_seed(derive_seed(opts.seed, "subset", attempt as u64));
        let dense = match opts.sampling {
            Sampling::Uniform => false,
            Sampling::Dense => true,
            Sampling::Mixed => attempt >= opts.retries.div_ceil(2),
        };
        let subset = if survivors.len() == k {
            survivors.clone()
        } else if dense {
            dense_subset(g, survivors, k, &mut rng)
        } else {
            let mut s = survivors.choose_multiple(&mut rng, k).copied().collect::<Vec<_>>();
            s.sort_unstable();
            s
        };
        let h = g.induced(&subset);
        let mut hopts = opts.hamilton.clone();
        hopts.seed = derive_seed(opts.seed, "hamilton", attempt as u64);
        if let Ok(out) = find_hamilton_cycle(&h, &hopts) {
            let cycle: Vec<Vertex> = out.cycle.vertices().iter().map(|&i| subset[i]).collect();
            validate_cycle(g, &cycle, false).expect("induced cycle maps back");
            assert_eq!(cycle.len(), k);
            return Ok(KCycleOutcome {
                cycle: Cycle::from_vec_unchecked(cycle),
                strip,
                attempt,
            });
        }
    }
    Err(KCycleError::Exhausted {
        k,
        retries: opts.retries,
    })
}
