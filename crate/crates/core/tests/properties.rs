use std::collections::BTreeSet;

use hamlab::applications::{
    cycle_of_length_k, hamilton_path_between, hamiltonian_oracle, strip_nonexpanding, KCycleOptions, StripOptions,
};
use hamlab::closing::{
    decompose, find_hamilton_cycle, unbroken_segments, HamiltonOptions, Mode,
};
use hamlab::conditions::{check_expansion, check_joined, unjoined, SearchMode, Verdict, Witness};
use hamlab::edgelist::{load_edge_list, save_edge_list};
use hamlab::generate::{generate, Family};
use hamlab::graph::{ordered, validate_cycle, validate_path, Graph, Path, Vertex};
use hamlab::rotation::{
    double_rotation_targets, endpoint_closure_oracle, endpoint_family, extend, reconstruct_path, rotate,
    small_aware_family, ClosureOptions, DoubleRotationParams, EndpointSource, Schedule, SmallAwareParams,
};
use proptest::prelude::*;

fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    generate(&Family::Gnp { n, p }, seed).unwrap()
}

fn exact() -> SearchMode {
    SearchMode::Exact { budget: 10_000_000 }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn neighborhoods_exclude_the_set(n in 1usize..30, p in 0.0f64..1.0, seed: u64, mask: u32) {
        let g = gnp(n, p, seed);
        let set: Vec<Vertex> = (0..n).filter(|&v| mask >> (v % 32) & 1 == 1).collect();
        let nb = g.neighborhood(&set).unwrap();
        prop_assert!(nb.iter().all(|v| !set.contains(v)));
        prop_assert!(g.neighborhood(&[]).unwrap().is_empty());
    }

    #[test]
    fn regular_graphs_are_regular(half in 3usize..40, d in 1usize..6, seed: u64) {
        let n = 2 * half;
        let g = generate(&Family::RandomRegular { n, d }, seed).unwrap();
        prop_assert!((0..n).all(|v| g.degree(v) == d));
    }

    #[test]
    fn edge_lists_round_trip(n in 0usize..200, p in 0.0f64..0.2, seed: u64) {
        let g = gnp(n, p, seed);
        let text = save_edge_list(&g);
        let back = load_edge_list(&text).unwrap();
        prop_assert_eq!(save_edge_list(&back), text);
        prop_assert_eq!(back, g);
    }

    #[test]
    fn joined_is_monotone(n in 4usize..9, p in 0.1f64..0.9, seed: u64, s in 1usize..4, extra in 0usize..40) {
        let g = gnp(n, p, seed);
        let s = s.min(n / 2);
        let base = check_joined(&g, s, exact()).unwrap().verdict;
        if base == Verdict::Holds {
            for s2 in s..=n / 2 {
                prop_assert_eq!(check_joined(&g, s2, exact()).unwrap().verdict, Verdict::Holds);
            }
            // adding an edge keeps it
            let (u, v) = (extra % n, (extra / n + 1 + extra % n) % n);
            if u != v && !g.has_edge(u, v) {
                let h = g.with_edge(u, v).unwrap();
                prop_assert_eq!(check_joined(&h, s, exact()).unwrap().verdict, Verdict::Holds);
            }
        } else if let Some(Witness::DisjointPair { a, b }) = check_joined(&g, s, exact()).unwrap().witness {
            prop_assert!(unjoined(&g, &a, &b));
            prop_assert!(a.len() == s && b.len() == s);
        }
    }

    #[test]
    fn expansion_is_monotone_in_d(n in 4usize..9, p in 0.1f64..0.9, seed: u64, s in 1usize..4, d in 0.5f64..4.0) {
        let g = gnp(n, p, seed);
        let r = check_expansion(&g, s.min(n), d, exact()).unwrap();
        if r.verdict == Verdict::Holds {
            for d2 in [0.0, d / 2.0, d * 0.9] {
                prop_assert_eq!(check_expansion(&g, s.min(n), d2, exact()).unwrap().verdict, Verdict::Holds);
            }
        } else if let Some(Witness::Set { set, neighborhood }) = r.witness {
            prop_assert_eq!(&g.neighborhood(&set).unwrap(), &neighborhood);
            prop_assert!((neighborhood.len() as f64) < d * set.len() as f64);
        }
    }

    #[test]
    fn rotations_preserve_the_path(n in 3usize..60, p in 0.05f64..0.6, seed: u64, picks in prop::collection::vec(any::<prop::sample::Index>(), 1..20)) {
        let g = gnp(n, p, seed);
        let mut cur = extend(&g, Path::single(n, 0));
        let before: BTreeSet<Vertex> = cur.vertices().iter().copied().collect();
        for pick in picks {
            let last = cur.last();
            let spots: Vec<usize> = g.neighbors(last).iter().filter_map(|&z| cur.position(z)).filter(|&j| j + 2 < cur.len()).collect();
            if spots.is_empty() {
                break;
            }
            let j = spots[pick.index(spots.len())];
            let (next, step) = rotate(&g, &cur, j).unwrap();
            prop_assert_eq!(next.len(), cur.len());
            prop_assert_eq!(next.first(), cur.first());
            prop_assert_eq!(validate_path(&g, next.vertices(), false), Ok(()));
            prop_assert!(cur.has_edge(step.broken.0, step.broken.1));
            let (back, _) = rotate(&g, &next, j).unwrap();
            prop_assert_eq!(back.vertices(), cur.vertices());
            cur = next;
        }
        let after: BTreeSet<Vertex> = cur.vertices().iter().copied().collect();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn family_layers_lie_in_the_closure(n in 3usize..=10, p in 0.2f64..0.9, seed: u64) {
        let g = gnp(n, p, seed);
        let p0 = extend(&g, Path::single(n, 0));
        let f = endpoint_family(&g, &p0, &Schedule::unbounded(n));
        let c = endpoint_closure_oracle(&g, &p0, p0.first(), &ClosureOptions::new(1_000_000)).unwrap();
        prop_assert!(c.complete);
        let base_edges: BTreeSet<(Vertex, Vertex)> = p0.edges().collect();
        for v in f.endpoints() {
            prop_assert!(c.contains(v));
            let q = reconstruct_path(&g, &f, v).unwrap();
            prop_assert_eq!(q.len(), p0.len());
            prop_assert_eq!(q.last(), v);
            prop_assert_eq!(validate_path(&g, q.vertices(), false), Ok(()));
        }
        for e in f.broken_edges() {
            prop_assert!(base_edges.contains(&e));
        }
    }

    #[test]
    fn records_count_rotations(n in 8usize..40, p in 0.15f64..0.6, seed: u64, tau in 1usize..4) {
        let g = gnp(n, p, seed);
        let p0 = extend(&g, Path::single(n, 0));
        prop_assume!(p0.len() >= 4);
        let params = DoubleRotationParams {
            source: EndpointSource::Family { schedule: Schedule::unbounded(n) },
            cap: 6,
            b_cap: 12,
            protected: Vec::new(),
        };
        let dr = double_rotation_targets(&g, &p0, &params);
        let rho = dr.rho.clamp(1, p0.len() / 2);
        let d = decompose(&p0, rho).unwrap();
        for pair in &dr.pairs {
            let path = Path::new(&g, pair.path.clone()).unwrap();
            let r = unbroken_segments(&d, &p0, &path, pair.rotations);
            prop_assert_eq!(r.broken.len(), pair.rotations);
            prop_assert!(r.unbroken.len() + pair.rotations >= 2 * rho);
            let seqs = r.sequences(tau);
            prop_assert_eq!(seqs.len(), binomial(r.unbroken.len(), tau));
            prop_assert!(seqs.iter().all(|s| r.contains(s)));
        }
    }

    #[test]
    fn returned_cycles_are_hamiltonian(n in 3usize..14, p in 0.2f64..1.0, seed: u64, mode in prop_oneof![Just(Mode::Heuristic), Just(Mode::ProofFaithful), Just(Mode::Auto)]) {
        let g = gnp(n, p, seed);
        let opts = HamiltonOptions { mode, budget: 20_000, seed, ..HamiltonOptions::default() };
        if let Ok(out) = find_hamilton_cycle(&g, &opts) {
            prop_assert_eq!(validate_cycle(&g, out.cycle.vertices(), true), Ok(()));
        }
    }

    #[test]
    fn paths_close_through_the_protected_edge(n in 4usize..12, p in 0.5f64..1.0, seed: u64, u in 0usize..12, v in 0usize..12) {
        let g = gnp(n, p, seed);
        let (u, v) = (u % n, v % n);
        prop_assume!(u != v);
        let opts = HamiltonOptions { budget: 20_000, seed, ..HamiltonOptions::default() };
        if let Ok(out) = hamilton_path_between(&g, u, v, &opts) {
            let guv = if g.has_edge(u, v) { g.clone() } else { g.with_edge(u, v).unwrap() };
            prop_assert_eq!(validate_cycle(&guv, out.path.vertices(), true), Ok(()));
            prop_assert_eq!((out.path.first(), out.path.last()), (u, v));
            prop_assert!(!out.broken.contains(&ordered(u, v)));
        }
    }

    #[test]
    fn k_cycles_have_k_vertices(n in 5usize..25, p in 0.3f64..1.0, seed: u64, k in 3usize..25) {
        let g = gnp(n, p, seed);
        let k = 3 + k % (n - 2);
        let opts = KCycleOptions { seed, retries: 4, ..KCycleOptions::default() };
        if let Ok(out) = cycle_of_length_k(&g, k, &opts) {
            prop_assert_eq!(out.cycle.len(), k);
            prop_assert_eq!(validate_cycle(&g, out.cycle.vertices(), false), Ok(()));
        }
    }

    #[test]
    fn certified_strips_leave_no_violator(n in 4usize..12, p in 0.1f64..0.8, seed: u64, bound in 1usize..4, ratio in 0.5f64..3.0) {
        let g = gnp(n, p, seed);
        let all: Vec<Vertex> = (0..n).collect();
        let r = strip_nonexpanding(&g, &all, &StripOptions::exact(bound, ratio)).unwrap();
        prop_assert!(r.certified);
        let mut removed = 0;
        for step in &r.trace {
            prop_assert!(!step.removed.is_empty() && step.removed.len() <= bound);
            removed += step.removed.len();
        }
        prop_assert_eq!(removed, r.removed.len());
        // independent pass over every subset of the survivors
        let u = &r.survivors;
        let h = g.induced(u);
        for mask in 1u32..1 << u.len() {
            if mask.count_ones() as usize > bound {
                continue;
            }
            let a: Vec<Vertex> = (0..u.len()).filter(|&i| mask >> i & 1 == 1).collect();
            let nb = h.neighborhood(&a).unwrap();
            prop_assert!(nb.len() as f64 >= ratio * a.len() as f64, "survivor set {:?} violates", a);
        }
    }

    #[test]
    fn small_aware_layers_avoid_small_vertices(n in 30usize..90, p in 0.04f64..0.12, seed: u64) {
        let g = gnp(n, p, seed);
        let p0 = extend(&g, Path::single(n, 0));
        let params = SmallAwareParams { small_threshold: 3.0, ..SmallAwareParams::defaults(n) };
        let f = small_aware_family(&g, &p0, &params, &[]);
        for v in f.family.layers.iter().skip(1).flatten() {
            prop_assert!(g.degree(*v) > 3);
        }
        for v in f.family.endpoints() {
            let q = reconstruct_path(&g, &f.family, v).unwrap();
            prop_assert_eq!(validate_path(&g, q.vertices(), false), Ok(()));
        }
    }
}

/// Tries all orderings starting at 0.
fn permutation_search(g: &Graph) -> bool {
    fn go(g: &Graph, path: &mut Vec<Vertex>, used: &mut [bool]) -> bool {
        let n = g.n();
        if path.len() == n {
            return g.has_edge(path[n - 1], path[0]);
        }
        for v in 0..n {
            if !used[v] && g.has_edge(*path.last().unwrap(), v) {
                used[v] = true;
                path.push(v);
                if go(g, path, used) {
                    return true;
                }
                path.pop();
                used[v] = false;
            }
        }
        false
    }
    let n = g.n();
    if n < 3 {
        return false;
    }
    let mut used = vec![false; n];
    used[0] = true;
    go(g, &mut vec![0], &mut used)
}

#[test]
fn oracle_agrees_with_permutation_search() {
    let mut positive = 0;
    for i in 0..300u64 {
        let n = 3 + (i % 6) as usize;
        let p = 0.2 + 0.7 * ((i / 6) % 10) as f64 / 10.0;
        let g = gnp(n, p, i);
        let oracle = hamiltonian_oracle(&g).unwrap();
        assert_eq!(oracle.is_some(), permutation_search(&g), "instance {i}");
        if let Some(c) = oracle {
            assert_eq!(validate_cycle(&g, c.vertices(), true), Ok(()));
            positive += 1;
        }
    }
    assert!(positive > 50 && positive < 250);
}
