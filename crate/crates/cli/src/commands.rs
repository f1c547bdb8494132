use std::path::Path as FsPath;
use std::time::Instant;

use hamlab::applications::{
    cycle_of_length_k, fconnected_pipeline, gnp_hamilton_schedule, hamilton_path_between, ExperimentStats,
    KCycleError, KCycleOptions, PathError, TrialRecord,
};
use hamlab::closing::{find_hamilton_cycle, HamiltonOptions, SearchFailure};
use hamlab::conditions::fconn::{check_f_connected, FConnOptions, FConnSpec};
use hamlab::conditions::gnp::{check_gnp_properties, GnpPropertyParams};
use hamlab::conditions::{
    check_expansion, check_joined, check_paper_conditions, ConditionError, ConditionReport, SearchMode, Variant,
    Verdict, DEFAULT_WORK_BUDGET,
};
use hamlab::edgelist::{load_edge_list, save_edge_list};
use hamlab::generate::{generate, Family};
use hamlab::graph::{validate_path, Graph, Path};
use hamlab::pivots::{classify_pivots, process_bad_vertices, AuditOptions};
use hamlab::rng::derive_seed;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Command, Common, Format, GraphSource, Preset, RunConfig, VariantArg, Which};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// What a run prints and how it exits.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub body: String,
    /// Extra files next to `--out`.
    pub extra: Vec<(std::path::PathBuf, String)>,
}

impl Outcome {
    fn new(code: i32, body: String) -> Self {
        Outcome {
            code,
            body,
            extra: Vec::new(),
        }
    }

    fn json(code: i32, v: &Value) -> Self {
        Outcome::new(code, format!("{}\n", serde_json::to_string_pretty(v).expect("json")))
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: msg.to_string(),
    }
}

fn resource(msg: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_UNDECIDED,
        message: msg.to_string(),
    }
}

type Run = Result<Outcome, Failure>;

pub fn graph_seed(seed: u64) -> u64 {
    derive_seed(seed, "graph", 0)
}

fn load_graph(source: &GraphSource, seed: u64) -> Result<Graph, Failure> {
    if let Some(file) = &source.graph {
        let text = std::fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
        return load_edge_list(&text).map_err(|e| usage(format!("{}: {e}", file.display())));
    }
    let family = source.family().map_err(usage)?;
    generate(&family, graph_seed(seed)).map_err(usage)
}

fn search_options(c: &Common, stream: &str, index: u64) -> HamiltonOptions {
    HamiltonOptions {
        mode: c.mode.into(),
        budget: c.budget,
        seed: derive_seed(c.seed, stream, index),
        ..HamiltonOptions::default()
    }
}

fn work_budget(c: &Common) -> u64 {
    c.work_budget.unwrap_or(DEFAULT_WORK_BUDGET)
}

fn failure_json(e: &SearchFailure) -> Value {
    let mut v = e.to_json();
    v["schema"] = json!(1);
    v["found"] = json!(false);
    v
}

pub fn run(cfg: &RunConfig) -> Run {
    let c = &cfg.common;
    match &cfg.run {
        Command::Gen { source } => gen(c, source),
        Command::Check {
            source,
            which,
            s,
            d,
            preset,
            fconst,
            variant,
            sampled,
        } => {
            let g = load_graph(source, c.seed)?;
            let f = fspec(*preset, *fconst);
            check(c, &g, which, *s, *d, &f, *variant, *sampled)
        }
        Command::Hamilton { source, small_aware } => hamilton(c, &load_graph(source, c.seed)?, *small_aware),
        Command::Path { source, u, v } => path(c, &load_graph(source, c.seed)?, *u, *v),
        Command::CycleK { source, k, t, retries } => cycle_k(c, &load_graph(source, c.seed)?, *k, *t, *retries),
        Command::PivotAudit {
            source,
            path,
            max_states,
        } => pivot_audit(c, &load_graph(source, c.seed)?, path.as_deref(), *max_states),
        Command::Sweep {
            n,
            pmin,
            pmax,
            steps,
            timing,
        } => sweep(c, *n, *pmin, *pmax, *steps, *timing),
        Command::FconnPipeline { source, preset, fconst } => {
            pipeline(c, &load_graph(source, c.seed)?, &fspec(*preset, *fconst))
        }
    }
}

fn gen(c: &Common, source: &GraphSource) -> Run {
    if source.graph.is_some() {
        return Err(usage("gen takes --family, not --graph"));
    }
    let g = load_graph(source, c.seed)?;
    Ok(Outcome::new(EXIT_OK, save_edge_list(&g)))
}

fn fspec(preset: Preset, fconst: Option<f64>) -> FConnSpec {
    match (fconst, preset) {
        (Some(x), _) => FConnSpec::constant(x),
        (None, Preset::Paper) => FConnSpec::Paper,
        (None, Preset::Quadratic) => FConnSpec::Quadratic,
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Holds => EXIT_OK,
        Verdict::Fails => EXIT_NEGATIVE,
        Verdict::Indeterminate => EXIT_UNDECIDED,
    }
}

fn condition_failure(e: ConditionError) -> Run {
    match e {
        ConditionError::BudgetExceeded { work, budget } => Ok(Outcome::json(
            EXIT_UNDECIDED,
            &json!({"schema": 1, "verdict": "indeterminate", "reason": "budget", "work": work, "budget": budget}),
        )),
        other => Err(usage(other)),
    }
}

fn report_outcome(c: &Common, r: &ConditionReport) -> Outcome {
    let code = verdict_code(r.verdict);
    match c.format {
        Some(Format::Text) => {
            let mut s = format!("{}: {:?}\n", r.condition, r.verdict).to_lowercase();
            if let Some(w) = &r.witness {
                s.push_str(&format!("witness: {}\n", serde_json::to_string(w).expect("json")));
            }
            Outcome::new(code, s)
        }
        _ => Outcome::json(code, &r.to_json()),
    }
}

#[allow(clippy::too_many_arguments)]
fn check(
    c: &Common,
    g: &Graph,
    which: &Which,
    s: Option<usize>,
    d: Option<f64>,
    f: &FConnSpec,
    variant: VariantArg,
    sampled: Option<u64>,
) -> Run {
    let mode = match sampled {
        Some(samples) => SearchMode::Sampled {
            samples,
            seed: derive_seed(c.seed, "check", 0),
        },
        None => SearchMode::Exact { budget: work_budget(c) },
    };
    let need_s = || s.ok_or_else(|| usage("--s is required"));
    let need_d = || d.ok_or_else(|| usage("--d is required"));
    let report = if which.joined {
        check_joined(g, need_s()?, mode)
    } else if which.expansion {
        check_expansion(g, need_s()?, need_d()?, mode)
    } else if which.fconn {
        let opts = FConnOptions {
            budget: work_budget(c),
            ..FConnOptions::default()
        };
        check_f_connected(g, f, opts)
    } else if which.conditions {
        let v = match variant {
            VariantArg::P1P2 => Variant::P1P2,
            VariantArg::P1pP2p => Variant::P1pP2p,
        };
        check_paper_conditions(g, need_d()?, v, mode)
    } else {
        let params = GnpPropertyParams {
            mode,
            ..GnpPropertyParams::defaults(g.n())
        };
        check_gnp_properties(g, &params)
    };
    match report {
        Ok(r) => Ok(report_outcome(c, &r)),
        Err(e) => condition_failure(e),
    }
}

fn hamilton(c: &Common, g: &Graph, small_aware: bool) -> Run {
    let opts = search_options(c, "hamilton", 0);
    let result = if small_aware {
        gnp_hamilton_schedule(g, &opts, None)
    } else {
        find_hamilton_cycle(g, &opts)
    };
    match result {
        Ok(out) => match c.format {
            Some(Format::Json) => Ok(Outcome::json(
                EXIT_OK,
                &json!({"schema": 1, "found": true, "n": g.n(), "cycle": out.cycle.vertices(),
                        "stats": out.stats, "mode": out.mode}),
            )),
            _ => Ok(Outcome::new(EXIT_OK, format!("{}\n", out.cycle.to_line()))),
        },
        Err(e) => Ok(Outcome::json(EXIT_NEGATIVE, &failure_json(&e))),
    }
}

fn line(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn path(c: &Common, g: &Graph, u: usize, v: usize) -> Run {
    match hamilton_path_between(g, u, v, &search_options(c, "path", 0)) {
        Ok(out) => match c.format {
            Some(Format::Json) => Ok(Outcome::json(
                EXIT_OK,
                &json!({"schema": 1, "found": true, "path": out.path.vertices(), "stats": out.stats,
                        "broken": out.broken}),
            )),
            _ => Ok(Outcome::new(EXIT_OK, format!("{}\n", line(out.path.vertices())))),
        },
        Err(PathError::Search(e)) => Ok(Outcome::json(EXIT_NEGATIVE, &failure_json(&e))),
        Err(e) => Err(usage(e)),
    }
}

fn cycle_k(c: &Common, g: &Graph, k: usize, t: f64, retries: usize) -> Run {
    if !(t > 0.0) {
        return Err(usage("--t must be positive"));
    }
    let opts = KCycleOptions {
        t,
        seed: derive_seed(c.seed, "cycle-k", 0),
        retries,
        hamilton: search_options(c, "cycle-k", 0),
        ..KCycleOptions::default()
    };
    match cycle_of_length_k(g, k, &opts) {
        Ok(out) => match c.format {
            Some(Format::Json) => Ok(Outcome::json(
                EXIT_OK,
                &json!({"schema": 1, "found": true, "k": k, "cycle": out.cycle.vertices(),
                        "attempt": out.attempt, "strip": out.strip}),
            )),
            _ => Ok(Outcome::new(EXIT_OK, format!("{}\n", out.cycle.to_line()))),
        },
        Err(e @ KCycleError::Exhausted { .. }) => Ok(Outcome::json(
            EXIT_NEGATIVE,
            &json!({"schema": 1, "found": false, "k": k, "reason": e.to_string()}),
        )),
        Err(KCycleError::Strip(e)) => condition_failure(e),
        Err(e) => Err(usage(e)),
    }
}

/// `0 1 … n-1` if that is a spanning path, else a Hamilton cycle opened up.
fn default_path(c: &Common, g: &Graph) -> Result<Vec<usize>, Failure> {
    let id: Vec<usize> = (0..g.n()).collect();
    if validate_path(g, &id, true).is_ok() {
        return Ok(id);
    }
    find_hamilton_cycle(g, &search_options(c, "pivot-audit", 0))
        .map(|out| out.cycle.vertices().to_vec())
        .map_err(|e| usage(format!("no spanning path given and none found: {e}")))
}

fn pivot_audit(c: &Common, g: &Graph, path: Option<&[usize]>, max_states: usize) -> Run {
    let vertices = match path {
        Some(p) => p.to_vec(),
        None => default_path(c, g)?,
    };
    let p = Path::new(g, vertices).map_err(usage)?;
    let opts = AuditOptions {
        max_states,
        ..AuditOptions::default()
    };
    let audit = classify_pivots(g, &p, &opts).map_err(usage)?;
    let cert = process_bad_vertices(g, &p, &audit).map_err(resource)?;
    let mut body = audit.to_json(&cert);
    body["path"] = json!(p.vertices());
    body["certificate_valid"] = json!(cert.check(g, &p).is_ok());
    Ok(Outcome::json(EXIT_OK, &body))
}

pub fn p_grid(pmin: f64, pmax: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![pmin];
    }
    (0..steps)
        .map(|i| pmin + (pmax - pmin) * i as f64 / (steps - 1) as f64)
        .collect()
}

fn sweep(c: &Common, n: usize, pmin: f64, pmax: f64, steps: usize, timing: bool) -> Run {
    if steps == 0 || c.trials == 0 {
        return Err(usage("the grid needs at least one step and one trial"));
    }
    if !(0.0 <= pmin && pmin <= pmax && pmax <= 1.0) {
        return Err(usage("need 0 <= pmin <= pmax <= 1"));
    }
    let grid = p_grid(pmin, pmax, steps);
    let jobs: Vec<(usize, f64)> = grid
        .iter()
        .flat_map(|&p| std::iter::repeat(p).take(c.trials))
        .enumerate()
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(c.jobs.max(1))
        .build()
        .map_err(resource)?;
    let records: Vec<TrialRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(trial, p)| {
                let seed = derive_seed(c.seed, "sweep", trial as u64);
                let start = Instant::now();
                let g = generate(&Family::Gnp { n, p }, graph_seed(seed)).expect("valid probability");
                let mut opts = search_options(c, "sweep", trial as u64);
                opts.seed = derive_seed(seed, "search", 0);
                let res = gnp_hamilton_schedule(&g, &opts, None);
                let (success, rotations) = match &res {
                    Ok(out) => (true, out.stats.rotations),
                    Err(e) => (false, e.stats.rotations),
                };
                TrialRecord {
                    trial,
                    seed,
                    n,
                    p,
                    success,
                    rotations,
                    ms: if timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 },
                }
            })
            .collect()
    });
    let stats = ExperimentStats::new(records);
    let csv = stats.to_csv().map_err(resource)?;
    let aggregate = format!("{}\n", serde_json::to_string_pretty(&stats.aggregate_json()).expect("json"));
    match (&c.out, c.format) {
        (Some(out), _) => {
            let mut o = Outcome::new(EXIT_OK, csv);
            o.extra.push((aggregate_path(out), aggregate));
            Ok(o)
        }
        (None, Some(Format::Json)) => Ok(Outcome::new(EXIT_OK, aggregate)),
        (None, _) => Ok(Outcome::new(EXIT_OK, csv)),
    }
}

/// `runs.csv` gets its aggregate in `runs.aggregate.json`.
pub fn aggregate_path(out: &FsPath) -> std::path::PathBuf {
    out.with_extension("aggregate.json")
}

fn pipeline(c: &Common, g: &Graph, f: &FConnSpec) -> Run {
    let fconn = FConnOptions {
        budget: work_budget(c),
        ..FConnOptions::default()
    };
    match fconnected_pipeline(g, f, None, fconn, &search_options(c, "fconn-pipeline", 0)) {
        Ok(r) => {
            let code = if r.search.is_ok() { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Outcome::json(code, &r.to_json()))
        }
        Err(ConditionError::InvalidParameter(m)) => Err(resource(m)),
        Err(e) => condition_failure(e),
    }
}
