//! Command-line surface. Every parsed invocation is a [`RunConfig`], which
//! round-trips through JSON so a saved config replays the same run.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hamlab::generate::Family;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "hamlab", version, about = "Rotation-based Hamilton cycle search and expansion checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub common: Common,
    /// Run the config stored in this file instead of the command line.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Print the resolved config as JSON and exit.
    #[arg(long, global = true)]
    pub emit_config: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Common {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    /// Rotation budget of the Hamilton search. Accepts `1000000`, `1e6` or `10^6`.
    #[arg(long, global = true, value_parser = parse_count, default_value = "1000000")]
    pub budget: u64,
    /// Node budget of exact subset enumeration.
    #[arg(long, global = true, env = "HAMLAB_WORK_BUDGET", value_parser = parse_count)]
    pub work_budget: Option<u64>,
    #[arg(long, global = true, default_value_t = 1)]
    pub trials: usize,
    /// Worker threads for independent trials.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ModeArg {
    ProofFaithful,
    Heuristic,
    Auto,
}

impl From<ModeArg> for hamlab::closing::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::ProofFaithful => hamlab::closing::Mode::ProofFaithful,
            ModeArg::Heuristic => hamlab::closing::Mode::Heuristic,
            ModeArg::Auto => hamlab::closing::Mode::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum FamilyName {
    Complete,
    CompleteBipartite,
    Cycle,
    Path,
    Gnp,
    RandomRegular,
    CliquePlusIsolated,
    Petersen,
}

/// Where the input graph comes from: an edge-list file or a generated family.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GraphSource {
    #[arg(long, value_name = "FILE", conflicts_with = "family")]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Degree of a random regular graph.
    #[arg(long = "degree")]
    pub degree: Option<usize>,
    /// Side sizes of a complete bipartite graph.
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub clique: Option<usize>,
    #[arg(long)]
    pub isolated: Option<usize>,
}

impl GraphSource {
    pub fn family(&self) -> Result<Family, String> {
        let need = |v: Option<usize>, name: &str| v.ok_or_else(|| format!("--{name} is required for this family"));
        let name = self.family.ok_or("give --graph FILE or --family NAME")?;
        Ok(match name {
            FamilyName::Complete => Family::Complete { n: need(self.n, "n")? },
            FamilyName::CompleteBipartite => Family::CompleteBipartite {
                a: need(self.a, "a")?,
                b: need(self.b, "b")?,
            },
            FamilyName::Cycle => Family::Cycle { n: need(self.n, "n")? },
            FamilyName::Path => Family::Path { n: need(self.n, "n")? },
            FamilyName::Gnp => Family::Gnp {
                n: need(self.n, "n")?,
                p: self.p.ok_or("--p is required for gnp")?,
            },
            FamilyName::RandomRegular => Family::RandomRegular {
                n: need(self.n, "n")?,
                d: need(self.degree, "degree")?,
            },
            FamilyName::CliquePlusIsolated => Family::CliquePlusIsolated {
                clique: need(self.clique, "clique")?,
                isolated: need(self.isolated, "isolated")?,
            },
            FamilyName::Petersen => Family::Petersen,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// `12 e¹² + k ln k`.
    Paper,
    /// `2 (k + 1)²`.
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum VariantArg {
    P1P2,
    P1pP2p,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[group(required = true, multiple = false, id = "which")]
pub struct Which {
    /// Disjoint sets of size `s` are joined by an edge.
    #[arg(long)]
    pub joined: bool,
    /// Sets of size at most `s` satisfy `|N(A)| >= d |A|`.
    #[arg(long)]
    pub expansion: bool,
    /// f-connectivity by separator enumeration.
    #[arg(long)]
    pub fconn: bool,
    /// Expansion and joinedness at thresholds computed from `n` and `d`.
    #[arg(long)]
    pub conditions: bool,
    /// The degree, distance and weak-expansion properties of random graphs.
    #[arg(long)]
    pub gnp: bool,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Generate a graph and write it as an edge list.
    Gen {
        #[command(flatten)]
        source: GraphSource,
    },
    /// Check an expansion-type condition. Exit 0 holds, 1 fails, 2 undecided.
    Check {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        which: Which,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long, value_enum, default_value_t = Preset::Paper)]
        preset: Preset,
        /// Use `f ≡ c` instead of a preset.
        #[arg(long)]
        fconst: Option<f64>,
        #[arg(long, value_enum, default_value_t = VariantArg::P1P2)]
        variant: VariantArg,
        /// Refute by this many random sets instead of exact search.
        #[arg(long)]
        sampled: Option<u64>,
    },
    /// Search for a Hamilton cycle.
    Hamilton {
        #[command(flatten)]
        source: GraphSource,
        /// Use endpoint families that avoid low-degree vertices.
        #[arg(long)]
        small_aware: bool,
    },
    /// Search for a Hamilton path between two vertices.
    Path {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
    },
    /// Search for a cycle of exactly `k` vertices.
    CycleK {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10.0)]
        t: f64,
        #[arg(long, default_value_t = 20)]
        retries: usize,
    },
    /// Classify the inner vertices of a spanning path as good or bad pivots.
    PivotAudit {
        #[command(flatten)]
        source: GraphSource,
        /// Spanning path as space-separated ids. Defaults to `0 1 … n-1` when
        /// that is a path, else to a Hamilton path found by search.
        #[arg(long, value_delimiter = ' ', num_args = 1..)]
        path: Option<Vec<usize>>,
        #[arg(long, default_value_t = 200_000)]
        max_states: usize,
    },
    /// Hamilton search success over a grid of edge probabilities.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pmin: f64,
        #[arg(long)]
        pmax: f64,
        #[arg(long, default_value_t = 5)]
        steps: usize,
        /// Record wall time per trial. Off by default so reruns are identical.
        #[arg(long)]
        timing: bool,
    },
    /// f-connectivity and its consequences, then a Hamilton search.
    FconnPipeline {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_enum, default_value_t = Preset::Paper)]
        preset: Preset,
        #[arg(long)]
        fconst: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema: u32,
    #[serde(flatten)]
    pub common: Common,
    pub run: Command,
}

/// `1000`, `1_000`, `1e6` and `10^6` all parse.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.replace('_', "");
    if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.parse().map_err(|_| format!("bad base in {s:?}"))?;
        let exp: u32 = exp.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
        return base.checked_pow(exp).ok_or_else(|| format!("{s} overflows"));
    }
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(f) if f >= 0.0 && f.fract() == 0.0 && f <= u64::MAX as f64 => Ok(f as u64),
        _ => Err(format!("not a count: {s:?}")),
    }
}
