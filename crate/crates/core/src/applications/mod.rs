//! Procedures built on the Hamilton search: paths between chosen ends,
//! cycles of a given length, the random-graph schedule, the f-connectivity
//! pipeline, an exact oracle for small graphs and trial bookkeeping.

mod gnp;
mod kcycle;
mod oracle;
mod paths;
mod pipeline;
mod stats;

pub use gnp::{gnp_hamilton_schedule, small_aware_options};
pub use kcycle::{
    cycle_of_length_k, default_ratio, strip_nonexpanding, KCycleError, KCycleOptions, KCycleOutcome, Sampling,
    StripOptions, StripResult, StripStep,
};
pub use oracle::{hamilton_path_oracle, hamiltonian_oracle, is_hamilton_connected, OracleError, ORACLE_MAX_N};
pub use paths::{hamilton_cycle_through_edge, hamilton_path_between, PathError, PathOutcome};
pub use pipeline::{fconnected_pipeline, PipelineReport};
pub use stats::{wilson_interval, ExperimentStats, PointSummary, TrialRecord};
