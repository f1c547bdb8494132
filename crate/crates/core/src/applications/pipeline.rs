//! f-connectivity check followed by a Hamilton search.

use serde_json::{json, Value};

use crate::closing::{find_hamilton_cycle, HamiltonOptions, HamiltonOutcome, SearchFailure};
use crate::conditions::fconn::{fconn_implies_conditions, FConnOptions, FConnSpec, ImplicationSizes};
use crate::conditions::{ConditionError, ConditionReport, Verdict};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub conditions: ConditionReport,
    /// The f-connectivity premise and both implications hold.
    pub certified: bool,
    pub search: Result<HamiltonOutcome, SearchFailure>,
}

impl PipelineReport {
    /// The hypothesis that did not hold, if any.
    pub fn failed_hypothesis(&self) -> Option<String> {
        if self.certified {
            return None;
        }
        let premise = self.conditions.part("f_connected");
        if premise.is_some_and(|p| p.verdict != Verdict::Holds) {
            return Some("f_connected".into());
        }
        self.conditions
            .parts
            .iter()
            .find(|p| p.verdict != Verdict::Holds)
            .map(|p| p.condition.clone())
    }

    pub fn to_json(&self) -> Value {
        let search = match &self.search {
            Ok(out) => json!({"found": true, "cycle": out.cycle.vertices(), "stats": out.stats}),
            Err(e) => json!({"found": false, "failure": e.to_json()}),
        };
        json!({
            "schema": 1,
            "certified": self.certified,
            "failed_hypothesis": self.failed_hypothesis(),
            "conditions": self.conditions.to_json(),
            "search": search,
        })
    }
}

/// Runs [`fconn_implies_conditions`], then [`find_hamilton_cycle`] whatever
/// the verdict.
pub fn fconnected_pipeline(
    g: &Graph,
    f: &FConnSpec,
    sizes: Option<ImplicationSizes>,
    fconn: FConnOptions,
    search: &HamiltonOptions,
) -> Result<PipelineReport, ConditionError> {
    let conditions = fconn_implies_conditions(g, f, sizes, fconn)?;
    let certified = conditions.verdict == Verdict::Holds;
    Ok(PipelineReport {
        conditions,
        certified,
        search: find_hamilton_cycle(g, search),
    })
}
