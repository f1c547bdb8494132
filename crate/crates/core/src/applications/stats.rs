//! Per-trial records of a sweep and their per-point aggregates.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// z for a two-sided 95% interval.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub p: f64,
    pub success: bool,
    pub rotations: u64,
    pub ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_rotations: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentStats {
    pub records: Vec<TrialRecord>,
}

/// Wilson score interval for `successes` out of `trials` at 95%.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

impl ExperimentStats {
    pub fn new(records: Vec<TrialRecord>) -> Self {
        ExperimentStats { records }
    }

    /// One summary per `(n, p)`, in order of first appearance.
    pub fn summaries(&self) -> Vec<PointSummary> {
        let mut keys: Vec<(usize, u64)> = Vec::new();
        for r in &self.records {
            let k = (r.n, r.p.to_bits());
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
        keys.into_iter()
            .map(|(n, pb)| {
                let rows: Vec<&TrialRecord> = self.records.iter().filter(|r| r.n == n && r.p.to_bits() == pb).collect();
                let successes = rows.iter().filter(|r| r.success).count();
                let (ci_low, ci_high) = wilson_interval(successes, rows.len());
                PointSummary {
                    n,
                    p: f64::from_bits(pb),
                    trials: rows.len(),
                    successes,
                    rate: successes as f64 / rows.len() as f64,
                    ci_low,
                    ci_high,
                    mean_rotations: rows.iter().map(|r| r.rotations as f64).sum::<f64>() / rows.len() as f64,
                }
            })
            .collect()
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn from_csv(text: &str) -> Result<Self, csv::Error> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let records = r.deserialize().collect::<Result<Vec<TrialRecord>, _>>()?;
        Ok(ExperimentStats { records })
    }

    pub fn aggregate_json(&self) -> Value {
        json!({
            "schema": 1,
            "trials": self.records.len(),
            "points": self.summaries(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(trial: usize, p: f64, success: bool) -> TrialRecord {
        TrialRecord {
            trial,
            seed: trial as u64 * 7,
            n: 100,
            p,
            success,
            rotations: trial as u64,
            ms: 0.25,
        }
    }

    #[test]
    fn wilson_reference_values() {
        // 8 of 10: centre 0.7167, half-width 0.2063
        let (lo, hi) = wilson_interval(8, 10);
        assert!((lo - 0.4902).abs() < 1e-4 && (hi - 0.9433).abs() < 1e-4, "{lo} {hi}");
        assert_eq!(wilson_interval(0, 0), (0.0, 1.0));
        let (lo, hi) = wilson_interval(0, 50);
        assert_eq!(lo, 0.0);
        assert!(hi < 0.08);
    }

    #[test]
    fn aggregates_survive_a_csv_round_trip() {
        let s = ExperimentStats::new(vec![rec(0, 0.1, true), rec(1, 0.1, false), rec(2, 0.2, true)]);
        let csv = s.to_csv().unwrap();
        assert!(csv.starts_with("trial,seed,n,p,success,rotations,ms\n"));
        let back = ExperimentStats::from_csv(&csv).unwrap();
        assert_eq!(back, s);
        let sums = back.summaries();
        assert_eq!(sums.len(), 2);
        assert_eq!((sums[0].trials, sums[0].successes), (2, 1));
        assert_eq!(sums[1].rate, 1.0);
        assert_eq!(back.aggregate_json()["points"][0]["successes"], json!(1));
    }
}
