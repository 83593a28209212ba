use std::collections::BTreeMap;
use std::fmt::Write as _;

use braid_regions::ArrangementSpec;
use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SpecSummary {
    pub n: usize,
    pub m: usize,
    pub hyperplanes: usize,
    pub families: Vec<String>,
}

impl SpecSummary {
    pub fn of(spec: &ArrangementSpec) -> Self {
        Self {
            n: spec.n(),
            m: spec.max_offset(),
            hyperplanes: spec.hyperplane_count(),
            families: spec
                .classify_family()
                .iter()
                .map(ToString::to_string)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct TreeStats {
    pub total: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonzero: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<BTreeMap<String, u64>>,
}

/// Outcome of one `count` or `bench` run. Counts are decimal strings.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub spec: SpecSummary,
    pub methods: Vec<String>,
    pub counts: BTreeMap<String, String>,
    pub agreement: bool,
    pub timing_ms: BTreeMap<String, f64>,
    pub trees: TreeStats,
}

impl RunReport {
    pub fn new(spec: &ArrangementSpec, methods: Vec<String>) -> Self {
        Self {
            spec: SpecSummary::of(spec),
            methods,
            counts: BTreeMap::new(),
            agreement: true,
            timing_ms: BTreeMap::new(),
            trees: TreeStats::default(),
        }
    }

    pub fn settle_agreement(&mut self) {
        let mut values = self.counts.values();
        let first = values.next();
        self.agreement = values.all(|v| Some(v) == first);
    }

    pub fn key_values(&self) -> String {
        let mut out = String::new();
        let s = &self.spec;
        let _ = writeln!(out, "spec.n={}", s.n);
        let _ = writeln!(out, "spec.m={}", s.m);
        let _ = writeln!(out, "spec.hyperplanes={}", s.hyperplanes);
        let _ = writeln!(out, "spec.families={}", s.families.join(","));
        let _ = writeln!(out, "methods={}", self.methods.join(","));
        for m in &self.methods {
            if let Some(c) = self.counts.get(m) {
                let _ = writeln!(out, "count.{m}={c}");
            }
        }
        let _ = writeln!(out, "agreement={}", self.agreement);
        for m in &self.methods {
            if let Some(t) = self.timing_ms.get(m) {
                let _ = writeln!(out, "time_ms.{m}={t:.3}");
            }
        }
        let _ = writeln!(out, "trees.total={}", self.trees.total);
        if let Some(nz) = &self.trees.nonzero {
            let _ = writeln!(out, "trees.nonzero={nz}");
        }
        for (class, v) in self.trees.classes.iter().flatten() {
            let _ = writeln!(out, "class.{class}={v}");
        }
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Median of a non-empty sample.
pub fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let k = samples.len();
    if k % 2 == 1 {
        samples[k / 2]
    } else {
        (samples[k / 2 - 1] + samples[k / 2]) / 2.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub method: String,
    pub count: String,
    pub runs: usize,
    pub median_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub spec: SpecSummary,
    pub rows: Vec<BenchRow>,
    pub agreement: bool,
}

impl BenchReport {
    pub fn row(&self, method: &str) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.method == method)
    }

    pub fn table(&self) -> String {
        let mut out = String::from("method\tcount\truns\tmedian_ms\tmin_ms\tmax_ms\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{:.3}\t{:.3}\t{:.3}",
                r.method, r.count, r.runs, r.median_ms, r.min_ms, r.max_ms
            );
        }
        let _ = writeln!(out, "agreement={}", self.agreement);
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medians() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn agreement_flag() {
        let spec = ArrangementSpec::braid(2).unwrap();
        let mut r = RunReport::new(&spec, vec!["fast".into(), "oracle".into()]);
        r.counts.insert("fast".into(), "2".into());
        r.counts.insert("oracle".into(), "2".into());
        r.settle_agreement();
        assert!(r.agreement);
        r.counts.insert("oracle".into(), "3".into());
        r.settle_agreement();
        assert!(!r.agreement);
        assert!(r.key_values().contains("agreement=false\n"));
    }
}
