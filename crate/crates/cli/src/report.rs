use std::collections::BTreeMap;

use ddbar::cohomology::CohomologyTable;
use ddbar::criteria::CriteriaReport;
use ddbar::metrics::{BalancedSearch, MetricReport};
use ddbar::{Scalar, ValidationReport};
use serde::{Deserialize, Serialize};

use crate::expect::ExpectationOutcome;

type EntryField = fn(&ddbar::cohomology::HodgeEntry) -> usize;

/// One machine-readable result. Every field is always present (as `null`
/// when not computed) so the key set is stable across commands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    pub input: String,
    pub digest: String,
    pub params: BTreeMap<String, Scalar>,
    /// Index within a sweep.
    pub sample: Option<usize>,
    pub validation: Option<ValidationReport>,
    pub table: Option<CohomologyTable>,
    pub criteria: Option<CriteriaReport>,
    pub metric: Option<MetricReport>,
    pub search: Option<BalancedSearch>,
    pub expectations: Vec<ExpectationOutcome>,
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
    pub timing_ms: Option<u64>,
}

impl ReportDocument {
    pub fn new(command: &str, input: &str, digest: &str, params: BTreeMap<String, Scalar>) -> Self {
        ReportDocument {
            command: command.into(),
            input: input.into(),
            digest: digest.into(),
            params,
            sample: None,
            validation: None,
            table: None,
            criteria: None,
            metric: None,
            search: None,
            expectations: Vec::new(),
            errors: Vec::new(),
            warnings: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn expectations_pass(&self) -> bool {
        self.expectations.iter().all(|e| e.pass)
    }

    pub fn inconsistent(&self) -> bool {
        self.criteria.as_ref().is_some_and(CriteriaReport::inconsistent)
    }
}

/// A cohomology number that is not constant along a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Jump {
    pub p: usize,
    pub q: usize,
    /// `dolbeault`, `del`, `bott_chern` or `aeppli`.
    pub cohomology: String,
    /// Per sample; `None` where the sample failed.
    pub values: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flip {
    pub criterion: String,
    pub values: Vec<Option<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub parameter: String,
    pub samples: Vec<Scalar>,
    pub jumps: Vec<Jump>,
    pub flips: Vec<Flip>,
    /// Indices of samples that produced errors.
    pub failed: Vec<usize>,
}

/// Final line of a sweep's NDJSON stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryLine {
    pub summary: SweepSummary,
}

fn varies<T: PartialEq>(values: &[Option<T>]) -> bool {
    let mut present = values.iter().flatten();
    match present.next() {
        Some(first) => present.any(|v| v != first),
        None => false,
    }
}

pub fn summarize(parameter: &str, samples: &[Scalar], docs: &[ReportDocument]) -> SweepSummary {
    let failed: Vec<usize> = docs.iter().enumerate().filter(|(_, d)| !d.errors.is_empty()).map(|(i, _)| i).collect();
    let mut jumps = Vec::new();
    if let Some(n) = docs.iter().find_map(|d| d.table.as_ref().map(|t| t.n)) {
        for p in 0..=n {
            for q in 0..=n {
                let kinds: [(&str, EntryField); 4] = [
                    ("dolbeault", |e| e.dolbeault),
                    ("del", |e| e.del),
                    ("bott_chern", |e| e.bott_chern),
                    ("aeppli", |e| e.aeppli),
                ];
                for (kind, get) in kinds {
                    let values: Vec<Option<usize>> = docs.iter().map(|d| d.table.as_ref().map(|t| get(t.entry(p, q)))).collect();
                    if varies(&values) {
                        jumps.push(Jump { p, q, cohomology: kind.into(), values });
                    }
                }
            }
        }
    }
    let mut flips = Vec::new();
    for key in ["sgg", "strong", "weak", "ddbar", "delta1", "positive", "balanced", "lcb"] {
        let values: Vec<Option<String>> = docs.iter().map(|d| crate::expect::actual(d, key)).collect();
        if varies(&values) {
            flips.push(Flip { criterion: key.into(), values });
        }
    }
    SweepSummary { parameter: parameter.into(), samples: samples.to_vec(), jumps, flips, failed }
}
