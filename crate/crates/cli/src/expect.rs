//! `--expect` assertions evaluated against a report document.

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

use crate::report::ReportDocument;
use ddbar::metrics::{BalancedSearch, Lcb};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectationOutcome {
    pub key: String,
    pub expected: String,
    /// `None` when the document does not carry the quantity.
    pub actual: Option<String>,
    pub pass: bool,
}

const FLAGS: &[&str] = &[
    "valid", "d2", "integrable", "abelian", "unimodular", "sgg", "strong", "weak", "ddbar", "positive", "balanced",
    "gauduchon", "sg", "lcb", "certificate",
];
const TABLES: &[&str] = &["dbar", "del", "bc", "a"];

fn bidegree_suffix(rest: &str) -> Option<(usize, usize)> {
    let mut chars = rest.chars();
    let p = chars.next()?.to_digit(10)?;
    let q = chars.next()?.to_digit(10)?;
    chars.next().is_none().then_some((p as usize, q as usize))
}

fn known(key: &str) -> bool {
    if FLAGS.contains(&key) {
        return true;
    }
    if let Some(k) = key.strip_prefix("delta").or_else(|| key.strip_prefix('b')) {
        if k.parse::<usize>().is_ok() {
            return true;
        }
    }
    TABLES.iter().any(|t| key.strip_prefix(t).and_then(bidegree_suffix).is_some())
}

pub fn parse(text: &str) -> Result<Vec<Expectation>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let Some((k, v)) = part.split_once('=') else {
            bail!("expectation '{part}' must be key=value");
        };
        let key = k.trim().to_ascii_lowercase();
        if !known(&key) {
            bail!("unknown expectation key '{key}'");
        }
        out.push(Expectation { key, value: v.trim().to_ascii_lowercase() });
    }
    Ok(out)
}

fn flag(b: bool) -> Option<String> {
    Some(b.to_string())
}

pub fn actual(doc: &ReportDocument, key: &str) -> Option<String> {
    let v = doc.validation.as_ref();
    let c = doc.criteria.as_ref();
    let m = doc.metric.as_ref();
    match key {
        "valid" => v.and_then(|v| flag(v.ok())),
        "d2" => v.and_then(|v| flag(v.d_squared_zero)),
        "integrable" => v.and_then(|v| flag(v.integrable)),
        "abelian" => v.and_then(|v| flag(v.abelian)),
        "unimodular" => v.and_then(|v| flag(v.unimodular)),
        "sgg" => c.and_then(|c| flag(c.sgg.verdict)),
        "strong" => c.and_then(|c| flag(c.strong_lemma.verdict)),
        "weak" => c.map(|c| c.weak_lemma.map_or("unknown".into(), |w| w.to_string())),
        "ddbar" => c.and_then(|c| flag(c.ddbar_lemma)),
        "positive" => m.and_then(|m| flag(m.positive)),
        "balanced" => m.and_then(|m| flag(m.balanced)),
        "gauduchon" => m.and_then(|m| flag(m.gauduchon)),
        "sg" => m.and_then(|m| flag(m.strongly_gauduchon)),
        "lcb" => m.map(|m| {
            match m.lcb {
                Lcb::Yes { .. } => "yes",
                Lcb::No { .. } => "no",
                Lcb::NotApplicable => "n/a",
            }
            .to_string()
        }),
        "certificate" => doc.search.as_ref().and_then(|s| flag(matches!(s, BalancedSearch::Certificate { .. }))),
        _ => {
            if let Some(k) = key.strip_prefix("delta").and_then(|k| k.parse::<usize>().ok()) {
                return c.filter(|c| k >= 1 && k <= c.delta.len()).map(|c| c.delta(k).to_string());
            }
            if let Some(k) = key.strip_prefix('b').and_then(|k| k.parse::<usize>().ok()) {
                return doc.table.as_ref().and_then(|t| t.betti.get(k)).map(usize::to_string);
            }
            for t in TABLES {
                if let Some((p, q)) = key.strip_prefix(t).and_then(bidegree_suffix) {
                    let table = doc.table.as_ref().filter(|tb| p <= tb.n && q <= tb.n)?;
                    let e = table.entry(p, q);
                    let value = match *t {
                        "dbar" => e.dolbeault,
                        "del" => e.del,
                        "bc" => e.bott_chern,
                        _ => e.aeppli,
                    };
                    return Some(value.to_string());
                }
            }
            None
        }
    }
}

pub fn evaluate(expectations: &[Expectation], doc: &ReportDocument) -> Vec<ExpectationOutcome> {
    expectations
        .iter()
        .map(|e| {
            let actual = actual(doc, &e.key);
            let pass = actual.as_deref() == Some(e.value.as_str());
            ExpectationOutcome { key: e.key.clone(), expected: e.value.clone(), actual, pass }
        })
        .collect()
}
