//! Human-readable rendering of report documents.

use std::fmt::Write;

use ddbar::cohomology::CohomologyTable;
use ddbar::criteria::CriteriaReport;
use ddbar::metrics::{BalancedSearch, Lcb, MetricReport};
use ddbar::ValidationReport;

use crate::report::{ReportDocument, SweepSummary};

fn yes(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn params(doc: &ReportDocument) -> String {
    if doc.params.is_empty() {
        return "-".into();
    }
    doc.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

pub fn validation(out: &mut String, v: &ValidationReport) {
    let _ = writeln!(out, "  d^2 = 0      {}", yes(v.d_squared_zero));
    let _ = writeln!(out, "  integrable   {}", yes(v.integrable));
    let _ = writeln!(out, "  abelian      {}", if v.abelian { "yes" } else { "no" });
    let _ = writeln!(out, "  unimodular   {}", if v.unimodular { "yes" } else { "no" });
    for issue in &v.issues {
        let _ = writeln!(out, "  issue: {issue}");
    }
}

pub fn table(out: &mut String, t: &CohomologyTable) {
    let _ = writeln!(out, "  {:>5} {:>4} {:>5} {:>5} {:>5} {:>5}", "(p,q)", "dim", "dbar", "del", "BC", "A");
    for e in &t.entries {
        let _ = writeln!(
            out,
            "  {:>5} {:>4} {:>5} {:>5} {:>5} {:>5}",
            format!("{},{}", e.p, e.q),
            e.dim,
            e.dolbeault,
            e.del,
            e.bott_chern,
            e.aeppli
        );
    }
    let betti: Vec<String> = t.betti.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "  betti  {}", betti.join(" "));
}

pub fn criteria(out: &mut String, c: &CriteriaReport) {
    let delta: Vec<String> = c.delta.iter().map(i64::to_string).collect();
    let _ = writeln!(out, "  Delta^1..{}   {}", c.delta.len(), delta.join(" "));
    let s = &c.sgg;
    let _ = writeln!(
        out,
        "  sGG          {:<5}  (dbar->A injective {}, T = 0 {}, h01 BC = dbar {}, b1 = 2 h01 dbar {})",
        s.verdict, s.dolbeault_to_aeppli_injective, s.t_vanishes, s.bc_equals_dolbeault, s.betti_equals_twice_dolbeault
    );
    let _ = writeln!(
        out,
        "  strong       {:<5}  (direct {}, b1 = 2 h01 A {})",
        c.strong_lemma.verdict, c.strong_lemma.direct, c.strong_lemma.numeric
    );
    let weak = c.weak_lemma.map_or("unknown".to_string(), |w| w.to_string());
    let _ = writeln!(out, "  weak         {weak}");
    let _ = writeln!(out, "  ddbar-Lemma  {}", c.ddbar_lemma);
    let r = &c.ranks;
    let _ = writeln!(
        out,
        "  maps at ({},{}): BC->dbar {}/{}, BC->del {}/{}, dbar->A {}/{}, BC->A {}/{}, rank T {}",
        r.p,
        r.q,
        r.bc_to_dolbeault.rank,
        r.bc_to_dolbeault.domain,
        r.bc_to_del.rank,
        r.bc_to_del.domain,
        r.dolbeault_to_aeppli.rank,
        r.dolbeault_to_aeppli.domain,
        r.bc_to_aeppli.rank,
        r.bc_to_aeppli.domain,
        r.t_rank
    );
}

pub fn metric(out: &mut String, m: &MetricReport) {
    let _ = writeln!(out, "  positive            {}", m.positive);
    let _ = writeln!(out, "  balanced            {}", m.balanced);
    let _ = writeln!(out, "  gauduchon           {}", m.gauduchon);
    let _ = writeln!(out, "  strongly gauduchon  {}", m.strongly_gauduchon);
    let lcb = match &m.lcb {
        Lcb::Yes { theta } => format!("yes, theta = {theta}"),
        Lcb::No { reason } => format!("no ({reason})"),
        Lcb::NotApplicable => "n/a (not positive)".into(),
    };
    let _ = writeln!(out, "  lcb                 {lcb}");
    let _ = writeln!(out, "  omega^(n-1)         {}", m.power);
}

pub fn search(out: &mut String, s: &BalancedSearch) {
    match s {
        BalancedSearch::Certificate { omega_power, trial, method } => {
            let _ = writeln!(out, "  certificate (trial {trial}, {method}): {omega_power}");
        }
        BalancedSearch::Unknown { trials } => {
            let _ = writeln!(out, "  unknown after {trials} trials");
        }
    }
}

pub fn document(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} [{}]  params: {}", doc.input, doc.command, params(doc));
    if let Some(v) = &doc.validation {
        if doc.command == "validate" {
            validation(&mut out, v);
        }
    }
    if let Some(t) = &doc.table {
        table(&mut out, t);
    }
    if let Some(c) = &doc.criteria {
        criteria(&mut out, c);
    }
    if let Some(m) = &doc.metric {
        metric(&mut out, m);
    }
    if let Some(s) = &doc.search {
        search(&mut out, s);
    }
    for w in &doc.warnings {
        let _ = writeln!(out, "  warning: {w}");
    }
    for e in &doc.errors {
        let _ = writeln!(out, "  error: {e}");
    }
    for e in &doc.expectations {
        let actual = e.actual.as_deref().unwrap_or("missing");
        let _ = writeln!(out, "  expect {}={}: {} (got {actual})", e.key, e.expected, if e.pass { "ok" } else { "FAILED" });
    }
    if let Some(ms) = doc.timing_ms {
        let _ = writeln!(out, "  time {ms} ms");
    }
    out
}

/// One line per sample.
pub fn sweep_line(doc: &ReportDocument) -> String {
    let mut line = format!("  #{} {}", doc.sample.unwrap_or(0), params(doc));
    if let Some(c) = &doc.criteria {
        let weak = c.weak_lemma.map_or("?".to_string(), |w| w.to_string());
        let delta: Vec<String> = c.delta.iter().map(i64::to_string).collect();
        let _ = write!(
            line,
            "  sGG={} strong={} weak={} ddbar={} Delta=[{}]",
            c.sgg.verdict,
            c.strong_lemma.verdict,
            weak,
            c.ddbar_lemma,
            delta.join(",")
        );
    }
    if let Some(m) = &doc.metric {
        let _ = write!(line, " positive={} balanced={}", m.positive, m.balanced);
    }
    for e in &doc.errors {
        let _ = write!(line, "  error: {e}");
    }
    for w in &doc.warnings {
        let _ = write!(line, "  warning: {w}");
    }
    line
}

pub fn summary(out: &mut String, s: &SweepSummary) {
    if s.jumps.is_empty() {
        let _ = writeln!(out, "no cohomology jumps");
    }
    for j in &s.jumps {
        let values: Vec<String> = j.values.iter().map(|v| v.map_or("-".into(), |x| x.to_string())).collect();
        let _ = writeln!(out, "jump h^{{{},{}}}_{}: {}", j.p, j.q, j.cohomology, values.join(" "));
    }
    if s.flips.is_empty() {
        let _ = writeln!(out, "no verdict flips");
    }
    for f in &s.flips {
        let values: Vec<String> = f.values.iter().map(|v| v.clone().unwrap_or("-".into())).collect();
        let _ = writeln!(out, "flip {}: {}", f.criterion, values.join(" "));
    }
    if !s.failed.is_empty() {
        let failed: Vec<String> = s.failed.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "failed samples: {}", failed.join(" "));
    }
}
