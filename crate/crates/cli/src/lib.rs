//! Library half of the `ddbar` command-line tool. [`run`] takes the
//! argument list and output streams and returns the process exit code:
//! 0 success, 1 an `--expect` assertion failed, 2 input error,
//! 3 internal inconsistency between equivalent characterizations.

pub mod args;
pub mod expect;
pub mod input;
pub mod render;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Parser;
use ddbar::{check_metric, criteria_report, find_balanced, parse_assignment, Assignment, Cohomology, SymbolicForm};
use rayon::prelude::*;

use crate::args::{Cli, Command, Common, Format, SweepArgs};
use crate::expect::Expectation;
use crate::input::{Loaded, Source};
use crate::report::{summarize, ReportDocument, SummaryLine, SweepSummary};

/// What to compute for one assignment.
#[derive(Clone, Default)]
struct Task {
    validate_only: bool,
    table: bool,
    criteria: bool,
    metric: Option<SymbolicForm>,
    search: Option<(usize, u64)>,
}

fn analyze(command: &str, loaded: &Loaded, assignment: &Assignment, task: &Task, timing: bool) -> Result<ReportDocument> {
    let start = Instant::now();
    let mut doc = ReportDocument::new(command, &loaded.name, &loaded.digest, assignment.clone());
    if task.validate_only {
        doc.validation = loaded.validate(assignment)?;
        if let Some(v) = &doc.validation {
            if !v.ok() {
                doc.errors.push(format!("validation failed: {}", v.issues.join("; ")));
            }
        }
    } else {
        let inst = loaded.instance(assignment)?;
        doc.validation = inst.validation;
        let coh = Cohomology::new(&inst.complex);
        if task.table {
            doc.table = Some(coh.table());
        }
        if task.criteria {
            let report = criteria_report(&coh);
            doc.warnings.extend(report.warnings.iter().cloned());
            doc.criteria = Some(report);
        }
        if let Some(f) = &task.metric {
            let omega = f.eval(assignment).context("evaluating the metric")?;
            doc.metric = Some(check_metric(&inst.complex, &omega)?);
        }
        if let Some((budget, seed)) = task.search {
            doc.search = Some(find_balanced(&inst.complex, budget, seed)?);
        }
    }
    if timing {
        doc.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(doc)
}

fn exit_code(docs: &[ReportDocument]) -> i32 {
    if docs.iter().any(|d| !d.errors.is_empty()) {
        2
    } else if docs.iter().any(ReportDocument::inconsistent) {
        3
    } else if docs.iter().any(|d| !d.expectations_pass()) {
        1
    } else {
        0
    }
}

fn write_ndjson(w: &mut dyn Write, docs: &[ReportDocument], summary: Option<&SweepSummary>) -> Result<()> {
    for d in docs {
        writeln!(w, "{}", serde_json::to_string(d)?)?;
    }
    if let Some(s) = summary {
        writeln!(w, "{}", serde_json::to_string(&SummaryLine { summary: s.clone() })?)?;
    }
    Ok(())
}

fn emit(common: &Common, docs: &[ReportDocument], summary: Option<&SweepSummary>, out: &mut dyn Write) -> Result<()> {
    match common.format {
        Format::Json => write_ndjson(out, docs, summary)?,
        Format::Human => match summary {
            None => {
                for d in docs {
                    write!(out, "{}", render::document(d))?;
                }
            }
            Some(s) => {
                let name = docs.first().map_or("", |d| d.input.as_str());
                writeln!(out, "{name} [sweep] {} over {} samples", s.parameter, s.samples.len())?;
                for d in docs {
                    writeln!(out, "{}", render::sweep_line(d))?;
                }
                let mut text = String::new();
                render::summary(&mut text, s);
                write!(out, "{text}")?;
            }
        },
    }
    if let Some(path) = &common.report {
        let mut file = std::fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
        write_ndjson(&mut file, docs, summary)?;
    }
    Ok(())
}

fn expectations(common: &Common) -> Result<Vec<Expectation>> {
    common.expect.as_deref().map(expect::parse).transpose().map(Option::unwrap_or_default)
}

fn single(common: &Common, command: &str, task: Task, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let loaded = input::load(&common.file)?;
    let assignment = parse_assignment(&common.params)?;
    let exps = expectations(common)?;
    let doc = match analyze(command, &loaded, &assignment, &task, common.timing) {
        Ok(mut doc) => {
            doc.expectations = expect::evaluate(&exps, &doc);
            doc
        }
        Err(e) => {
            writeln!(err, "error: {e:#}")?;
            let mut doc = ReportDocument::new(command, &loaded.name, &loaded.digest, assignment);
            doc.errors.push(format!("{e:#}"));
            doc
        }
    };
    emit(common, std::slice::from_ref(&doc), None, out)?;
    Ok(exit_code(std::slice::from_ref(&doc)))
}

fn sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let common = &args.common;
    let loaded = input::load(&common.file)?;
    let base = parse_assignment(&common.params)?;
    let (name, samples) = input::parse_sweep(&args.sweep)?;
    match &loaded.source {
        Source::Equations(eq) if !eq.params.contains(&name) => bail!("parameter {name} is not declared in {}", loaded.name),
        Source::Raw(_) => bail!("sweeps need a .cplx family with parameters"),
        _ => {}
    }
    let metric = args.metric.as_deref().map(SymbolicForm::parse).transpose().context("parsing --metric")?;
    let exps = expectations(common)?;
    let task = Task { table: true, criteria: true, metric, ..Task::default() };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs.max(1)).build()?;
    let docs: Vec<ReportDocument> = pool.install(|| {
        samples
            .par_iter()
            .enumerate()
            .map(|(i, value)| {
                let mut assignment = base.clone();
                assignment.insert(name.clone(), value.clone());
                let mut doc = match analyze("sweep", &loaded, &assignment, &task, common.timing) {
                    Ok(mut doc) => {
                        doc.expectations = expect::evaluate(&exps, &doc);
                        doc
                    }
                    Err(e) => {
                        let mut doc = ReportDocument::new("sweep", &loaded.name, &loaded.digest, assignment);
                        doc.errors.push(format!("{e:#}"));
                        doc
                    }
                };
                doc.sample = Some(i);
                doc
            })
            .collect()
    });
    for d in &docs {
        for e in &d.errors {
            writeln!(err, "error in sample {}: {e}", d.sample.unwrap_or(0))?;
        }
    }
    let summary = summarize(&name, &samples, &docs);
    emit(common, &docs, Some(&summary), out)?;
    Ok(exit_code(&docs))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate(c) => single(&c, "validate", Task { validate_only: true, ..Task::default() }, out, err),
        Command::Hodge(c) => single(&c, "hodge", Task { table: true, ..Task::default() }, out, err),
        Command::Criteria(c) => single(&c, "criteria", Task { table: true, criteria: true, ..Task::default() }, out, err),
        Command::CheckMetric(m) => {
            let form = SymbolicForm::parse(&m.metric).context("parsing --metric")?;
            single(&m.common, "check-metric", Task { metric: Some(form), ..Task::default() }, out, err)
        }
        Command::FindBalanced(s) => {
            single(&s.common, "find-balanced", Task { search: Some((s.budget, s.seed)), ..Task::default() }, out, err)
        }
        Command::Sweep(s) => sweep(&s, out, err),
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{e}");
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}
