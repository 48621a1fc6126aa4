//! Rendering of count reports as text tables, CSV and JSON.
//!
//! Everything here is a pure function of the report's counts; timing lives
//! in its own `timing` object (JSON) or goes to stderr (text formats), so
//! repeated runs print identical data.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cycles::BoundCheck;
use crate::report::{CountReport, Family};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KCount {
    pub k: u32,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

/// One serialized report. Field order is the output order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputRecord {
    pub graph: &'static str,
    pub n: u32,
    pub mode: &'static str,
    pub convention: &'static str,
    pub total: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_k: Option<Vec<KCount>>,
    pub engine_version: &'static str,
    pub timing: Timing,
}

impl OutputRecord {
    pub fn from_report(report: &CountReport, with_per_k: bool) -> Self {
        Self {
            graph: match report.family {
                Family::Path => "path",
                Family::Cycle => "cycle",
            },
            n: report.n,
            mode: report.mode.as_str(),
            convention: report.convention.as_str(),
            total: report.total,
            per_k: with_per_k.then(|| {
                report
                    .per_k
                    .iter()
                    .map(|(&k, &count)| KCount { k, count })
                    .collect()
            }),
            engine_version: ENGINE_VERSION,
            timing: Timing {
                elapsed_ms: report.elapsed.as_millis() as u64,
            },
        }
    }
}

fn length_header(family: Family) -> &'static str {
    match family {
        Family::Path => "Path Length",
        Family::Cycle => "Cycle Length",
    }
}

fn text_table(reports: &[CountReport], with_per_k: bool) -> String {
    let family = reports.first().map_or(Family::Path, |r| r.family);
    let header = length_header(family);
    let width = header.len().max(4);
    let mut out = String::new();
    writeln!(out, "{header:<width$}  Number of Solutions").unwrap();
    for r in reports {
        writeln!(out, "{:<width$}  {}", r.n, r.total).unwrap();
    }
    if with_per_k {
        for r in reports.iter().filter(|r| !r.per_k.is_empty()) {
            writeln!(out).unwrap();
            writeln!(out, "n = {} ({}), per magic constant", r.n, r.convention).unwrap();
            writeln!(out, "{:<4}  Solutions", "k").unwrap();
            for (k, c) in &r.per_k {
                writeln!(out, "{k:<4}  {c}").unwrap();
            }
        }
    }
    out
}

fn csv(reports: &[CountReport], with_per_k: bool) -> String {
    let mut out = String::new();
    match reports.first().map(|r| r.family) {
        Some(Family::Cycle) => out.push_str("cycle_length,solutions\n"),
        _ => out.push_str("path_length,solutions\n"),
    }
    for r in reports {
        writeln!(out, "{},{}", r.n, r.total).unwrap();
    }
    if with_per_k {
        out.push('\n');
        out.push_str("n,k,solutions\n");
        for r in reports {
            for (k, c) in &r.per_k {
                writeln!(out, "{},{k},{c}", r.n).unwrap();
            }
        }
    }
    out
}

/// Renders a single report.
pub fn render_one(report: &CountReport, format: Format, with_per_k: bool) -> String {
    match format {
        Format::Json => {
            let record = OutputRecord::from_report(report, with_per_k);
            let mut s = serde_json::to_string_pretty(&record).expect("record serializes");
            s.push('\n');
            s
        }
        Format::Table => text_table(std::slice::from_ref(report), with_per_k),
        Format::Csv => csv(std::slice::from_ref(report), with_per_k),
    }
}

/// Renders one row per report; JSON becomes an array of records.
pub fn render_many(reports: &[CountReport], format: Format, with_per_k: bool) -> String {
    match format {
        Format::Json => {
            let records: Vec<OutputRecord> = reports
                .iter()
                .map(|r| OutputRecord::from_report(r, with_per_k))
                .collect();
            let mut s = serde_json::to_string_pretty(&records).expect("records serialize");
            s.push('\n');
            s
        }
        Format::Table => text_table(reports, with_per_k),
        Format::Csv => csv(reports, with_per_k),
    }
}

/// Cycle report followed by the path comparison.
#[derive(Debug, Serialize)]
struct CycleDocument<'a> {
    cycle: OutputRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound_check: Option<&'a BoundCheck>,
}

pub fn render_cycle(
    report: &CountReport,
    check: Option<&BoundCheck>,
    format: Format,
    with_per_k: bool,
) -> String {
    match format {
        Format::Json => {
            let doc = CycleDocument {
                cycle: OutputRecord::from_report(report, with_per_k),
                bound_check: check,
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
            s.push('\n');
            s
        }
        Format::Table | Format::Csv => {
            let mut out = render_one(report, format, with_per_k);
            if let Some(c) = check {
                out.push('\n');
                out.push_str(&render_bound_check(c, format));
            }
            out
        }
    }
}

fn render_bound_check(c: &BoundCheck, format: Format) -> String {
    match format {
        Format::Csv => format!(
            "n,pairing,path,cycle,holds,strict\n\
             {n},raw-vs-raw,{},{},{},{}\n\
             {n},canonical-vs-dihedral,{},{},{},{}\n",
            c.path_count,
            c.cycle_count,
            c.holds,
            c.strict,
            c.path_canonical,
            c.cycle_dihedral,
            c.reduced_holds,
            c.reduced_strict,
            n = c.n,
        ),
        _ => format!(
            "path vs cycle, n = {n}\n\
             raw path {} vs raw cycle {}: holds={} strict={}\n\
             canonical path {} vs dihedral cycle {}: holds={} strict={}\n",
            c.path_count,
            c.cycle_count,
            c.holds,
            c.strict,
            c.path_canonical,
            c.cycle_dihedral,
            c.reduced_holds,
            c.reduced_strict,
            n = c.n,
        ),
    }
}
