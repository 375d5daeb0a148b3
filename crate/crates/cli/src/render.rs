//! Formatting of command results for stdout.

use std::fmt::Write as _;

use clap::ValueEnum;
use pathcensus::analysis::{ConjectureVerdict, OracleReport, PropertyReport, ScanReport};
use pathcensus::{BigCount, Composition, SignedType};
use serde::Serialize;
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    /// Semicolon-separated fields, tuples comma-separated.
    Csv,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub fn eval(format: Format, c: &Composition, value: &BigCount) -> String {
    match format {
        Format::Text => format!("{value}\n"),
        Format::Json => to_json(&json!({
            "composition": c,
            "value": value.to_string(),
        })),
        Format::Csv => format!("{c};{value}\n"),
    }
}

pub fn census(
    format: Format,
    n: usize,
    a: &SignedType,
    count: &BigCount,
    oracle: Option<&BigCount>,
) -> String {
    let symmetric = a.is_symmetric();
    match format {
        Format::Text => {
            let mut s = format!(
                "{count}\n{}\n",
                if symmetric { "symmetric" } else { "non-symmetric" }
            );
            if let Some(b) = oracle {
                let verdict = if b == count { "agrees" } else { "DISAGREES" };
                let _ = writeln!(s, "oracle {b} ({verdict})");
            }
            s
        }
        Format::Json => to_json(&json!({
            "n": n,
            "type": a,
            "count": count.to_string(),
            "symmetric": symmetric,
            "oracle": oracle.map(|b| b.to_string()),
        })),
        Format::Csv => {
            let mut s = format!("{n};{a};{count};{symmetric}");
            if let Some(b) = oracle {
                let _ = write!(s, ";{b}");
            }
            s.push('\n');
            s
        }
    }
}

pub fn scan(format: Format, report: &ScanReport<BigCount>) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Text | Format::Csv => {
            let sep = if format == Format::Csv { ";" } else { "  " };
            let mut s = String::new();
            for row in &report.rows {
                let _ = writeln!(s, "{}{sep}{}", row.composition, row.value);
            }
            s
        }
    }
}

pub fn conjecture(format: Format, verdicts: &[ConjectureVerdict<BigCount>]) -> String {
    match format {
        Format::Json => to_json(&verdicts),
        Format::Csv => {
            let mut s = String::from(
                "p;all_ones_is_max;runner_up_is_1_2_ones;runner_up_exceeds_half_max;tt_form_holds;max;runner_up\n",
            );
            for v in verdicts {
                let _ = writeln!(
                    s,
                    "{};{};{};{};{};{};{}",
                    v.p,
                    v.all_ones_is_max,
                    v.runner_up_is_1_2_ones,
                    v.runner_up_exceeds_half_max,
                    v.tt_form_holds,
                    v.max_value,
                    v.runner_up_value
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for v in verdicts {
                let mut failed = Vec::new();
                if !v.all_ones_is_max {
                    failed.push("all-ones maximum");
                }
                if !v.runner_up_is_1_2_ones {
                    failed.push("runner-up (1,2,1,...,1)");
                }
                if !v.runner_up_exceeds_half_max {
                    failed.push("runner-up above half");
                }
                if !v.tt_form_holds {
                    failed.push("tournament form");
                }
                let status = if failed.is_empty() {
                    "ok".to_string()
                } else {
                    format!("FAILED: {}", failed.join(", "))
                };
                let _ = writeln!(
                    s,
                    "p={:<3} max {}  runner-up {}  {status}",
                    v.p, v.max_value, v.runner_up_value
                );
                for c in &v.witnesses {
                    let _ = writeln!(s, "    witness ({c})");
                }
            }
            s
        }
    }
}

pub fn verify(format: Format, report: &OracleReport<BigCount>) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => {
            let mut s = String::new();
            for d in &report.discrepancies {
                let _ = writeln!(s, "{};{};{};{}", d.n, d.ty, d.oracle, d.reference);
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "checked {} types up to n={}: {} discrepancies\n",
                report.types_checked,
                report.max_n,
                report.discrepancies.len()
            );
            for d in &report.discrepancies {
                let _ = writeln!(s, "  {d}");
            }
            s
        }
    }
}

pub fn properties(format: Format, report: &PropertyReport) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => {
            let mut s = String::from("family;instances;failures\n");
            for fam in &report.families {
                let _ = writeln!(s, "{};{};{}", fam.name, fam.instances, fam.failures);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for fam in &report.families {
                let status = if fam.failures == 0 { "ok" } else { "FAILED" };
                let _ = writeln!(
                    s,
                    "{:<22} {:>9} checked {:>6} failed  {status}",
                    fam.name, fam.instances, fam.failures
                );
                for e in &fam.examples {
                    let _ = writeln!(s, "    {e}");
                }
            }
            s
        }
    }
}

pub fn bench(format: Format, report: &ScanReport<BigCount>, entries: usize, agree: bool) -> String {
    match format {
        Format::Json => to_json(&json!({
            "p": report.p,
            "compositions": report.rows.len(),
            "memo_entries": entries,
            "strategies_agree": agree,
            "max": report.max_row.value.to_string(),
        })),
        Format::Csv => format!("{};{};{};{}\n", report.p, report.rows.len(), entries, agree),
        Format::Text => format!(
            "p={} compositions {} memo entries {} strategies {}\n",
            report.p,
            report.rows.len(),
            entries,
            if agree { "agree" } else { "DISAGREE" }
        ),
    }
}
