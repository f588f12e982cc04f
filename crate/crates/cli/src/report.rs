//! JSON and CSV serialisation of suite reports.
//!
//! Floats are written in shortest round-trip form, so reading a JSON report
//! back reproduces every numeric field bit for bit. Nothing time-dependent is
//! emitted.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};
use wradius_core::{
    CheckId, CheckRecord, CheckSummary, EnsembleSpec, Family, SuiteReport, Verdict,
};

use crate::error::{CliError, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `family` value used when the report covers explicitly supplied matrices.
pub const MATRIX_FAMILY: &str = "matrix";

pub const CSV_HEADER: [&str; 10] = [
    "check_id",
    "sample_index",
    "t",
    "lambda",
    "lhs",
    "rhs",
    "slack",
    "tol_used",
    "verdict",
    "note",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Meta {
    family: String,
    dim: usize,
    count: usize,
    seed: Option<u64>,
    tol: f64,
    tool_version: String,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    floor: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    check_id: String,
    sample_index: usize,
    t: Option<f64>,
    lambda: Option<f64>,
    lhs: f64,
    rhs: f64,
    slack: f64,
    tol_used: f64,
    verdict: String,
    note: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct SummaryRow {
    count: usize,
    failures: usize,
    skipped: usize,
    min_slack: Option<f64>,
    median_slack: Option<f64>,
}

#[derive(Debug, Serialize)]
struct JsonOut<'a> {
    meta: Meta,
    records: Vec<Row>,
    #[serde(serialize_with = "summary_in_check_order")]
    summary: &'a BTreeMap<CheckId, CheckSummary>,
}

#[derive(Debug, Deserialize)]
struct JsonIn {
    meta: Meta,
    records: Vec<Row>,
    #[allow(dead_code)]
    summary: BTreeMap<String, SummaryRow>,
}

fn summary_row(s: &CheckSummary) -> SummaryRow {
    SummaryRow {
        count: s.count,
        failures: s.failures,
        skipped: s.skipped,
        min_slack: s.min_slack,
        median_slack: s.median_slack,
    }
}

// Keys follow the catalog order rather than alphabetical order.
fn summary_in_check_order<S: Serializer>(
    map: &&BTreeMap<CheckId, CheckSummary>,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_map(map.iter().map(|(id, s)| (id.name(), summary_row(s))))
}

fn row(r: &CheckRecord) -> Row {
    Row {
        check_id: r.check_id.name().to_owned(),
        sample_index: r.sample_index,
        t: r.t,
        lambda: r.lambda,
        lhs: r.lhs,
        rhs: r.rhs,
        slack: r.slack,
        tol_used: r.tol_used,
        verdict: r.verdict.name().to_owned(),
        note: r.note.clone(),
    }
}

fn meta(report: &SuiteReport) -> Meta {
    let spec = report.spec.as_ref();
    Meta {
        family: spec.map_or(MATRIX_FAMILY.to_owned(), |s| s.family.name().to_owned()),
        dim: report.dim,
        count: report.count,
        seed: spec.map(|s| s.seed),
        tol: report.tol,
        tool_version: TOOL_VERSION.to_owned(),
        alpha: spec.and_then(|s| s.sector_alpha),
        floor: spec.map(|s| s.conditioning_floor),
    }
}

pub fn to_json(report: &SuiteReport) -> String {
    let out = JsonOut {
        meta: meta(report),
        records: report.records.iter().map(row).collect(),
        summary: &report.summary,
    };
    let mut text = serde_json::to_string_pretty(&out).expect("report serialisation cannot fail");
    text.push('\n');
    text
}

fn bad_report(message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: "report".into(),
        location: "document".into(),
        message: message.into(),
    }
}

/// Reads a JSON report written by [`to_json`]. The summary is recomputed from
/// the records.
pub fn from_json(text: &str) -> Result<SuiteReport> {
    let doc: JsonIn = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: "report".into(),
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let m = doc.meta;
    let spec = if m.family == MATRIX_FAMILY {
        None
    } else {
        let family: Family = m.family.parse().map_err(|_| bad_report("unknown family"))?;
        let seed = m.seed.ok_or_else(|| bad_report("ensemble report without seed"))?;
        Some(EnsembleSpec {
            family,
            dim: m.dim,
            count: m.count,
            seed,
            sector_alpha: m.alpha,
            conditioning_floor: m.floor.ok_or_else(|| bad_report("ensemble report without floor"))?,
        })
    };
    let records = doc
        .records
        .into_iter()
        .map(|r| {
            Ok(CheckRecord {
                check_id: r.check_id.parse().map_err(|_| bad_report(format!("unknown check id {}", r.check_id)))?,
                sample_index: r.sample_index,
                t: r.t,
                lambda: r.lambda,
                lhs: r.lhs,
                rhs: r.rhs,
                slack: r.slack,
                tol_used: r.tol_used,
                verdict: r.verdict.parse::<Verdict>().map_err(|_| bad_report(format!("unknown verdict {}", r.verdict)))?,
                note: r.note,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::from_records(spec, m.dim, m.count, m.tol, records))
}

fn float(x: f64) -> String {
    // Debug output is the shortest string that parses back to the same bits.
    format!("{x:?}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

pub fn to_csv(report: &SuiteReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = "writing CSV to memory cannot fail";
    w.write_record(CSV_HEADER).expect(io);
    for r in &report.records {
        w.write_record([
            r.check_id.name().to_owned(),
            r.sample_index.to_string(),
            opt_float(r.t),
            opt_float(r.lambda),
            float(r.lhs),
            float(r.rhs),
            float(r.slack),
            float(r.tol_used),
            r.verdict.name().to_owned(),
            r.note.clone(),
        ])
        .expect(io);
    }
    String::from_utf8(w.into_inner().expect(io)).expect("CSV output is UTF-8")
}

pub fn render(report: &SuiteReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
    }
}

pub fn write_report(report: &SuiteReport, format: Format, path: &Path) -> Result<()> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = fs::File::create(path).map_err(io)?;
    file.write_all(render(report, format).as_bytes()).map_err(io)
}

/// Human-readable digest: one line per check plus a verdict line.
pub fn summary_text(report: &SuiteReport) -> String {
    let mut out = String::new();
    let source = report
        .spec
        .as_ref()
        .map_or(MATRIX_FAMILY.to_owned(), |s| s.family.name().to_owned());
    out.push_str(&format!(
        "{} records over {} sample(s) of {} (dim {}), tol {:e}\n",
        report.records.len(),
        report.count,
        source,
        report.dim,
        report.tol
    ));
    out.push_str(&format!(
        "{:<24} {:>7} {:>6} {:>7} {:>12}\n",
        "check", "records", "fail", "skipped", "min slack"
    ));
    for (id, s) in &report.summary {
        let min = s.min_slack.map_or("-".to_owned(), |x| format!("{x:.3e}"));
        out.push_str(&format!(
            "{:<24} {:>7} {:>6} {:>7} {:>12}\n",
            id.name(),
            s.count,
            s.failures,
            s.skipped,
            min
        ));
    }
    let failures = report.failures();
    if failures == 0 {
        out.push_str("result: all checks passed\n");
    } else {
        out.push_str(&format!("result: {failures} failing record(s)\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use wradius_core::{check, ComplexMatrix, DEFAULT_LAMBDA_GRID, DEFAULT_T_GRID};

    fn one_record() -> SuiteReport {
        let a = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let recs = check(CheckId::Prop12Identity, &a, Some(0.3), None, 1e-8).unwrap();
        assert_eq!(recs.len(), 1);
        SuiteReport::from_records(None, 2, 1, 1e-8, recs)
    }

    #[test]
    fn empty_report_is_valid_json() {
        let r = SuiteReport::from_records(None, 3, 0, 1e-8, Vec::new());
        let text = to_json(&r);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["records"], serde_json::json!([]));
        assert_eq!(v["meta"]["family"], "matrix");
        assert_eq!(v["meta"]["tool_version"], TOOL_VERSION);
        assert_eq!(from_json(&text).unwrap(), r);
    }

    #[test]
    fn one_record_csv_has_two_lines() {
        let text = to_csv(&one_record());
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    }

    #[test]
    fn csv_quotes_notes() {
        let mut r = one_record();
        r.records[0].note = "a, \"b\"".into();
        let text = to_csv(&r);
        assert!(text.contains("\"a, \"\"b\"\"\""), "{text}");
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let row = reader.records().next().unwrap().unwrap();
        assert_eq!(&row[9], "a, \"b\"");
        assert_eq!(row[4].parse::<f64>().unwrap().to_bits(), r.records[0].lhs.to_bits());
        assert_eq!(&row[3], "");
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let spec = EnsembleSpec::sectorial(0.3, 3, 2, 11).unwrap();
        let report = wradius_core::run_suite(
            &spec,
            &[CheckId::SectorRefineR33, CheckId::ConvexityT, CheckId::SqrtGapProportional],
            &DEFAULT_T_GRID,
            &DEFAULT_LAMBDA_GRID,
            1e-8,
        )
        .unwrap();
        let text = to_json(&report);
        let back = from_json(&text).unwrap();
        assert_eq!(back, report);
        for (x, y) in back.records.iter().zip(&report.records) {
            for (u, v) in [(x.lhs, y.lhs), (x.rhs, y.rhs), (x.slack, y.slack), (x.tol_used, y.tol_used)] {
                assert_eq!(u.to_bits(), v.to_bits());
            }
        }
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn summary_keys_follow_catalog_order() {
        let spec = EnsembleSpec::new(Family::General, 2, 1, 1).unwrap();
        let report = wradius_core::run_suite(
            &spec,
            &[CheckId::PowerReverseT34, CheckId::Prop12Identity],
            &[0.5],
            &[0.5],
            1e-8,
        )
        .unwrap();
        let text = to_json(&report);
        let first = text.find("\"PROP12_IDENTITY\": {").unwrap();
        let second = text.find("\"POWER_REVERSE_T34\": {").unwrap();
        assert!(first < second);
    }

    #[test]
    fn malformed_reports_rejected() {
        assert!(from_json("{}").is_err());
        let text = to_json(&one_record()).replace("PROP12_IDENTITY", "BOGUS");
        assert!(from_json(&text).is_err());
    }

    #[test]
    fn digest_mentions_every_check() {
        let text = summary_text(&one_record());
        assert!(text.contains("PROP12_IDENTITY"));
        assert!(text.ends_with("result: all checks passed\n"));
    }
}
