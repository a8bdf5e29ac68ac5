//! Report rows and their CSV/JSON serialization.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which makes
//! emitted files byte-stable and round-trip exact. Serialization rejects
//! non-finite values outright — a NaN in a report is a bug upstream, never
//! something to print.

use crate::error::{Error, Result};
use serde::Deserialize;
use std::io::Write;
use std::path::Path;

/// CSV column header; JSON objects carry the same field names.
pub const CSV_HEADER: &str = "suite,label,n,k,theta,t,value,limit,gap,tolerance,passed,seed";

/// One report line: a check or profile sample with its verdict.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ReportRow {
    pub suite: String,
    pub label: String,
    pub n: u64,
    pub k: u64,
    pub theta: Option<f64>,
    pub t: Option<f64>,
    pub value: f64,
    pub limit: Option<f64>,
    pub gap: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub seed: u64,
}

impl ReportRow {
    fn check_finite(&self) -> Result<()> {
        let named = [
            ("theta", self.theta),
            ("t", self.t),
            ("value", Some(self.value)),
            ("limit", self.limit),
            ("gap", self.gap),
            ("tolerance", Some(self.tolerance)),
        ];
        for (name, v) in named {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(Error::numeric(format!(
                        "row '{}/{}' holds non-finite {name} = {v}",
                        self.suite, self.label
                    )));
                }
            }
        }
        Ok(())
    }
}

/// 17 significant digits; round-trips through `str::parse::<f64>` exactly.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Canonical row order: suite, then n, then theta (absent first), then label.
pub fn sort_rows(rows: &mut [ReportRow]) {
    rows.sort_by(|a, b| {
        (a.suite.as_str(), a.n)
            .cmp(&(b.suite.as_str(), b.n))
            .then_with(|| match (a.theta, b.theta) {
                (None, None) => std::cmp::Ordering::Equal,
                (None, Some(_)) => std::cmp::Ordering::Less,
                (Some(_), None) => std::cmp::Ordering::Greater,
                (Some(x), Some(y)) => x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal),
            })
            .then_with(|| a.label.cmp(&b.label))
    });
}

pub fn to_csv(rows: &[ReportRow]) -> Result<String> {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        row.check_finite()?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            csv_quote(&row.suite),
            csv_quote(&row.label),
            row.n,
            row.k,
            fmt_opt(row.theta),
            fmt_opt(row.t),
            fmt_f64(row.value),
            fmt_opt(row.limit),
            fmt_opt(row.gap),
            fmt_f64(row.tolerance),
            row.passed,
            row.seed,
        ));
    }
    Ok(out)
}

fn json_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_else(|| "null".to_string())
}

pub fn to_json(rows: &[ReportRow]) -> Result<String> {
    let mut out = String::from("[\n");
    for (i, row) in rows.iter().enumerate() {
        row.check_finite()?;
        out.push_str(&format!(
            "  {{\"suite\":{},\"label\":{},\"n\":{},\"k\":{},\"theta\":{},\"t\":{},\
             \"value\":{},\"limit\":{},\"gap\":{},\"tolerance\":{},\"passed\":{},\"seed\":{}}}",
            serde_json::to_string(&row.suite).expect("string"),
            serde_json::to_string(&row.label).expect("string"),
            row.n,
            row.k,
            json_opt(row.theta),
            json_opt(row.t),
            fmt_f64(row.value),
            json_opt(row.limit),
            json_opt(row.gap),
            fmt_f64(row.tolerance),
            row.passed,
            row.seed,
        ));
        out.push_str(if i + 1 < rows.len() { ",\n" } else { "\n" });
    }
    out.push_str("]\n");
    Ok(out)
}

pub fn parse_json(text: &str) -> Result<Vec<ReportRow>> {
    serde_json::from_str(text).map_err(|e| Error::contract(format!("report parse: {e}")))
}

/// Serializes `rows` and writes them atomically: the content lands in a
/// temporary file in the target directory and is renamed over `path`, so a
/// failed run leaves no partial file behind.
pub fn write_report(rows: &[ReportRow], format: super::config::OutputFormat, path: &Path) -> Result<()> {
    let body = match format {
        super::config::OutputFormat::Csv => to_csv(rows)?,
        super::config::OutputFormat::Json => to_json(rows)?,
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(d) => tempfile::NamedTempFile::new_in(d),
        None => tempfile::NamedTempFile::new_in("."),
    }
    .map_err(|e| Error::io(path, e))?;
    tmp.write_all(body.as_bytes()).map_err(|e| Error::io(path, e))?;
    tmp.persist(path)
        .map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::OutputFormat;

    fn row(label: &str, theta: Option<f64>) -> ReportRow {
        ReportRow {
            suite: "profile".into(),
            label: label.into(),
            n: 512,
            k: 256,
            theta,
            t: theta.map(|h| 100.0 + h),
            value: 0.3829249225480263,
            limit: Some(0.38),
            gap: Some(0.0029249225480263),
            tolerance: 0.05,
            passed: true,
            seed: 20260810,
        }
    }

    #[test]
    fn csv_has_twelve_fields_per_row() {
        let csv = to_csv(&[row("point", Some(0.0))]).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let data = lines.next().unwrap();
        assert_eq!(data.split(',').count(), 12);
        assert!(data.contains("3.8292492254802629e-1") || data.contains("3.829249225480263"));
    }

    #[test]
    fn csv_quotes_embedded_commas() {
        let mut r = row("point", None);
        r.label = "concentration plus, C=100".into();
        let csv = to_csv(&[r]).unwrap();
        assert!(csv.contains("\"concentration plus, C=100\""));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let rows = vec![row("a", Some(-0.5)), row("b", None)];
        let text = to_json(&rows).unwrap();
        let back = parse_json(&text).unwrap();
        assert_eq!(rows, back);
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let mut bad = row("nan", Some(0.0));
        bad.value = f64::NAN;
        assert!(matches!(to_csv(&[bad.clone()]), Err(Error::NumericIntegrity(_))));
        assert!(matches!(to_json(&[bad]), Err(Error::NumericIntegrity(_))));
    }

    #[test]
    fn sorting_is_canonical() {
        let mut rows = vec![row("b", Some(1.0)), row("a", None), row("c", Some(-1.0))];
        sort_rows(&mut rows);
        assert_eq!(rows[0].label, "a");
        assert_eq!(rows[1].label, "c");
        assert_eq!(rows[2].label, "b");
    }

    #[test]
    fn write_report_fails_cleanly_on_bad_path() {
        let rows = vec![row("a", None)];
        let path = Path::new("/nonexistent-dir-xyz/report.csv");
        assert!(write_report(&rows, OutputFormat::Csv, path).is_err());
        assert!(!path.exists());
    }

    #[test]
    fn write_report_round_trips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        let rows = vec![row("a", Some(0.25))];
        write_report(&rows, OutputFormat::Json, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(parse_json(&text).unwrap(), rows);
    }
}
