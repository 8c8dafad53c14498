//! CSV ingestion, the bundled natural-gas dataset and report documents.
//!
//! Input CSV files are either a single column of values (optionally with a
//! header naming the series) or a label column followed by one value column
//! per series, with a header row. A blank cell ends its series.
//!
//! Reports are written either as one JSON document or as one CSV file per
//! table inside an output directory. Numbers use the shortest decimal that
//! round-trips to the same `f64`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{AlphaHistogram, RollingReport, SummaryRow, TscvReport};
use crate::order_search::SearchResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedSeries {
    pub name: String,
    pub labels: Option<Vec<String>>,
    pub values: Vec<f64>,
}

impl NamedSeries {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        NamedSeries {
            name: name.into(),
            labels: None,
            values,
        }
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels
            .as_ref()
            .and_then(|l| l.get(i))
            .map(String::as_str)
    }
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<NamedSeries>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text)
}

fn parse_number(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn parse_csv(text: &str) -> Result<Vec<NamedSeries>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<(u64, Vec<String>)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let cells: Vec<String> = record.iter().map(|c| c.trim().to_string()).collect();
        if cells.iter().all(|c| c.is_empty()) {
            continue;
        }
        rows.push((line, cells));
    }
    let Some((first_line, first)) = rows.first() else {
        return Err(Error::Parse {
            line: 1,
            message: "no data rows".into(),
        });
    };

    let has_header = first
        .iter()
        .any(|c| !c.is_empty() && parse_number(c).is_none());
    let width = first.len();
    let body = if has_header { &rows[1..] } else { &rows[..] };

    if width == 1 {
        let name = if has_header {
            first[0].clone()
        } else {
            String::new()
        };
        let mut values = Vec::new();
        for (line, cells) in body {
            let cell = cells.first().map(String::as_str).unwrap_or("");
            if cell.is_empty() {
                break;
            }
            values.push(parse_cell(cell, *line, &name)?);
        }
        return Ok(vec![NamedSeries {
            name,
            labels: None,
            values,
        }]);
    }

    if !has_header {
        return Err(Error::Parse {
            line: *first_line,
            message: format!("{width} columns but no header row naming the series"),
        });
    }

    let names = &first[1..];
    let mut series: Vec<NamedSeries> = names
        .iter()
        .map(|n| NamedSeries {
            name: n.clone(),
            labels: Some(Vec::new()),
            values: Vec::new(),
        })
        .collect();
    let mut ended = vec![false; names.len()];
    for (line, cells) in body {
        if cells.len() > width {
            return Err(Error::Parse {
                line: *line,
                message: format!("expected at most {width} cells, found {}", cells.len()),
            });
        }
        let label = cells.first().cloned().unwrap_or_default();
        for (j, s) in series.iter_mut().enumerate() {
            let cell = cells.get(j + 1).map(String::as_str).unwrap_or("");
            if ended[j] || cell.is_empty() {
                ended[j] = true;
                continue;
            }
            s.values.push(parse_cell(cell, *line, &s.name)?);
            if let Some(labels) = s.labels.as_mut() {
                labels.push(label.clone());
            }
        }
    }
    Ok(series)
}

fn parse_cell(cell: &str, line: u64, series: &str) -> Result<f64> {
    parse_number(cell).ok_or_else(|| Error::Parse {
        line,
        message: if series.is_empty() {
            format!("cell '{cell}' is not a number")
        } else {
            format!("cell '{cell}' in series '{series}' is not a number")
        },
    })
}

/// Serializes series as a label column plus one column per series.
pub fn write_series_csv(series: &[NamedSeries]) -> String {
    let len = series.iter().map(|s| s.values.len()).max().unwrap_or(0);
    let mut out = String::from("label");
    for s in series {
        out.push(',');
        out.push_str(&escape(&s.name));
    }
    out.push('\n');
    for i in 0..len {
        let label = series
            .iter()
            .find_map(|s| s.label(i))
            .map_or_else(|| (i + 1).to_string(), escape);
        out.push_str(&label);
        for s in series {
            out.push(',');
            if let Some(v) = s.values.get(i) {
                out.push_str(&format_number(*v));
            }
        }
        out.push('\n');
    }
    out
}

const NG_YEARS: [&str; 9] = [
    "2008", "2009", "2010", "2011", "2012", "2013", "2014", "2015", "2016",
];

const NG_PRODUCTION: [(&str, [f64; 9]); 11] = [
    (
        "UAE",
        [50.2, 48.8, 51.3, 52.3, 54.3, 54.6, 54.2, 60.2, 61.9],
    ),
    (
        "Brazil",
        [14.0, 11.9, 14.6, 16.7, 19.3, 21.3, 22.7, 23.1, 23.5],
    ),
    (
        "Bolivia",
        [14.3, 12.3, 14.2, 15.6, 17.8, 20.3, 21.0, 20.3, 19.7],
    ),
    ("Denmark", [10.0, 8.4, 8.2, 6.6, 5.7, 4.8, 4.6, 4.6, 4.5]),
    (
        "Netherlands",
        [66.5, 62.7, 70.5, 64.1, 63.8, 68.6, 57.9, 43.3, 40.2],
    ),
    (
        "Qatar",
        [77.0, 89.3, 131.2, 145.3, 157.0, 177.6, 174.1, 178.5, 181.2],
    ),
    (
        "Nigeria",
        [36.2, 26.0, 37.3, 40.6, 43.3, 36.2, 45.0, 50.1, 44.9],
    ),
    (
        "Turkmenistan",
        [66.1, 36.4, 42.4, 59.5, 62.3, 62.3, 67.1, 69.6, 66.8],
    ),
    (
        "Brunei",
        [12.2, 11.4, 12.3, 12.8, 12.6, 12.2, 11.9, 11.6, 11.2],
    ),
    ("Italy", [8.4, 7.3, 7.6, 7.7, 7.8, 7.0, 6.5, 6.2, 5.3]),
    (
        "India",
        [30.5, 37.6, 49.3, 44.5, 38.9, 32.1, 30.5, 29.3, 27.6],
    ),
];

/// Annual natural gas production (10⁹ m³) of 11 countries, 2008–2016.
pub fn bundled_ng_dataset() -> Vec<NamedSeries> {
    NG_PRODUCTION
        .iter()
        .map(|(name, values)| NamedSeries {
            name: name.to_string(),
            labels: Some(NG_YEARS.iter().map(|y| y.to_string()).collect()),
            values: values.to_vec(),
        })
        .collect()
}

/// Table cell: numbers are kept as `f64`, everything else as text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Number(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Number(v) => format_number(*v),
            Cell::Text(s) => escape(s),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Number(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Number(v as f64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Shortest round-trip decimal, switching to exponent form for very small or
/// very large magnitudes.
fn format_number(v: f64) -> String {
    let m = v.abs();
    if m == 0.0 || !m.is_finite() || (1e-5..1e16).contains(&m) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn escape(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self
            .columns
            .iter()
            .map(|c| escape(c))
            .collect::<Vec<_>>()
            .join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::render).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportDocument {
    pub metadata: BTreeMap<String, String>,
    pub tables: Vec<Table>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidArgument(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }
}

pub const SUMMARY_COLUMNS: [&str; 9] = [
    "model", "phase", "mae", "mae_std", "mse", "mse_std", "mape", "mape_std", "n",
];

pub fn summary_row(model: &str, phase: &str, s: &crate::metrics::ErrorSummary) -> Vec<Cell> {
    vec![
        model.into(),
        phase.into(),
        s.mae.into(),
        s.mae_std.into(),
        s.mse.into(),
        s.mse_std.into(),
        s.mape.into(),
        s.mape_std.into(),
        s.n.into(),
    ]
}

fn summary_table(name: String, rows: &[SummaryRow]) -> Table {
    let mut table = Table::new(name, &SUMMARY_COLUMNS);
    for r in rows {
        table.push(summary_row(&r.model, &r.phase, &r.summary));
    }
    table
}

fn skip_table(name: String, skips: &[crate::evaluation::SkipRecord]) -> Table {
    let mut table = Table::new(name, &["model", "location", "reason"]);
    for s in skips {
        table.push(vec![
            s.model.as_str().into(),
            s.location.as_str().into(),
            s.reason.as_str().into(),
        ]);
    }
    table
}

fn join_values(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format_number(*v))
        .collect::<Vec<_>>()
        .join(" ")
}

fn prefixed(prefix: &str, name: &str) -> String {
    if prefix.is_empty() {
        name.to_string()
    } else {
        format!("{prefix}_{name}")
    }
}

impl ReportDocument {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Appends the summary, per-origin and skip tables of a rolling report,
    /// with table names prefixed by `prefix` when it is non-empty.
    pub fn add_rolling(&mut self, prefix: &str, report: &RollingReport) {
        self.tables.push(summary_table(
            prefixed(prefix, "summary"),
            &report.summaries,
        ));
        let mut origins = Table::new(
            prefixed(prefix, "origins"),
            &[
                "model",
                "origin",
                "alpha_star",
                "effective_p",
                "predictions",
                "actual",
            ],
        );
        for o in &report.origins {
            origins.push(vec![
                o.model.as_str().into(),
                o.origin.into(),
                o.alpha_star.into(),
                o.effective_p.into(),
                join_values(&o.predictions).into(),
                join_values(&o.actual).into(),
            ]);
        }
        self.tables.push(origins);
        self.tables
            .push(skip_table(prefixed(prefix, "skipped"), &report.skipped));
    }

    /// Appends the summary, per-subcase and skip tables of a cross-validation
    /// report.
    pub fn add_tscv(&mut self, prefix: &str, report: &TscvReport) {
        self.tables.push(summary_table(
            prefixed(prefix, "summary"),
            &report.summaries,
        ));
        let mut subcases = Table::new(
            prefixed(prefix, "subcases"),
            &[
                "model",
                "start",
                "train_len",
                "horizon",
                "alpha_star",
                "effective_p",
                "fitting_mape",
                "prediction_mape",
                "predictions",
            ],
        );
        for r in &report.subcases {
            subcases.push(vec![
                r.model.as_str().into(),
                r.subcase.start.into(),
                r.subcase.train_len.into(),
                r.subcase.horizon.into(),
                r.alpha_star.into(),
                r.effective_p.into(),
                r.fitting.map(|s| s.mape).into(),
                r.prediction.mape.into(),
                join_values(&r.predictions).into(),
            ]);
        }
        self.tables.push(subcases);
        self.tables
            .push(skip_table(prefixed(prefix, "skipped"), &report.skipped));
    }

    pub fn add_alpha_histogram(&mut self, name: &str, model: &str, hist: &AlphaHistogram) {
        let mut table = Table::new(name, &["model", "bin", "count", "proportion"]);
        for b in &hist.bins {
            table.push(vec![
                model.into(),
                b.label.as_str().into(),
                b.count.into(),
                b.proportion.into(),
            ]);
        }
        match self.tables.iter_mut().find(|t| t.name == name) {
            Some(existing) => existing.rows.extend(table.rows),
            None => self.tables.push(table),
        }
    }

    pub fn add_search_trace(&mut self, name: &str, result: &SearchResult) {
        let mut table = Table::new(name, &["alpha", "mape", "failure"]);
        for t in &result.trace {
            table.push(vec![
                t.alpha.into(),
                t.mape.into(),
                t.failure.clone().into(),
            ]);
        }
        self.tables.push(table);
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// JSON: `path` is the output file. CSV: `path` is a directory that
    /// receives `<table>.csv` per table.
    pub fn write(&self, format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        match format {
            ReportFormat::Json => {
                let mut text = self.to_json()?;
                text.push('\n');
                if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
                }
                fs::write(path, text).map_err(|e| Error::io(path, e))
            }
            ReportFormat::Csv => {
                fs::create_dir_all(path).map_err(|e| Error::io(path, e))?;
                for table in &self.tables {
                    let file = path.join(format!("{}.csv", table.name));
                    fs::write(&file, table.to_csv()).map_err(|e| Error::io(&file, e))?;
                }
                if !self.metadata.is_empty() {
                    let mut meta = Table::new("metadata", &["key", "value"]);
                    for (k, v) in &self.metadata {
                        meta.push(vec![k.as_str().into(), v.as_str().into()]);
                    }
                    let file = path.join("metadata.csv");
                    fs::write(&file, meta.to_csv()).map_err(|e| Error::io(&file, e))?;
                }
                Ok(())
            }
        }
    }
}

/// Writes a report document; see [`ReportDocument::write`].
pub fn write_report(
    report: &ReportDocument,
    format: ReportFormat,
    path: impl AsRef<Path>,
) -> Result<()> {
    report.write(format, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::ErrorSummary;

    #[test]
    fn numbers_render_shortest_round_trip() {
        for (v, text) in [
            (0.0, "0"),
            (1.0, "1"),
            (-58.39, "-58.39"),
            (1e-5, "0.00001"),
            (8.141635513917814e-16, "8.141635513917814e-16"),
            (2e16, "2e16"),
        ] {
            assert_eq!(format_number(v), text);
            assert_eq!(text.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn labelled_csv() {
        let s = parse_csv("year,UAE\n2008,50.2\n2009,48.8").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].name, "UAE");
        assert_eq!(s[0].values, vec![50.2, 48.8]);
        assert_eq!(
            s[0].labels.as_deref(),
            Some(&["2008".to_string(), "2009".to_string()][..])
        );
    }

    #[test]
    fn headerless_single_column() {
        let s = parse_csv("1\n2\n3\n").unwrap();
        assert_eq!(s, vec![NamedSeries::new("", vec![1.0, 2.0, 3.0])]);
        let s = parse_csv("sales\n1.5\n2.5\n").unwrap();
        assert_eq!(s[0].name, "sales");
        assert_eq!(s[0].values, vec![1.5, 2.5]);
    }

    #[test]
    fn blank_cell_ends_series() {
        let s = parse_csv("t,a,b\n1,1,10\n2,2,\n3,3,\n").unwrap();
        assert_eq!(s[0].values, vec![1.0, 2.0, 3.0]);
        assert_eq!(s[1].values, vec![10.0]);
        assert_eq!(s[1].labels.as_ref().unwrap().len(), 1);
    }

    #[test]
    fn parse_errors_name_line_and_cell() {
        let err = parse_csv("year,UAE\n2008,50.2\n2009,abc\n").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("'abc'"), "{message}");
                assert!(message.contains("UAE"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_csv("1,2\n3,4\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_csv("a,b\n1,2,3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_csv("").is_err());
    }

    #[test]
    fn bundled_dataset_shape() {
        let ng = bundled_ng_dataset();
        assert_eq!(ng.len(), 11);
        assert!(ng.iter().all(|s| s.values.len() == 9));
        let qatar = ng.iter().find(|s| s.name == "Qatar").unwrap();
        assert_eq!(qatar.values[8], 181.2);
        assert_eq!(qatar.label(0), Some("2008"));
        assert_eq!(qatar.label(8), Some("2016"));
    }

    #[test]
    fn series_csv_round_trip() {
        let ng = bundled_ng_dataset();
        let back = parse_csv(&write_series_csv(&ng)).unwrap();
        assert_eq!(back, ng);
    }

    #[test]
    fn summary_csv_line() {
        let s = ErrorSummary {
            mae: 1.0,
            mae_std: 0.0,
            mse: 1.0,
            mse_std: 0.0,
            mape: 10.0,
            mape_std: 0.0,
            n: 1,
        };
        let mut t = Table::new("summary", &SUMMARY_COLUMNS);
        t.push(summary_row("model", "phase", &s));
        assert_eq!(
            t.to_csv(),
            "model,phase,mae,mae_std,mse,mse_std,mape,mape_std,n\nmodel,phase,1,0,1,0,10,0,1\n"
        );
    }

    #[test]
    fn empty_report_is_valid() {
        let doc = ReportDocument::new();
        let json = doc.to_json().unwrap();
        assert_eq!(ReportDocument::from_json(&json).unwrap(), doc);
        let dir = tempfile::tempdir().unwrap();
        doc.write(ReportFormat::Csv, dir.path().join("out"))
            .unwrap();
        assert!(dir.path().join("out").is_dir());
    }

    #[test]
    fn io_errors_carry_path() {
        let err = read_csv("/nonexistent/input.csv").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/input.csv"));
    }
}
