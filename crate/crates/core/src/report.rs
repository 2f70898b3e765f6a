//! Report rendering: summary table, CSV/TSV rows, canonical JSON and
//! plot-ready bin data.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{ErrorCategory, ErrorKind, ErrorRecord};
use crate::metrics::{
    percent_or_na, BinEdges, BinSummary, CategoryCell, Cells, Coverage, DatasetReport, FileMetrics, Rate,
};
use crate::puml::GroundTruthCounts;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReportFormat {
    Json,
    Csv,
    Table,
    Tsv,
}

impl ReportFormat {
    pub const ALL: [ReportFormat; 4] = [
        ReportFormat::Json,
        ReportFormat::Csv,
        ReportFormat::Table,
        ReportFormat::Tsv,
    ];

    pub fn key(self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
            ReportFormat::Table => "table",
            ReportFormat::Tsv => "tsv",
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown report format {0:?} (expected json, csv, table or tsv)")]
pub struct UnknownFormat(pub String);

impl FromStr for ReportFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ReportFormat::ALL
            .into_iter()
            .find(|f| f.key().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownFormat(s.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("invalid report JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid report: {0}")]
    Invalid(String),
}

pub fn render(report: &DatasetReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => render_json(report),
        ReportFormat::Csv => render_rows(report, b','),
        ReportFormat::Tsv => render_rows(report, b'\t'),
        ReportFormat::Table => render_table(&report.aggregate),
    }
}

const TABLE_ROWS: [(&str, Option<ErrorKind>); 4] = [
    ("Ground truth count", None),
    ("Insertion (%)", Some(ErrorKind::Insertion)),
    ("Deletion (%)", Some(ErrorKind::Deletion)),
    ("Substitution (%)", Some(ErrorKind::Substitution)),
];

/// Fixed-width summary table over aggregate cells.
pub fn render_table(cells: &Cells) -> String {
    let label_width = TABLE_ROWS.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    let columns: Vec<(ErrorCategory, usize)> = ErrorCategory::TABLE_ORDER
        .iter()
        .map(|&c| (c, c.table_label().len().max(8)))
        .collect();

    let mut out = format!("{:label_width$}", "");
    for (cat, width) in &columns {
        out.push_str(&format!("  {:>width$}", cat.table_label()));
    }
    out.push('\n');
    for (label, kind) in TABLE_ROWS {
        out.push_str(&format!("{label:label_width$}"));
        for (cat, width) in &columns {
            let cell = cells.get(cat).copied().unwrap_or_default();
            let value = match kind {
                None => cell.gt_total.to_string(),
                Some(k) => percent_or_na(cell.rate(k)),
            };
            out.push_str(&format!("  {value:>width$}"));
        }
        out.push('\n');
    }
    out
}

fn render_rows(report: &DatasetReport, delimiter: u8) -> String {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(Vec::new());
    let mut write = |record: [&str; 7]| writer.write_record(record).expect("writing to memory");
    write([
        "scope", "file", "category", "kind", "count", "gt_total", "percent",
    ]);
    let scoped = report
        .per_file
        .iter()
        .map(|f| ("file", f.file.as_str(), &f.cells))
        .chain(std::iter::once(("aggregate", "", &report.aggregate)));
    for (scope, file, cells) in scoped {
        for cat in ErrorCategory::TABLE_ORDER {
            let cell = cells.get(&cat).copied().unwrap_or_default();
            for kind in ErrorKind::ALL {
                write([
                    scope,
                    file,
                    cat.key(),
                    kind.key(),
                    &cell.count(kind).to_string(),
                    &cell.gt_total.to_string(),
                    &percent_or_na(cell.rate(kind)),
                ]);
            }
        }
    }
    String::from_utf8(writer.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
}

/// `bin_label,category,accumulated_error_percent` rows for the node,
/// message and direction series.
pub fn emit_bin_plot_data(report: &DatasetReport) -> String {
    const PLOTTED: [ErrorCategory; 3] = [
        ErrorCategory::Node,
        ErrorCategory::Message,
        ErrorCategory::EdgeDirection,
    ];
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["bin_label", "category", "accumulated_error_percent"])
        .expect("writing to memory");
    for bin in &report.bins {
        for cat in PLOTTED {
            let cell = bin.cells.get(&cat).copied().unwrap_or_default();
            writer
                .write_record([
                    bin.label.as_str(),
                    cat.key(),
                    &percent_or_na(cell.accumulated_rate()),
                ])
                .expect("writing to memory");
        }
    }
    String::from_utf8(writer.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
}

// Canonical JSON document. Percentages and densities are derived fields:
// they are written for readers and recomputed from counts when parsing.

fn percent(rate: Option<Rate>) -> Option<f64> {
    rate.map(Rate::percent_f64)
}

/// Ratio rounded half up to four decimals.
fn ratio(rate: Option<Rate>) -> Option<f64> {
    rate.map(|r| {
        let (num, den) = (r.num as u128, r.den as u128);
        ((2 * num * 10_000 + den) / (2 * den)) as f64 / 10_000.0
    })
}

#[derive(Serialize, Deserialize)]
struct JsonCell {
    insertions: u64,
    deletions: u64,
    substitutions: u64,
    gt_total: u64,
    #[serde(default, skip_deserializing)]
    insertion_percent: Option<f64>,
    #[serde(default, skip_deserializing)]
    deletion_percent: Option<f64>,
    #[serde(default, skip_deserializing)]
    substitution_percent: Option<f64>,
}

impl From<&CategoryCell> for JsonCell {
    fn from(c: &CategoryCell) -> Self {
        JsonCell {
            insertions: c.insertions,
            deletions: c.deletions,
            substitutions: c.substitutions,
            gt_total: c.gt_total,
            insertion_percent: percent(c.rate(ErrorKind::Insertion)),
            deletion_percent: percent(c.rate(ErrorKind::Deletion)),
            substitution_percent: percent(c.rate(ErrorKind::Substitution)),
        }
    }
}

impl From<&JsonCell> for CategoryCell {
    fn from(c: &JsonCell) -> Self {
        CategoryCell {
            insertions: c.insertions,
            deletions: c.deletions,
            substitutions: c.substitutions,
            gt_total: c.gt_total,
        }
    }
}

type JsonCells = std::collections::BTreeMap<ErrorCategory, JsonCell>;

fn to_json_cells(cells: &Cells) -> JsonCells {
    cells.iter().map(|(k, v)| (*k, v.into())).collect()
}

fn from_json_cells(cells: &JsonCells) -> Cells {
    cells.iter().map(|(k, v)| (*k, v.into())).collect()
}

#[derive(Serialize, Deserialize)]
struct JsonBinCell {
    errors: u64,
    gt_total: u64,
    #[serde(default, skip_deserializing)]
    accumulated_error_percent: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct JsonBin {
    label: String,
    file_count: usize,
    cells: std::collections::BTreeMap<ErrorCategory, JsonCell>,
    #[serde(default, skip_deserializing)]
    accumulated: std::collections::BTreeMap<ErrorCategory, JsonBinCell>,
}

#[derive(Serialize, Deserialize)]
struct JsonFile {
    file: String,
    gt_line_count: usize,
    gt_counts: GroundTruthCounts,
    cells: JsonCells,
    error_count: u64,
    element_count: u64,
    #[serde(default, skip_deserializing)]
    error_density: Option<f64>,
    errors: Vec<ErrorRecord>,
}

#[derive(Serialize, Deserialize)]
struct JsonReport {
    aggregate: JsonCells,
    bin_edges: Vec<usize>,
    bins: Vec<JsonBin>,
    coverage: Coverage,
    error_count: u64,
    element_count: u64,
    #[serde(default, skip_deserializing)]
    error_density: Option<f64>,
    per_file: Vec<JsonFile>,
}

impl From<&DatasetReport> for JsonReport {
    fn from(r: &DatasetReport) -> Self {
        JsonReport {
            aggregate: to_json_cells(&r.aggregate),
            bin_edges: r.bin_edges.edges().to_vec(),
            bins: r
                .bins
                .iter()
                .map(|b| JsonBin {
                    label: b.label.clone(),
                    file_count: b.file_count,
                    cells: to_json_cells(&b.cells),
                    accumulated: b
                        .cells
                        .iter()
                        .map(|(k, c)| {
                            let cell = JsonBinCell {
                                errors: c.errors(),
                                gt_total: c.gt_total,
                                accumulated_error_percent: percent(c.accumulated_rate()),
                            };
                            (*k, cell)
                        })
                        .collect(),
                })
                .collect(),
            coverage: r.coverage.clone(),
            error_count: r.error_count(),
            element_count: r.element_count(),
            error_density: ratio(r.error_density()),
            per_file: r
                .per_file
                .iter()
                .map(|f| JsonFile {
                    file: f.file.clone(),
                    gt_line_count: f.gt_line_count,
                    gt_counts: f.gt_counts,
                    cells: to_json_cells(&f.cells),
                    error_count: f.error_count,
                    element_count: f.element_count,
                    error_density: ratio(f.error_density()),
                    errors: f.errors.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<JsonReport> for DatasetReport {
    type Error = ReportError;

    fn try_from(j: JsonReport) -> Result<Self, Self::Error> {
        let bin_edges = BinEdges::new(j.bin_edges).map_err(|e| ReportError::Invalid(e.to_string()))?;
        Ok(DatasetReport {
            per_file: j
                .per_file
                .into_iter()
                .map(|f| FileMetrics {
                    file: f.file,
                    cells: from_json_cells(&f.cells),
                    gt_counts: f.gt_counts,
                    gt_line_count: f.gt_line_count,
                    error_count: f.error_count,
                    element_count: f.element_count,
                    errors: f.errors,
                })
                .collect(),
            aggregate: from_json_cells(&j.aggregate),
            bins: j
                .bins
                .into_iter()
                .map(|b| BinSummary {
                    label: b.label,
                    file_count: b.file_count,
                    cells: from_json_cells(&b.cells),
                })
                .collect(),
            bin_edges,
            coverage: j.coverage,
        })
    }
}

/// Canonical JSON: keys sorted, counts as integers, percentages as numbers.
pub fn render_json(report: &DatasetReport) -> String {
    // Going through `Value` sorts every object's keys.
    let value = serde_json::to_value(JsonReport::from(report)).expect("report serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
    text.push('\n');
    text
}

/// Parses a report produced by [`render_json`].
pub fn parse_json(text: &str) -> Result<DatasetReport, ReportError> {
    let json: JsonReport = serde_json::from_str(text)?;
    json.try_into()
}

/// Writes `table.txt`, `per_file.csv`, `report.json` and `bins.csv`.
pub fn write_outputs(report: &DatasetReport, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let outputs = [
        ("table.txt", render(report, ReportFormat::Table)),
        ("per_file.csv", render(report, ReportFormat::Csv)),
        ("report.json", render(report, ReportFormat::Json)),
        ("bins.csv", emit_bin_plot_data(report)),
    ];
    let mut written = Vec::new();
    for (name, content) in outputs {
        let path = dir.join(name);
        fs::write(&path, content)?;
        written.push(path);
    }
    Ok(written)
}
