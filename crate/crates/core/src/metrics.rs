//! Per-file rates, dataset aggregates and line-count bins.
//!
//! Rates are kept as exact fractions; percentages are rendered with two
//! decimals, rounding half up, using integer arithmetic only.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{ErrorCategory, ErrorKind, ErrorRecord};
use crate::puml::GroundTruthCounts;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("no files to aggregate")]
    EmptyDataset,
    #[error("invalid bin edges: {0}")]
    InvalidBins(String),
}

/// An exact non-negative fraction with a non-zero denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rate {
    pub num: u64,
    pub den: u64,
}

impl Rate {
    /// `None` when the denominator is zero.
    pub fn new(num: u64, den: u64) -> Option<Rate> {
        (den != 0).then_some(Rate { num, den })
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Percentage in hundredths of a percent, rounded half up
    /// (226/1736 gives 1302, i.e. 13.02%).
    pub fn percent_hundredths(self) -> u64 {
        let (num, den) = (self.num as u128, self.den as u128);
        ((2 * num * 10_000 + den) / (2 * den)) as u64
    }

    /// Two-decimal percentage string, e.g. `"13.02"`.
    pub fn percent_string(self) -> String {
        format_hundredths(self.percent_hundredths())
    }

    pub fn percent_f64(self) -> f64 {
        self.percent_hundredths() as f64 / 100.0
    }
}

pub(crate) fn format_hundredths(h: u64) -> String {
    format!("{}.{:02}", h / 100, h % 100)
}

/// Renders an optional rate as a percentage, `"n/a"` when undefined.
pub fn percent_or_na(rate: Option<Rate>) -> String {
    rate.map_or_else(|| "n/a".to_string(), Rate::percent_string)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryCell {
    pub insertions: u64,
    pub deletions: u64,
    pub substitutions: u64,
    pub gt_total: u64,
}

impl CategoryCell {
    pub fn count(&self, kind: ErrorKind) -> u64 {
        match kind {
            ErrorKind::Insertion => self.insertions,
            ErrorKind::Deletion => self.deletions,
            ErrorKind::Substitution => self.substitutions,
        }
    }

    fn count_mut(&mut self, kind: ErrorKind) -> &mut u64 {
        match kind {
            ErrorKind::Insertion => &mut self.insertions,
            ErrorKind::Deletion => &mut self.deletions,
            ErrorKind::Substitution => &mut self.substitutions,
        }
    }

    pub fn errors(&self) -> u64 {
        self.insertions + self.deletions + self.substitutions
    }

    /// Count divided by the ground-truth total; absent when the total is 0.
    pub fn rate(&self, kind: ErrorKind) -> Option<Rate> {
        Rate::new(self.count(kind), self.gt_total)
    }

    /// All three kinds accumulated over the ground-truth total.
    pub fn accumulated_rate(&self) -> Option<Rate> {
        Rate::new(self.errors(), self.gt_total)
    }

    pub fn merge(&mut self, other: &CategoryCell) {
        self.insertions += other.insertions;
        self.deletions += other.deletions;
        self.substitutions += other.substitutions;
        self.gt_total += other.gt_total;
    }
}

pub type Cells = BTreeMap<ErrorCategory, CategoryCell>;

fn empty_cells() -> Cells {
    ErrorCategory::ALL
        .into_iter()
        .map(|c| (c, CategoryCell::default()))
        .collect()
}

fn merge_cells(into: &mut Cells, from: &Cells) {
    for (cat, cell) in from {
        into.entry(*cat).or_default().merge(cell);
    }
}

pub fn gt_total(counts: &GroundTruthCounts, category: ErrorCategory) -> usize {
    match category {
        ErrorCategory::Node => counts.node_count,
        ErrorCategory::EdgeDirection | ErrorCategory::EdgeType => counts.arrow_count,
        ErrorCategory::Message => counts.message_count,
        ErrorCategory::Note => counts.note_count,
        ErrorCategory::Group => counts.group_count,
        ErrorCategory::Box => counts.box_count,
        ErrorCategory::Participant => counts.participant_count,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileMetrics {
    pub file: String,
    pub cells: Cells,
    pub gt_counts: GroundTruthCounts,
    /// Relevant ground-truth statements; decides the line-count bin.
    pub gt_line_count: usize,
    pub error_count: u64,
    pub element_count: u64,
    pub errors: Vec<ErrorRecord>,
}

impl FileMetrics {
    /// Errors per ground-truth element; absent for a script with no elements.
    pub fn error_density(&self) -> Option<Rate> {
        Rate::new(self.error_count, self.element_count)
    }
}

pub fn compute_file_metrics(
    errors: &[ErrorRecord],
    gt_counts: &GroundTruthCounts,
    file: &str,
) -> FileMetrics {
    let mut cells = empty_cells();
    for (cat, cell) in cells.iter_mut() {
        cell.gt_total = gt_total(gt_counts, *cat) as u64;
    }
    for e in errors {
        *cells.entry(e.category).or_default().count_mut(e.kind) += 1;
    }
    FileMetrics {
        file: file.to_string(),
        cells,
        gt_counts: *gt_counts,
        gt_line_count: gt_counts.relevant_line_count,
        error_count: errors.len() as u64,
        element_count: gt_counts.element_total() as u64,
        errors: errors.to_vec(),
    }
}

/// Upper bin edges (inclusive), strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinEdges(Vec<usize>);

impl Default for BinEdges {
    fn default() -> Self {
        BinEdges(vec![20, 30, 40, 50, 100])
    }
}

impl BinEdges {
    pub fn new(edges: Vec<usize>) -> Result<Self, MetricsError> {
        if edges.is_empty() {
            return Err(MetricsError::InvalidBins("no edges".into()));
        }
        if edges[0] == 0 {
            return Err(MetricsError::InvalidBins("edges must be positive".into()));
        }
        if let Some(w) = edges.windows(2).find(|w| w[0] >= w[1]) {
            return Err(MetricsError::InvalidBins(format!(
                "edges must strictly increase ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(BinEdges(edges))
    }

    pub fn edges(&self) -> &[usize] {
        &self.0
    }

    /// Bin position for a line count; `edges().len()` is the overflow bin.
    pub fn index_of(&self, lines: usize) -> usize {
        self.0.partition_point(|&edge| edge < lines)
    }

    pub fn label(&self, index: usize) -> String {
        match index {
            0 => format!("1-{}", self.0[0]),
            i if i < self.0.len() => format!("{}-{}", self.0[i - 1] + 1, self.0[i]),
            _ => format!(">{}", self.0[self.0.len() - 1]),
        }
    }
}

impl FromStr for BinEdges {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let edges = s
            .split(',')
            .map(|e| {
                e.trim()
                    .parse::<usize>()
                    .map_err(|_| MetricsError::InvalidBins(format!("not a line count: {:?}", e.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        BinEdges::new(edges)
    }
}

impl fmt::Display for BinEdges {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinSummary {
    pub label: String,
    pub file_count: usize,
    pub cells: Cells,
}

/// Groups files by ground-truth line count. Every configured bin is listed
/// even when empty; the overflow bin only when some file lands in it.
pub fn bin_by_lines(files: &[FileMetrics], edges: &BinEdges) -> Vec<BinSummary> {
    let mut bins: Vec<BinSummary> = (0..=edges.edges().len())
        .map(|i| BinSummary {
            label: edges.label(i),
            file_count: 0,
            cells: empty_cells(),
        })
        .collect();
    for f in files {
        let bin = &mut bins[edges.index_of(f.gt_line_count)];
        bin.file_count += 1;
        merge_cells(&mut bin.cells, &f.cells);
    }
    if bins.last().is_some_and(|b| b.file_count == 0) {
        bins.pop();
    }
    bins
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub evaluated: usize,
    /// Ground-truth files without a candidate; skipped.
    pub missing_candidates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetReport {
    pub per_file: Vec<FileMetrics>,
    /// Micro-averaged: counts and totals summed over files.
    pub aggregate: Cells,
    pub bins: Vec<BinSummary>,
    pub bin_edges: BinEdges,
    pub coverage: Coverage,
}

impl DatasetReport {
    pub fn error_count(&self) -> u64 {
        self.per_file.iter().map(|f| f.error_count).sum()
    }

    pub fn element_count(&self) -> u64 {
        self.per_file.iter().map(|f| f.element_count).sum()
    }

    pub fn error_density(&self) -> Option<Rate> {
        Rate::new(self.error_count(), self.element_count())
    }

    /// Largest defined aggregate rate over all categories and kinds.
    pub fn max_rate(&self) -> Option<Rate> {
        self.aggregate
            .values()
            .flat_map(|cell| ErrorKind::ALL.map(|k| cell.rate(k)))
            .flatten()
            .max_by(|a, b| (a.num as u128 * b.den as u128).cmp(&(b.num as u128 * a.den as u128)))
    }
}

pub fn aggregate(files: Vec<FileMetrics>, edges: &BinEdges) -> Result<DatasetReport, MetricsError> {
    if files.is_empty() {
        return Err(MetricsError::EmptyDataset);
    }
    let mut total = empty_cells();
    for f in &files {
        merge_cells(&mut total, &f.cells);
    }
    let bins = bin_by_lines(&files, edges);
    Ok(DatasetReport {
        coverage: Coverage {
            evaluated: files.len(),
            missing_candidates: Vec::new(),
        },
        per_file: files,
        aggregate: total,
        bins,
        bin_edges: edges.clone(),
    })
}
