//! Structural difference metrics for PlantUML sequence diagrams.
//!
//! The pipeline compares a ground-truth `.puml` script with a candidate
//! (typically produced by a vision-language model):
//!
//! 1. [`puml`] parses both scripts into classified statements and counts the
//!    ground-truth components.
//! 2. [`diff`] produces removed/added line deltas, either natively (Myers) or
//!    from an externally produced unified diff.
//! 3. [`alignment`] pairs removed and added statements of the same kind by
//!    minimizing total Levenshtein distance.
//! 4. [`classify`] turns pairs and unpaired statements into categorized
//!    insertion, deletion and substitution records.
//! 5. [`metrics`] converts the records into per-file rates, dataset
//!    aggregates and line-count bins, which [`report`] renders.
//!
//! [`pipeline`] wires the stages together for single pairs, directory trees,
//! manifests and patch files.

pub mod alignment;
pub mod classify;
pub mod diff;
pub mod metrics;
pub mod pipeline;
pub mod puml;
pub mod report;

pub use alignment::{assign_pairs, levenshtein, AlignedPair, AlignmentResult};
pub use classify::{classify_pair, classify_unpaired, ErrorCategory, ErrorKind, ErrorRecord, Side};
pub use diff::{line_diff, parse_unified_diff, DeltaKind, FileDiff, LineDelta};
pub use metrics::{
    aggregate, bin_by_lines, compute_file_metrics, BinEdges, CategoryCell, DatasetReport, FileMetrics,
};
pub use pipeline::{EvalOptions, FileEvaluation};
pub use puml::{
    classify_line, count_components, normalize_script, parse_arrow, parse_script, GroundTruthCounts,
    PumlScript, PumlStatement, RuleSet, StatementKind,
};
pub use report::{render, ReportFormat};
