//! End-to-end evaluation: parse, normalize, diff, align, classify, measure.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;
use walkdir::WalkDir;

use crate::alignment::{assign_pairs, DEFAULT_TAU};
use crate::classify::{classify_pair, classify_unpaired, sort_records, ClassifyError, ErrorRecord, Side};
use crate::diff::{line_diff, parse_unified_diff, DiffError, FileDiff, LineDelta};
use crate::metrics::{aggregate, compute_file_metrics, BinEdges, DatasetReport, FileMetrics, MetricsError};
use crate::puml::{
    count_components, normalize_script_logged, parse_script, NormalizationChange, PumlError, PumlScript,
    PumlStatement, RuleSet,
};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{file}: {source}")]
    Parse { file: String, source: PumlError },
    #[error("{file}: {source}")]
    Diff { file: String, source: DiffError },
    #[error("{file}: {source}")]
    Classify { file: String, source: ClassifyError },
    #[error("patch: {0}")]
    Patch(DiffError),
    #[error("patch touches {file}, which is not under {}", gt_dir.display())]
    UnknownPatchFile { file: String, gt_dir: PathBuf },
    #[error("patch lists {file} more than once")]
    DuplicatePatchFile { file: String },
    #[error("manifest {}: {reason}", path.display())]
    Manifest { path: PathBuf, reason: String },
    #[error("invalid tau {0}: must lie in [0, 1]")]
    InvalidTau(f64),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    /// Normalize candidates before comparison (ground truth never is).
    pub normalize: bool,
    pub rules: RuleSet,
    /// Unrelatedness threshold on normalized edit distance.
    pub tau: f64,
    pub bins: BinEdges,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            normalize: true,
            rules: RuleSet::all(),
            tau: DEFAULT_TAU,
            bins: BinEdges::default(),
            jobs: None,
        }
    }
}

impl EvalOptions {
    fn validate(&self) -> Result<(), EvalError> {
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(EvalError::InvalidTau(self.tau));
        }
        Ok(())
    }

    fn prepare_candidate(&self, text: &str) -> (String, Vec<NormalizationChange>) {
        if self.normalize {
            normalize_script_logged(text, &self.rules)
        } else {
            (text.to_string(), Vec::new())
        }
    }
}

/// Result for one ground-truth/candidate pair.
#[derive(Debug, Clone, PartialEq)]
pub struct FileEvaluation {
    pub metrics: FileMetrics,
    pub normalization: Vec<NormalizationChange>,
}

fn read(path: &Path) -> Result<String, EvalError> {
    fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Splits statements into unchanged pairs and changed leftovers.
///
/// A statement is unchanged when every one of its lines maps, in order, onto
/// the lines of a single statement of the other side with the same span and
/// the same text.
fn lift(
    gt: &PumlScript,
    cand: &PumlScript,
    diff: &FileDiff,
) -> Result<(Vec<LineDelta>, Vec<LineDelta>), DiffError> {
    let mapping = diff.line_mapping(&gt.lines, cand.lines.len())?;
    let mut cand_kept = HashSet::new();
    let mut removed = Vec::new();
    for s in &gt.statements {
        let first = mapping.gt_to_cand[s.line_no - 1];
        let twin = first.and_then(|c| cand.statement_at(c + 1)).filter(|t| {
            t.line_no == first.unwrap() + 1
                && t.line_count() == s.line_count()
                && t.text.trim() == s.text.trim()
                && (0..s.line_count())
                    .all(|k| mapping.gt_to_cand[s.line_no - 1 + k] == Some(t.line_no - 1 + k))
        });
        match twin {
            Some(t) => {
                cand_kept.insert(t.line_no);
            }
            None => removed.push(LineDelta::removed(s.text.clone(), s.line_no)),
        }
    }
    let added = cand
        .statements
        .iter()
        .filter(|t| !cand_kept.contains(&t.line_no))
        .map(|t| LineDelta::added(t.text.clone(), t.line_no))
        .collect();
    Ok((removed, added))
}

fn statement(script: &PumlScript, line_no: usize) -> &PumlStatement {
    script
        .statement_at(line_no)
        .filter(|s| s.line_no == line_no)
        .expect("lifted delta refers to a statement start")
}

/// Categorized errors between two parsed scripts given their line diff.
pub fn errors_from_diff(
    gt: &PumlScript,
    cand: &PumlScript,
    diff: &FileDiff,
    label: &str,
    tau: f64,
) -> Result<Vec<ErrorRecord>, EvalError> {
    let (removed, added) = lift(gt, cand, diff).map_err(|source| EvalError::Diff {
        file: label.to_string(),
        source,
    })?;
    let alignment = assign_pairs(&removed, &added, tau);
    let mut records = Vec::new();
    for pair in &alignment.pairs {
        let g = statement(gt, pair.gt_delta.line_no());
        let c = statement(cand, pair.cand_delta.line_no());
        records.extend(classify_pair(g, c, label).map_err(|source| EvalError::Classify {
            file: label.to_string(),
            source,
        })?);
    }
    for d in &alignment.unpaired_removed {
        records.extend(classify_unpaired(
            statement(gt, d.line_no()),
            Side::Removed,
            label,
        ));
    }
    for d in &alignment.unpaired_added {
        records.extend(classify_unpaired(
            statement(cand, d.line_no()),
            Side::Added,
            label,
        ));
    }
    sort_records(&mut records);
    Ok(records)
}

fn parse(label: &str, text: &str) -> Result<PumlScript, EvalError> {
    parse_script(label, text).map_err(|source| EvalError::Parse {
        file: label.to_string(),
        source,
    })
}

fn finish(
    label: &str,
    gt: &PumlScript,
    cand: &PumlScript,
    diff: &FileDiff,
    normalization: Vec<NormalizationChange>,
    options: &EvalOptions,
) -> Result<FileEvaluation, EvalError> {
    for w in gt.warnings.iter().chain(&cand.warnings) {
        log::warn!("{label}: {w}");
    }
    for change in &normalization {
        log::info!(
            "{label}:{}: {} rewrote {:?} to {:?}",
            change.line_no,
            change.rule,
            change.before,
            change.after
        );
    }
    let errors = errors_from_diff(gt, cand, diff, label, options.tau)?;
    let counts = count_components(gt);
    Ok(FileEvaluation {
        metrics: compute_file_metrics(&errors, &counts, label),
        normalization,
    })
}

/// Evaluates one pair of script texts with the native diff.
pub fn evaluate_texts(
    label: &str,
    gt_text: &str,
    cand_text: &str,
    options: &EvalOptions,
) -> Result<FileEvaluation, EvalError> {
    options.validate()?;
    let (cand_text, normalization) = options.prepare_candidate(cand_text);
    let gt = parse(label, gt_text)?;
    let cand = parse(label, &cand_text)?;
    let diff = line_diff(&gt, &cand);
    finish(label, &gt, &cand, &diff, normalization, options)
}

/// Evaluates a ground truth against the candidate described by `diff`.
///
/// The candidate is reconstructed by applying the diff; the diff's own line
/// correspondence drives alignment instead of a native diff.
pub fn evaluate_with_patch(
    label: &str,
    gt_text: &str,
    diff: &FileDiff,
    options: &EvalOptions,
) -> Result<FileEvaluation, EvalError> {
    options.validate()?;
    let gt = parse(label, gt_text)?;
    let cand_lines = diff.apply(&gt.lines).map_err(|source| EvalError::Diff {
        file: label.to_string(),
        source,
    })?;
    let mut cand_text = cand_lines.join("\n");
    if !cand_lines.is_empty() {
        cand_text.push('\n');
    }
    let (cand_text, normalization) = options.prepare_candidate(&cand_text);
    let cand = parse(label, &cand_text)?;
    finish(label, &gt, &cand, diff, normalization, options)
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn report(
    evaluations: Vec<FileEvaluation>,
    missing: Vec<String>,
    options: &EvalOptions,
) -> Result<DatasetReport, EvalError> {
    let files = evaluations.into_iter().map(|e| e.metrics).collect();
    let mut report = aggregate(files, &options.bins)?;
    report.coverage.missing_candidates = missing;
    Ok(report)
}

/// Compares a single pair of files; the report label is the ground-truth
/// file name.
pub fn compare_files(
    gt_path: &Path,
    cand_path: &Path,
    options: &EvalOptions,
) -> Result<DatasetReport, EvalError> {
    let evaluation = evaluate_texts(&file_label(gt_path), &read(gt_path)?, &read(cand_path)?, options)?;
    report(vec![evaluation], Vec::new(), options)
}

/// Sorted `.puml` files under `dir`, as `/`-separated relative paths.
pub fn list_scripts(dir: &Path) -> Result<Vec<String>, EvalError> {
    let mut out = Vec::new();
    for entry in WalkDir::new(dir).follow_links(true) {
        let entry = entry.map_err(|e| EvalError::Io {
            path: e.path().unwrap_or(dir).to_path_buf(),
            source: e
                .into_io_error()
                .unwrap_or_else(|| io::Error::other("directory walk failed")),
        })?;
        let is_puml = entry
            .path()
            .extension()
            .is_some_and(|ext| ext.eq_ignore_ascii_case("puml"));
        if entry.file_type().is_file() && is_puml {
            let rel = entry.path().strip_prefix(dir).expect("walk stays under its root");
            let parts: Vec<String> = rel
                .components()
                .map(|c| c.as_os_str().to_string_lossy().into_owned())
                .collect();
            out.push(parts.join("/"));
        }
    }
    out.sort();
    Ok(out)
}

fn run_parallel<T, R>(
    items: &[T],
    jobs: Option<usize>,
    f: impl Fn(&T) -> Result<R, EvalError> + Sync,
) -> Result<Vec<R>, EvalError>
where
    T: Sync,
    R: Send,
{
    let run = || items.par_iter().map(&f).collect::<Result<Vec<R>, EvalError>>();
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| EvalError::Pool(e.to_string()))?
            .install(run),
        None => run(),
    }
}

struct Job {
    label: String,
    gt: PathBuf,
    cand: PathBuf,
}

fn evaluate_jobs(jobs: Vec<Job>, options: &EvalOptions) -> Result<DatasetReport, EvalError> {
    options.validate()?;
    let (present, missing): (Vec<Job>, Vec<Job>) = jobs.into_iter().partition(|j| j.cand.is_file());
    let missing: Vec<String> = missing
        .into_iter()
        .map(|j| {
            log::warn!("no candidate for {} (expected {})", j.label, j.cand.display());
            j.label
        })
        .collect();
    let evaluations = run_parallel(&present, options.jobs, |job| {
        evaluate_texts(&job.label, &read(&job.gt)?, &read(&job.cand)?, options)
    })?;
    report(evaluations, missing, options)
}

/// Evaluates every `.puml` under `gt_dir` against the file with the same
/// relative path under `cand_dir`. Missing candidates are skipped and listed
/// in the report's coverage section.
pub fn evaluate_dirs(
    gt_dir: &Path,
    cand_dir: &Path,
    options: &EvalOptions,
) -> Result<DatasetReport, EvalError> {
    let jobs = list_scripts(gt_dir)?
        .into_iter()
        .map(|rel| Job {
            gt: gt_dir.join(&rel),
            cand: cand_dir.join(&rel),
            label: rel,
        })
        .collect();
    evaluate_jobs(jobs, options)
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ManifestEntry {
    pub ground_truth: String,
    pub candidate: String,
    pub label: String,
}

/// Reads a `ground_truth,candidate,label` CSV manifest.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>, EvalError> {
    let bad = |reason: String| EvalError::Manifest {
        path: path.to_path_buf(),
        reason,
    };
    let text = read(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["ground_truth", "candidate", "label"] {
        return Err(bad(format!(
            "header must be ground_truth,candidate,label (found {})",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut entries = Vec::new();
    let mut labels = HashSet::new();
    let mut pairs = HashSet::new();
    for row in reader.deserialize::<ManifestEntry>() {
        let entry = row.map_err(|e| bad(e.to_string()))?;
        if entry.label.is_empty() || entry.ground_truth.is_empty() || entry.candidate.is_empty() {
            return Err(bad("empty field".into()));
        }
        if !labels.insert(entry.label.clone()) {
            return Err(bad(format!("duplicate label {:?}", entry.label)));
        }
        if !pairs.insert((entry.ground_truth.clone(), entry.candidate.clone())) {
            return Err(bad(format!(
                "duplicate entry {} / {}",
                entry.ground_truth, entry.candidate
            )));
        }
        entries.push(entry);
    }
    if entries.is_empty() {
        return Err(bad("no entries".into()));
    }
    Ok(entries)
}

/// Evaluates the pairs listed in a manifest; relative paths resolve against
/// the manifest's directory.
pub fn evaluate_manifest(manifest: &Path, options: &EvalOptions) -> Result<DatasetReport, EvalError> {
    let base = manifest.parent().unwrap_or(Path::new("."));
    let jobs = read_manifest(manifest)?
        .into_iter()
        .map(|e| {
            let gt = base.join(&e.ground_truth);
            if !gt.is_file() {
                return Err(EvalError::Io {
                    path: gt,
                    source: io::Error::new(io::ErrorKind::NotFound, "ground truth not found"),
                });
            }
            Ok(Job {
                gt,
                cand: base.join(&e.candidate),
                label: e.label,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    evaluate_jobs(jobs, options)
}

/// Evaluates a unified diff against the ground-truth tree it was made from.
///
/// Every ground-truth file under `gt_dir` is evaluated; files the patch does
/// not mention are unchanged. A patch entry that names a file missing from
/// `gt_dir` is an error.
pub fn evaluate_patch(
    patch_text: &str,
    gt_dir: &Path,
    options: &EvalOptions,
) -> Result<DatasetReport, EvalError> {
    options.validate()?;
    let scripts = list_scripts(gt_dir)?;
    let known: HashSet<&str> = scripts.iter().map(String::as_str).collect();
    let mut diffs: BTreeMap<String, FileDiff> = BTreeMap::new();
    for diff in parse_unified_diff(patch_text).map_err(EvalError::Patch)? {
        let name = diff.gt_name.trim_start_matches("./").to_string();
        if !known.contains(name.as_str()) {
            return Err(EvalError::UnknownPatchFile {
                file: name,
                gt_dir: gt_dir.to_path_buf(),
            });
        }
        if diffs.insert(name.clone(), diff).is_some() {
            return Err(EvalError::DuplicatePatchFile { file: name });
        }
    }
    let evaluations = run_parallel(&scripts, options.jobs, |rel| {
        let gt_text = read(&gt_dir.join(rel))?;
        match diffs.get(rel) {
            Some(diff) => evaluate_with_patch(rel, &gt_text, diff, options),
            None => evaluate_texts(rel, &gt_text, &gt_text, options),
        }
    })?;
    report(evaluations, Vec::new(), options)
}
