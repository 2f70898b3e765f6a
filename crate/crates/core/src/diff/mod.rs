//! Line deltas between a ground-truth and a candidate script.
//!
//! Deltas come either from the native Myers diff ([`line_diff`]) or from an
//! ingested unified diff ([`parse_unified_diff`]). Both produce [`FileDiff`]s
//! whose removed/added lines carry 1-based line numbers on their own side.

mod myers;
mod unified;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::puml::PumlScript;

pub use myers::{diff_lines, EditOp};
pub use unified::parse_unified_diff;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiffError {
    #[error("malformed patch at line {line_no}: {reason}")]
    MalformedPatch { line_no: usize, reason: String },
    #[error("diff does not apply to {file}: {reason}")]
    Mismatch { file: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaKind {
    Removed,
    Added,
    Context,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineDelta {
    pub kind: DeltaKind,
    pub text: String,
    pub gt_line_no: Option<usize>,
    pub cand_line_no: Option<usize>,
}

impl LineDelta {
    pub fn removed(text: impl Into<String>, gt_line_no: usize) -> Self {
        LineDelta {
            kind: DeltaKind::Removed,
            text: text.into(),
            gt_line_no: Some(gt_line_no),
            cand_line_no: None,
        }
    }

    pub fn added(text: impl Into<String>, cand_line_no: usize) -> Self {
        LineDelta {
            kind: DeltaKind::Added,
            text: text.into(),
            gt_line_no: None,
            cand_line_no: Some(cand_line_no),
        }
    }

    pub fn context(text: impl Into<String>, gt_line_no: usize, cand_line_no: usize) -> Self {
        LineDelta {
            kind: DeltaKind::Context,
            text: text.into(),
            gt_line_no: Some(gt_line_no),
            cand_line_no: Some(cand_line_no),
        }
    }

    /// Line number on the delta's own side (ground truth for removed and
    /// context lines, candidate for added lines).
    pub fn line_no(&self) -> usize {
        match self.kind {
            DeltaKind::Added => self.cand_line_no,
            _ => self.gt_line_no,
        }
        .expect("delta line number invariant")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDiff {
    pub gt_name: String,
    pub cand_name: String,
    pub deltas: Vec<LineDelta>,
}

/// Lines are equal when they match after right-trimming.
pub(crate) fn same_line(a: &str, b: &str) -> bool {
    a.trim_end() == b.trim_end()
}

/// Correspondence between unchanged lines of both sides (0-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineMapping {
    pub gt_to_cand: Vec<Option<usize>>,
    pub cand_to_gt: Vec<Option<usize>>,
}

impl FileDiff {
    pub fn removed(&self) -> impl Iterator<Item = &LineDelta> {
        self.deltas.iter().filter(|d| d.kind == DeltaKind::Removed)
    }

    pub fn added(&self) -> impl Iterator<Item = &LineDelta> {
        self.deltas.iter().filter(|d| d.kind == DeltaKind::Added)
    }

    pub fn has_changes(&self) -> bool {
        self.deltas.iter().any(|d| d.kind != DeltaKind::Context)
    }

    /// Walks the deltas over the full ground-truth text. Lines not covered by
    /// any delta are implicit context. Calls `on_pair` for every unchanged
    /// (gt, cand) pair and `on_added` for every added line, both 0-based.
    fn walk(
        &self,
        gt_lines: &[String],
        mut on_pair: impl FnMut(usize, usize),
        mut on_added: impl FnMut(usize, &LineDelta),
    ) -> Result<usize, DiffError> {
        let mismatch = |reason: String| DiffError::Mismatch {
            file: self.gt_name.clone(),
            reason,
        };
        let (mut g, mut c) = (0usize, 0usize);
        for delta in &self.deltas {
            match delta.kind {
                DeltaKind::Removed | DeltaKind::Context => {
                    let target = delta
                        .gt_line_no
                        .ok_or_else(|| mismatch("delta without gt line".into()))?;
                    if target == 0 || target - 1 < g {
                        return Err(mismatch(format!("ground-truth line {target} out of order")));
                    }
                    while g < target - 1 {
                        if g >= gt_lines.len() {
                            return Err(mismatch(format!("ground truth has no line {target}")));
                        }
                        on_pair(g, c);
                        g += 1;
                        c += 1;
                    }
                    let Some(actual) = gt_lines.get(g) else {
                        return Err(mismatch(format!("ground truth has no line {target}")));
                    };
                    if !same_line(actual, &delta.text) {
                        return Err(mismatch(format!(
                            "line {target} is {actual:?}, diff expects {:?}",
                            delta.text
                        )));
                    }
                    if delta.kind == DeltaKind::Context {
                        on_pair(g, c);
                        c += 1;
                    }
                    g += 1;
                }
                DeltaKind::Added => {
                    let target = delta
                        .cand_line_no
                        .ok_or_else(|| mismatch("added delta without candidate line".into()))?;
                    if target == 0 || target - 1 < c {
                        return Err(mismatch(format!("candidate line {target} out of order")));
                    }
                    while c < target - 1 {
                        if g >= gt_lines.len() {
                            return Err(mismatch(format!("cannot reach candidate line {target}")));
                        }
                        on_pair(g, c);
                        g += 1;
                        c += 1;
                    }
                    on_added(c, delta);
                    c += 1;
                }
            }
        }
        while g < gt_lines.len() {
            on_pair(g, c);
            g += 1;
            c += 1;
        }
        Ok(c)
    }

    /// Reconstructs the candidate lines from the ground truth.
    pub fn apply(&self, gt_lines: &[String]) -> Result<Vec<String>, DiffError> {
        let context_text: HashMap<usize, &str> = self
            .deltas
            .iter()
            .filter(|d| d.kind == DeltaKind::Context)
            .filter_map(|d| Some((d.gt_line_no?, d.text.as_str())))
            .collect();
        // Both callbacks fire in increasing candidate order.
        let mut out = Vec::new();
        let out_cell = std::cell::RefCell::new(&mut out);
        self.walk(
            gt_lines,
            |g, _| {
                let text = context_text.get(&(g + 1)).copied().unwrap_or(&gt_lines[g]);
                out_cell.borrow_mut().push(text.to_string());
            },
            |_, d| out_cell.borrow_mut().push(d.text.clone()),
        )?;
        Ok(out)
    }

    /// Full line correspondence implied by the diff.
    pub fn line_mapping(&self, gt_lines: &[String], cand_len: usize) -> Result<LineMapping, DiffError> {
        let mut gt_to_cand = vec![None; gt_lines.len()];
        let mut pairs = Vec::new();
        let produced = self.walk(gt_lines, |g, c| pairs.push((g, c)), |_, _| {})?;
        if produced != cand_len {
            return Err(DiffError::Mismatch {
                file: self.gt_name.clone(),
                reason: format!("diff yields {produced} candidate lines, candidate has {cand_len}"),
            });
        }
        let mut cand_to_gt = vec![None; cand_len];
        for (g, c) in pairs {
            gt_to_cand[g] = Some(c);
            cand_to_gt[c] = Some(g);
        }
        Ok(LineMapping {
            gt_to_cand,
            cand_to_gt,
        })
    }

    /// Serializes as a unified diff with `context` lines around each hunk.
    pub fn to_unified(&self, context: usize) -> String {
        unified::to_unified(self, context)
    }
}

/// Native line diff between two parsed scripts.
///
/// The edit script is minimal (shortest edit script over right-trimmed
/// lines). Swapping the operands yields the exact transpose.
pub fn line_diff(gt: &PumlScript, cand: &PumlScript) -> FileDiff {
    diff_lines(&gt.source_name, &cand.source_name, &gt.lines, &cand.lines)
}
