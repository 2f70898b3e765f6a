//! Error taxonomy: turns aligned pairs and unpaired statements into
//! categorized error records.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alignment::levenshtein;
use crate::puml::{ArrowStatement, Element, PumlStatement, StatementKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCategory {
    Node,
    EdgeDirection,
    EdgeType,
    Message,
    Note,
    Group,
    Box,
    Participant,
}

impl ErrorCategory {
    pub const ALL: [ErrorCategory; 8] = [
        ErrorCategory::Node,
        ErrorCategory::EdgeDirection,
        ErrorCategory::EdgeType,
        ErrorCategory::Message,
        ErrorCategory::Note,
        ErrorCategory::Group,
        ErrorCategory::Box,
        ErrorCategory::Participant,
    ];

    /// Column order of the summary table.
    pub const TABLE_ORDER: [ErrorCategory; 8] = [
        ErrorCategory::Node,
        ErrorCategory::EdgeDirection,
        ErrorCategory::EdgeType,
        ErrorCategory::Message,
        ErrorCategory::Box,
        ErrorCategory::Group,
        ErrorCategory::Note,
        ErrorCategory::Participant,
    ];

    pub fn key(self) -> &'static str {
        match self {
            ErrorCategory::Node => "node",
            ErrorCategory::EdgeDirection => "edge_direction",
            ErrorCategory::EdgeType => "edge_type",
            ErrorCategory::Message => "message",
            ErrorCategory::Note => "note",
            ErrorCategory::Group => "group",
            ErrorCategory::Box => "box",
            ErrorCategory::Participant => "participant",
        }
    }

    pub fn table_label(self) -> &'static str {
        match self {
            ErrorCategory::Node => "Node",
            ErrorCategory::EdgeDirection => "Direction change",
            ErrorCategory::EdgeType => "Direction type",
            ErrorCategory::Message => "Message",
            ErrorCategory::Note => "Note",
            ErrorCategory::Group => "Group",
            ErrorCategory::Box => "Box",
            ErrorCategory::Participant => "Participants",
        }
    }
}

impl fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Insertion,
    Deletion,
    Substitution,
}

impl ErrorKind {
    pub const ALL: [ErrorKind; 3] = [ErrorKind::Insertion, ErrorKind::Deletion, ErrorKind::Substitution];

    pub fn key(self) -> &'static str {
        match self {
            ErrorKind::Insertion => "insertion",
            ErrorKind::Deletion => "deletion",
            ErrorKind::Substitution => "substitution",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub category: ErrorCategory,
    pub kind: ErrorKind,
    pub file: String,
    pub gt_line_no: Option<usize>,
    pub cand_line_no: Option<usize>,
    pub detail: String,
    /// Set for node and message substitutions.
    pub edit_distance: Option<usize>,
}

impl ErrorRecord {
    fn sort_key(&self) -> (&str, Option<usize>, Option<usize>, ErrorCategory, ErrorKind, &str) {
        (
            &self.file,
            self.gt_line_no,
            self.cand_line_no,
            self.category,
            self.kind,
            &self.detail,
        )
    }
}

/// Canonical report order: file, line numbers, category, kind, detail.
pub fn sort_records(records: &mut [ErrorRecord]) {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Removed,
    Added,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("cannot compare {gt} at line {gt_line} with {cand} at line {cand_line}")]
    KindMismatch {
        gt: StatementKind,
        cand: StatementKind,
        gt_line: usize,
        cand_line: usize,
    },
}

struct Emitter<'a> {
    file: &'a str,
    gt_line: usize,
    cand_line: usize,
    out: Vec<ErrorRecord>,
}

impl Emitter<'_> {
    fn push(
        &mut self,
        category: ErrorCategory,
        kind: ErrorKind,
        detail: String,
        edit_distance: Option<usize>,
    ) {
        let (gt_line_no, cand_line_no) = match kind {
            ErrorKind::Insertion => (None, Some(self.cand_line)),
            ErrorKind::Deletion => (Some(self.gt_line), None),
            ErrorKind::Substitution => (Some(self.gt_line), Some(self.cand_line)),
        };
        self.out.push(ErrorRecord {
            category,
            kind,
            file: self.file.to_string(),
            gt_line_no,
            cand_line_no,
            detail,
            edit_distance,
        });
    }
}

fn node_substitution(e: &mut Emitter<'_>, gt: &str, cand: &str) {
    if gt != cand {
        e.push(
            ErrorCategory::Node,
            ErrorKind::Substitution,
            format!("node {gt}→{cand}"),
            Some(levenshtein(gt, cand)),
        );
    }
}

fn compare_arrows(e: &mut Emitter<'_>, gt: &ArrowStatement, cand: &ArrowStatement) {
    let before = e.out.len();
    let mut gt_nodes = [gt.source.as_str(), gt.target.as_str()];
    let mut cand_nodes = [cand.source.as_str(), cand.target.as_str()];
    gt_nodes.sort_unstable();
    cand_nodes.sort_unstable();

    if gt_nodes == cand_nodes {
        let flow_changed = match (gt.is_bidirectional(), cand.is_bidirectional()) {
            (false, false) => gt.source != cand.source || gt.target != cand.target,
            (true, true) => false,
            _ => true,
        };
        if flow_changed {
            e.push(
                ErrorCategory::EdgeDirection,
                ErrorKind::Substitution,
                format!(
                    "direction {}→{} vs {}→{}",
                    gt.source, gt.target, cand.source, cand.target
                ),
                None,
            );
        }
    } else if gt.is_bidirectional() || cand.is_bidirectional() {
        // No flow to respect: align endpoints the way that changes the fewest
        // names, then the fewest characters.
        let straight = [(&gt.source, &cand.source), (&gt.target, &cand.target)];
        let crossed = [(&gt.source, &cand.target), (&gt.target, &cand.source)];
        let score = |pairs: &[(&String, &String); 2]| {
            let mismatches = pairs.iter().filter(|(a, b)| a != b).count();
            let chars: usize = pairs.iter().map(|(a, b)| levenshtein(a, b)).sum();
            (mismatches, chars)
        };
        let chosen = if score(&crossed) < score(&straight) {
            crossed
        } else {
            straight
        };
        for (g, c) in chosen {
            node_substitution(e, g, c);
        }
    } else {
        node_substitution(e, &gt.source, &cand.source);
        node_substitution(e, &gt.target, &cand.target);
    }

    if gt.style != cand.style {
        e.push(
            ErrorCategory::EdgeType,
            ErrorKind::Substitution,
            format!("type {}→{}", gt.style, cand.style),
            None,
        );
    }

    match (&gt.message, &cand.message) {
        (Some(g), Some(c)) if g != c => e.push(
            ErrorCategory::Message,
            ErrorKind::Substitution,
            format!("message {g:?}→{c:?}"),
            Some(levenshtein(g, c)),
        ),
        (Some(g), None) => e.push(
            ErrorCategory::Message,
            ErrorKind::Deletion,
            format!("message {g:?}"),
            None,
        ),
        (None, Some(c)) => e.push(
            ErrorCategory::Message,
            ErrorKind::Insertion,
            format!("message {c:?}"),
            None,
        ),
        _ => {}
    }

    if gt.color != cand.color && e.out.len() > before {
        let show = |c: &Option<String>| c.clone().unwrap_or_else(|| "none".into());
        e.out[before]
            .detail
            .push_str(&format!(" (color {}→{})", show(&gt.color), show(&cand.color)));
    }
}

/// Errors between two paired statements of the same kind.
pub fn classify_pair(
    gt: &PumlStatement,
    cand: &PumlStatement,
    file: &str,
) -> Result<Vec<ErrorRecord>, ClassifyError> {
    let mut e = Emitter {
        file,
        gt_line: gt.line_no,
        cand_line: cand.line_no,
        out: Vec::new(),
    };
    match (&gt.element, &cand.element) {
        (Element::Arrow(g), Element::Arrow(c)) => compare_arrows(&mut e, g, c),
        (Element::Note(g), Element::Note(c)) => {
            if g.position != c.position || g.anchors != c.anchors || g.body.trim() != c.body.trim() {
                e.push(ErrorCategory::Note, ErrorKind::Substitution, "note".into(), None);
            }
        }
        (Element::Group(g), Element::Group(c)) => {
            if g.keyword != c.keyword || g.label != c.label {
                e.push(
                    ErrorCategory::Group,
                    ErrorKind::Substitution,
                    "group".into(),
                    None,
                );
            }
        }
        (Element::Box(g), Element::Box(c)) => {
            if g.label != c.label {
                e.push(ErrorCategory::Box, ErrorKind::Substitution, "box".into(), None);
            }
        }
        (Element::Participant(g), Element::Participant(c)) => {
            if g.keyword != c.keyword || g.name != c.name || g.alias != c.alias {
                e.push(
                    ErrorCategory::Participant,
                    ErrorKind::Substitution,
                    format!("participant {}→{}", g.node_name(), c.node_name()),
                    None,
                );
            }
        }
        _ => {
            return Err(ClassifyError::KindMismatch {
                gt: gt.kind(),
                cand: cand.kind(),
                gt_line: gt.line_no,
                cand_line: cand.line_no,
            })
        }
    }
    Ok(e.out)
}

/// Errors for a statement present on one side only.
pub fn classify_unpaired(stmt: &PumlStatement, side: Side, file: &str) -> Vec<ErrorRecord> {
    let kind = match side {
        Side::Removed => ErrorKind::Deletion,
        Side::Added => ErrorKind::Insertion,
    };
    let mut e = Emitter {
        file,
        gt_line: stmt.line_no,
        cand_line: stmt.line_no,
        out: Vec::new(),
    };
    match &stmt.element {
        Element::Arrow(a) => {
            e.push(ErrorCategory::Node, kind, format!("node {}", a.source), None);
            e.push(ErrorCategory::Node, kind, format!("node {}", a.target), None);
            e.push(
                ErrorCategory::EdgeDirection,
                kind,
                format!("arrow {}→{}", a.source, a.target),
                None,
            );
            if let Some(m) = &a.message {
                e.push(ErrorCategory::Message, kind, format!("message {m:?}"), None);
            }
        }
        Element::Note(_) => e.push(ErrorCategory::Note, kind, "note".into(), None),
        Element::Group(g) => e.push(
            ErrorCategory::Group,
            kind,
            format!("group {}", g.keyword.key()),
            None,
        ),
        Element::Box(_) => e.push(ErrorCategory::Box, kind, "box".into(), None),
        Element::Participant(p) => e.push(
            ErrorCategory::Participant,
            kind,
            format!("participant {}", p.node_name()),
            None,
        ),
    }
    e.out
}
