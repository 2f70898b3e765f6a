//! Unified diff serialization and parsing.

use super::{DeltaKind, DiffError, FileDiff, LineDelta};

fn range(start: usize, count: usize) -> String {
    if count == 1 {
        start.to_string()
    } else {
        format!("{start},{count}")
    }
}

/// Serializes the explicit deltas of `diff` in git's unified format.
/// Returns an empty string when there are no changes.
pub(crate) fn to_unified(diff: &FileDiff, context: usize) -> String {
    let deltas = &diff.deltas;
    let changes: Vec<usize> = (0..deltas.len())
        .filter(|&i| deltas[i].kind != DeltaKind::Context)
        .collect();
    if changes.is_empty() {
        return String::new();
    }

    // Group change indices into hunks, merging when the context between them
    // would overlap.
    let mut hunks: Vec<(usize, usize)> = Vec::new();
    for &c in &changes {
        let start = c.saturating_sub(context);
        let end = (c + context + 1).min(deltas.len());
        match hunks.last_mut() {
            Some(last) if start <= last.1 => last.1 = end,
            _ => hunks.push((start, end)),
        }
    }

    // Net candidate-minus-ground-truth line offset before each delta.
    let mut offsets = Vec::with_capacity(deltas.len());
    let mut offset: isize = 0;
    for d in deltas {
        offsets.push(offset);
        match d.kind {
            DeltaKind::Added => offset += 1,
            DeltaKind::Removed => offset -= 1,
            DeltaKind::Context => {}
        }
    }

    let mut out = format!("--- a/{}\n+++ b/{}\n", diff.gt_name, diff.cand_name);
    for (start, end) in hunks {
        let slice = &deltas[start..end];
        let old_count = slice.iter().filter(|d| d.kind != DeltaKind::Added).count();
        let new_count = slice.iter().filter(|d| d.kind != DeltaKind::Removed).count();
        let first_old = slice
            .iter()
            .find_map(|d| d.gt_line_no.filter(|_| d.kind != DeltaKind::Added));
        let first_new = slice
            .iter()
            .find_map(|d| d.cand_line_no.filter(|_| d.kind != DeltaKind::Removed));
        let old_start = match first_old {
            Some(g) => g,
            None => (first_new.unwrap_or(1) as isize - 1 - offsets[start]).max(0) as usize,
        };
        let new_start = match first_new {
            Some(c) => c,
            None => (old_start as isize - 1 + offsets[start]).max(0) as usize,
        };
        out.push_str(&format!(
            "@@ -{} +{} @@\n",
            range(old_start, old_count),
            range(new_start, new_count)
        ));
        for d in slice {
            let marker = match d.kind {
                DeltaKind::Context => ' ',
                DeltaKind::Removed => '-',
                DeltaKind::Added => '+',
            };
            out.push(marker);
            out.push_str(&d.text);
            out.push('\n');
        }
    }
    out
}

fn file_name(header: &str, prefix: &str) -> String {
    let name = header.split('\t').next().unwrap_or("").trim();
    let name = name
        .strip_prefix('"')
        .and_then(|n| n.strip_suffix('"'))
        .unwrap_or(name);
    name.strip_prefix(prefix).unwrap_or(name).to_string()
}

fn parse_range(s: &str) -> Option<(usize, usize)> {
    match s.split_once(',') {
        Some((start, count)) => Some((start.parse().ok()?, count.parse().ok()?)),
        None => Some((s.parse().ok()?, 1)),
    }
}

fn parse_hunk_header(line: &str) -> Option<((usize, usize), (usize, usize))> {
    let rest = line.strip_prefix("@@ ")?;
    let (ranges, _) = rest.split_once(" @@")?;
    let (old, new) = ranges.split_once(' ')?;
    Some((
        parse_range(old.strip_prefix('-')?)?,
        parse_range(new.strip_prefix('+')?)?,
    ))
}

/// Parses a (possibly multi-file) unified diff.
///
/// Git extended headers and `\ No newline at end of file` markers are
/// tolerated. An empty patch yields no file diffs.
pub fn parse_unified_diff(text: &str) -> Result<Vec<FileDiff>, DiffError> {
    let malformed = |line_no: usize, reason: &str| DiffError::MalformedPatch {
        line_no,
        reason: reason.to_string(),
    };
    let lines: Vec<&str> = text.lines().collect();
    let mut files: Vec<FileDiff> = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let line = lines[i];
        let line_no = i + 1;
        if let Some(old) = line.strip_prefix("--- ") {
            let new = lines
                .get(i + 1)
                .and_then(|l| l.strip_prefix("+++ "))
                .ok_or_else(|| malformed(line_no + 1, "expected '+++' after '---'"))?;
            let (old, new) = (file_name(old, "a/"), file_name(new, "b/"));
            let (gt_name, cand_name) = match (old.as_str(), new.as_str()) {
                ("/dev/null", _) => (new.clone(), new),
                (_, "/dev/null") => (old.clone(), old),
                _ => (old, new),
            };
            files.push(FileDiff {
                gt_name,
                cand_name,
                deltas: Vec::new(),
            });
            i += 2;
            continue;
        }
        if line.starts_with("@@") {
            let file = files
                .last_mut()
                .ok_or_else(|| malformed(line_no, "hunk before file header"))?;
            let ((old_start, old_count), (new_start, new_count)) =
                parse_hunk_header(line).ok_or_else(|| malformed(line_no, "invalid hunk header"))?;
            let (mut g, mut c) = (old_start.max(1), new_start.max(1));
            let (mut old_left, mut new_left) = (old_count, new_count);
            i += 1;
            while old_left > 0 || new_left > 0 {
                let Some(&body) = lines.get(i) else {
                    return Err(malformed(lines.len(), "hunk ends before its declared length"));
                };
                let hunk_line_no = i + 1;
                let (marker, content) = match body.chars().next() {
                    Some(m) => (m, &body[m.len_utf8()..]),
                    None => (' ', ""),
                };
                match marker {
                    ' ' if old_left > 0 && new_left > 0 => {
                        file.deltas.push(LineDelta::context(content, g, c));
                        g += 1;
                        c += 1;
                        old_left -= 1;
                        new_left -= 1;
                    }
                    '-' if old_left > 0 => {
                        file.deltas.push(LineDelta::removed(content, g));
                        g += 1;
                        old_left -= 1;
                    }
                    '+' if new_left > 0 => {
                        file.deltas.push(LineDelta::added(content, c));
                        c += 1;
                        new_left -= 1;
                    }
                    '\\' => {}
                    _ => return Err(malformed(hunk_line_no, "line does not fit the hunk")),
                }
                i += 1;
            }
            continue;
        }
        i += 1;
    }
    Ok(files)
}
