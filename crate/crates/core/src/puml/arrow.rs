use std::fmt;

use serde::{Deserialize, Serialize};

use super::text::{split_message, strip_quotes};
use super::PumlError;

/// How the arrow was written in the source, before canonicalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WrittenDirection {
    LeftToRight,
    RightToLeft,
    Bidirectional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineStyle {
    Solid,
    Dashed,
}

impl fmt::Display for LineStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LineStyle::Solid => "solid",
            LineStyle::Dashed => "dashed",
        })
    }
}

/// A message arrow with canonical sender/receiver.
///
/// `A <- B` is stored as `source = B`, `target = A`, so two arrows describing
/// the same flow compare equal on `(source, target)` regardless of how they
/// were written. For bidirectional arrows the written left side is `source`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowStatement {
    pub source: String,
    pub target: String,
    pub direction: WrittenDirection,
    pub style: LineStyle,
    pub color: Option<String>,
    pub message: Option<String>,
    pub raw: String,
}

impl ArrowStatement {
    pub fn is_bidirectional(&self) -> bool {
        self.direction == WrittenDirection::Bidirectional
    }

    pub fn is_self_message(&self) -> bool {
        self.source == self.target
    }

    /// Renders the arrow in canonical left-to-right form
    /// (`source ARROW target[ : message]`).
    pub fn canonical_line(&self) -> String {
        let mut arrow = String::new();
        if self.is_bidirectional() {
            arrow.push('<');
        }
        arrow.push('-');
        if let Some(color) = &self.color {
            arrow.push('[');
            arrow.push_str(color);
            arrow.push(']');
        }
        if self.style == LineStyle::Dashed {
            arrow.push('-');
        }
        arrow.push('>');
        let mut line = format!(
            "{} {} {}",
            quote_name(&self.source),
            arrow,
            quote_name(&self.target)
        );
        if let Some(message) = &self.message {
            line.push_str(" : ");
            line.push_str(message);
        }
        line
    }

    /// Copy with the written form erased: direction folded to left-to-right
    /// (bidirectional kept) and `raw` replaced by the canonical line.
    pub fn canonical(&self) -> ArrowStatement {
        let mut out = self.clone();
        if out.direction == WrittenDirection::RightToLeft {
            out.direction = WrittenDirection::LeftToRight;
        }
        out.raw = out.canonical_line();
        out
    }
}

fn quote_name(name: &str) -> String {
    let plain = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '.' | '@' | '$' | '[' | ']'));
    if plain {
        name.to_string()
    } else {
        format!("\"{name}\"")
    }
}

/// An arrow token located inside a line (byte offsets).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ArrowToken {
    pub start: usize,
    pub end: usize,
    pub left_head: bool,
    pub right_head: bool,
    pub dashes: usize,
    pub color: Option<String>,
}

/// Tries to read an arrow token starting exactly at byte `at`.
///
/// Grammar: `[<|<<] -{1,2} [\[color\]] -{0,2} [>|>>|\|\\|/|//] [x]`, with at
/// least one head and at most two dashes in total. A bare `x` head is allowed
/// when followed by whitespace or end of input.
pub(crate) fn match_arrow_at(s: &str, at: usize) -> Option<ArrowToken> {
    let b = s.as_bytes();
    let len = b.len();
    let mut p = at;
    let mut left_head = false;
    if p < len && b[p] == b'<' {
        left_head = true;
        p += 1;
        if p < len && b[p] == b'<' {
            p += 1;
        }
    }
    let d1 = b[p..].iter().take_while(|&&c| c == b'-').count();
    if d1 == 0 {
        return None;
    }
    p += d1;
    let mut color = None;
    if p < len && b[p] == b'[' {
        let close = s[p..].find(']')? + p;
        let inner = s[p + 1..close].trim();
        if !inner.is_empty() {
            color = Some(inner.to_string());
        }
        p = close + 1;
    }
    let d2 = b[p..].iter().take_while(|&&c| c == b'-').count();
    p += d2;
    let dashes = d1 + d2;
    if dashes > 2 {
        return None;
    }

    let boundary = |q: usize| q >= len || b[q].is_ascii_whitespace();
    let mut right_head = false;
    for head in [">>", ">", "\\\\", "\\", "//", "/"] {
        if s[p..].starts_with(head) {
            p += head.len();
            right_head = true;
            break;
        }
    }
    if right_head {
        if p < len && b[p] == b'x' && boundary(p + 1) {
            p += 1;
        }
    } else if p < len && b[p] == b'x' && boundary(p + 1) {
        p += 1;
        right_head = true;
    }
    if !left_head && !right_head {
        return None;
    }
    Some(ArrowToken {
        start: at,
        end: p,
        left_head,
        right_head,
        dashes,
        color,
    })
}

/// Finds the first arrow token outside double quotes.
pub(crate) fn find_arrow(s: &str) -> Option<ArrowToken> {
    let b = s.as_bytes();
    let mut in_quotes = false;
    for (i, &c) in b.iter().enumerate() {
        if c == b'"' {
            in_quotes = !in_quotes;
            continue;
        }
        if in_quotes || !(c == b'<' || c == b'-') {
            continue;
        }
        // Only the first character of a run of arrow glyphs can start a token.
        if i > 0 && matches!(b[i - 1], b'-' | b'<') {
            continue;
        }
        if let Some(tok) = match_arrow_at(s, i) {
            return Some(tok);
        }
    }
    None
}

pub(crate) fn begins_with_arrow(s: &str) -> bool {
    match_arrow_at(s.trim_start(), 0).is_some()
}

/// Arrow detection used by line classification: a token must appear before
/// the first unquoted `:`.
pub(crate) fn has_arrow(line: &str) -> bool {
    let (head, _) = split_message(line);
    find_arrow(head).is_some()
}

fn clean_endpoint(raw: &str, strip_activation: bool) -> String {
    let mut name = raw.trim();
    if strip_activation {
        loop {
            let trimmed = ["++", "--", "**", "!!"]
                .iter()
                .find_map(|suffix| name.strip_suffix(suffix))
                .map(str::trim_end);
            match trimmed {
                Some(rest) if !rest.is_empty() => name = rest,
                _ => break,
            }
        }
    }
    strip_quotes(name).trim().to_string()
}

/// Parses an arrow line into its canonical form.
pub fn parse_arrow(line: &str) -> Result<ArrowStatement, PumlError> {
    let raw = line.trim();
    let (head, message) = split_message(raw);
    let tok = find_arrow(head).ok_or_else(|| PumlError::NotAnArrow {
        line: raw.to_string(),
    })?;
    let left = clean_endpoint(&head[..tok.start], false);
    let right = clean_endpoint(&head[tok.end..], true);
    if left.is_empty() || right.is_empty() {
        return Err(PumlError::MalformedArrow {
            line_no: None,
            line: raw.to_string(),
        });
    }
    let direction = match (tok.left_head, tok.right_head) {
        (true, true) => WrittenDirection::Bidirectional,
        (true, false) => WrittenDirection::RightToLeft,
        _ => WrittenDirection::LeftToRight,
    };
    let (source, target) = match direction {
        WrittenDirection::RightToLeft => (right, left),
        _ => (left, right),
    };
    let style = if tok.dashes >= 2 {
        LineStyle::Dashed
    } else {
        LineStyle::Solid
    };
    let message = message
        .map(str::trim)
        .filter(|m| !m.is_empty())
        .map(str::to_string);
    Ok(ArrowStatement {
        source,
        target,
        direction,
        style,
        color: tok.color,
        message,
        raw: raw.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_bearer_arrow() {
        let a = parse_arrow("PGWA -> SGW : 2a. Update Bearer Request (PGW Change Info)").unwrap();
        assert_eq!(a.source, "PGWA");
        assert_eq!(a.target, "SGW");
        assert_eq!(a.direction, WrittenDirection::LeftToRight);
        assert_eq!(a.style, LineStyle::Solid);
        assert_eq!(
            a.message.as_deref(),
            Some("2a. Update Bearer Request (PGW Change Info)")
        );
        assert_eq!(a.color, None);
    }

    #[test]
    fn reversed_dashed_arrow_is_canonicalized() {
        let a = parse_arrow("A <-- B").unwrap();
        assert_eq!((a.source.as_str(), a.target.as_str()), ("B", "A"));
        assert_eq!(a.direction, WrittenDirection::RightToLeft);
        assert_eq!(a.style, LineStyle::Dashed);
        assert_eq!(a.message, None);
    }

    #[test]
    fn inline_color_is_extracted() {
        let a = parse_arrow("UE -[#red]> AMF : 1. Registration Request").unwrap();
        assert_eq!((a.source.as_str(), a.target.as_str()), ("UE", "AMF"));
        assert_eq!(a.style, LineStyle::Solid);
        assert_eq!(a.color.as_deref(), Some("#red"));
        assert_eq!(a.message.as_deref(), Some("1. Registration Request"));

        let dashed = parse_arrow("UE -[#blue]-> AMF").unwrap();
        assert_eq!(dashed.style, LineStyle::Dashed);
        assert_eq!(dashed.color.as_deref(), Some("#blue"));
    }

    #[test]
    fn heads_and_bidirectional_forms() {
        for (line, dir, style) in [
            ("A ->> B", WrittenDirection::LeftToRight, LineStyle::Solid),
            ("A -\\ B", WrittenDirection::LeftToRight, LineStyle::Solid),
            ("A --/ B", WrittenDirection::LeftToRight, LineStyle::Dashed),
            ("A ->x B", WrittenDirection::LeftToRight, LineStyle::Solid),
            ("A -x B", WrittenDirection::LeftToRight, LineStyle::Solid),
            ("A <<- B", WrittenDirection::RightToLeft, LineStyle::Solid),
            ("A <-> B", WrittenDirection::Bidirectional, LineStyle::Solid),
            ("A <--> B", WrittenDirection::Bidirectional, LineStyle::Dashed),
            ("A->B:m", WrittenDirection::LeftToRight, LineStyle::Solid),
        ] {
            let a = parse_arrow(line).unwrap_or_else(|e| panic!("{line}: {e}"));
            assert_eq!(a.direction, dir, "{line}");
            assert_eq!(a.style, style, "{line}");
        }
    }

    #[test]
    fn quoted_names_and_activation_suffix() {
        let a = parse_arrow("\"Serving GW\" -> PGW ++ : Create Session").unwrap();
        assert_eq!(a.source, "Serving GW");
        assert_eq!(a.target, "PGW");
        assert_eq!(a.message.as_deref(), Some("Create Session"));
    }

    #[test]
    fn missing_endpoint_is_malformed() {
        assert!(matches!(
            parse_arrow("-> B : m"),
            Err(PumlError::MalformedArrow { .. })
        ));
        assert!(matches!(
            parse_arrow("A -> : m"),
            Err(PumlError::MalformedArrow { .. })
        ));
        assert!(matches!(parse_arrow("A B"), Err(PumlError::NotAnArrow { .. })));
    }

    #[test]
    fn token_grammar_rejects_long_shafts_and_dots() {
        assert!(find_arrow("A ---> B").is_none());
        assert!(find_arrow("A ..> B").is_none());
        assert!(find_arrow("A -- B").is_none());
        assert!(find_arrow("\"x -> y\" B").is_none());
        assert!(find_arrow("A -xB").is_none());
    }

    #[test]
    fn arrow_after_colon_is_not_an_arrow() {
        assert!(!has_arrow("foo : a -> b"));
        assert!(has_arrow("a -> b : c -> d"));
    }

    #[test]
    fn canonical_line_roundtrip() {
        let a = parse_arrow("A <-[#red]- \"Serving GW\" : hello: world").unwrap();
        assert_eq!(a.canonical_line(), "\"Serving GW\" -[#red]-> A : hello: world");
        let b = parse_arrow(&a.canonical_line()).unwrap();
        assert_eq!(a.canonical(), b.canonical());
    }
}
