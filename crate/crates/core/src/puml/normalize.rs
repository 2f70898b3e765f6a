//! Lenient syntax fixes applied to candidate scripts before comparison.
//!
//! All rules are line-local, so line numbers are preserved and the rewrite
//! can be applied to individual diff lines as well as whole scripts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::arrow::begins_with_arrow;
use super::text::first_word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NormalizationRule {
    /// Drop spurious leading `#` and `-` characters.
    StripStrayChars,
    /// Rewrite dotted `..>` arrows to dashed `-->`.
    DottedToDashed,
    /// Declare `actor X` as `participant X`.
    ActorToParticipant,
}

impl NormalizationRule {
    /// Catalog in application order.
    pub const ALL: [NormalizationRule; 3] = [
        NormalizationRule::StripStrayChars,
        NormalizationRule::DottedToDashed,
        NormalizationRule::ActorToParticipant,
    ];

    pub fn key(self) -> &'static str {
        match self {
            NormalizationRule::StripStrayChars => "strip-stray-chars",
            NormalizationRule::DottedToDashed => "dotted-to-dashed",
            NormalizationRule::ActorToParticipant => "actor-to-participant",
        }
    }

    fn apply(self, line: &str) -> String {
        match self {
            NormalizationRule::StripStrayChars => strip_stray_chars(line),
            NormalizationRule::DottedToDashed => dotted_to_dashed(line),
            NormalizationRule::ActorToParticipant => actor_to_participant(line),
        }
    }
}

impl fmt::Display for NormalizationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown normalization rule {0:?} (expected one of strip-stray-chars, dotted-to-dashed, actor-to-participant)")]
pub struct UnknownRule(pub String);

impl FromStr for NormalizationRule {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NormalizationRule::ALL
            .into_iter()
            .find(|r| r.key() == s.trim())
            .ok_or_else(|| UnknownRule(s.trim().to_string()))
    }
}

/// A set of enabled rules; always applied in catalog order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    rules: Vec<NormalizationRule>,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::all()
    }
}

impl RuleSet {
    pub fn all() -> Self {
        RuleSet {
            rules: NormalizationRule::ALL.to_vec(),
        }
    }

    pub fn none() -> Self {
        RuleSet { rules: Vec::new() }
    }

    pub fn new(rules: impl IntoIterator<Item = NormalizationRule>) -> Self {
        let mut rules: Vec<NormalizationRule> = rules.into_iter().collect();
        rules.sort();
        rules.dedup();
        RuleSet { rules }
    }

    /// Parses a comma-separated list of rule keys.
    pub fn parse_keys(keys: &str) -> Result<Self, UnknownRule> {
        let rules = keys
            .split(',')
            .filter(|k| !k.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RuleSet::new(rules))
    }

    pub fn rules(&self) -> &[NormalizationRule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationChange {
    pub line_no: usize,
    pub rule: NormalizationRule,
    pub before: String,
    pub after: String,
}

fn strip_stray_chars(line: &str) -> String {
    let body = line.trim_start();
    let indent = &line[..line.len() - body.len()];
    let mut t = body;
    loop {
        if let Some(rest) = t.strip_prefix('#') {
            t = rest.trim_start();
        } else if t.starts_with('-') && !begins_with_arrow(t) {
            t = t[1..].trim_start();
        } else {
            break;
        }
    }
    if t.len() == body.len() {
        return line.to_string();
    }
    if t.is_empty() {
        return String::new();
    }
    format!("{indent}{t}")
}

fn dotted_to_dashed(line: &str) -> String {
    // Only the part before the message separator carries arrows.
    let mut out = String::with_capacity(line.len());
    let mut in_quotes = false;
    let mut in_message = false;
    let mut i = 0;
    let bytes = line.as_bytes();
    while i < line.len() {
        let c = bytes[i];
        if !in_message && !in_quotes && line[i..].starts_with("..>") {
            out.push_str("-->");
            i += 3;
            continue;
        }
        match c {
            b'"' if !in_message => in_quotes = !in_quotes,
            b':' if !in_quotes => in_message = true,
            _ => {}
        }
        let ch = line[i..].chars().next().expect("char boundary");
        out.push(ch);
        i += ch.len_utf8();
    }
    out
}

fn actor_to_participant(line: &str) -> String {
    let body = line.trim_start();
    let (word, rest) = first_word(body);
    if !word.eq_ignore_ascii_case("actor") || begins_with_arrow(rest) {
        return line.to_string();
    }
    let indent = &line[..line.len() - body.len()];
    format!("{indent}participant{rest}")
}

/// Applies `rules` to a single line.
pub fn normalize_line(line: &str, rules: &RuleSet) -> String {
    rules
        .rules()
        .iter()
        .fold(line.to_string(), |acc, rule| rule.apply(&acc))
}

/// Normalizes a script and reports every rewritten line.
pub fn normalize_script_logged(text: &str, rules: &RuleSet) -> (String, Vec<NormalizationChange>) {
    let mut out = String::with_capacity(text.len());
    let mut changes = Vec::new();
    for (idx, chunk) in text.split_inclusive('\n').enumerate() {
        let (content, ending) = if let Some(c) = chunk.strip_suffix("\r\n") {
            (c, "\r\n")
        } else if let Some(c) = chunk.strip_suffix('\n') {
            (c, "\n")
        } else {
            (chunk, "")
        };
        let mut current = content.to_string();
        for &rule in rules.rules() {
            let next = rule.apply(&current);
            if next != current {
                changes.push(NormalizationChange {
                    line_no: idx + 1,
                    rule,
                    before: current.clone(),
                    after: next.clone(),
                });
                current = next;
            }
        }
        out.push_str(&current);
        out.push_str(ending);
    }
    (out, changes)
}

/// Normalizes a script; idempotent for every rule set.
pub fn normalize_script(text: &str, rules: &RuleSet) -> String {
    normalize_script_logged(text, rules).0
}
