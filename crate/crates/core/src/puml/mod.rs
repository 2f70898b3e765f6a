//! PlantUML sequence-diagram model.
//!
//! Lines are classified into [`StatementKind`]s; the structurally relevant
//! ones (arrows, participant/note/box/group declarations) become
//! [`PumlStatement`]s. Everything else is kept in [`PumlScript::lines`] only.

mod arrow;
mod normalize;
mod text;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use arrow::{parse_arrow, ArrowStatement, LineStyle, WrittenDirection};
pub use normalize::{
    normalize_line, normalize_script, normalize_script_logged, NormalizationChange, NormalizationRule,
    RuleSet, UnknownRule,
};

pub(crate) use arrow::begins_with_arrow;
use text::{first_word, split_message, strip_quotes, tokenize};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PumlError {
    #[error("malformed arrow{}: {line:?}", line_suffix(*line_no))]
    MalformedArrow { line_no: Option<usize>, line: String },
    #[error("not an arrow line: {line:?}")]
    NotAnArrow { line: String },
}

fn line_suffix(line_no: Option<usize>) -> String {
    line_no.map(|n| format!(" at line {n}")).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StatementKind {
    ArrowLine,
    ParticipantDecl,
    NoteDecl,
    BoxDecl,
    GroupDecl,
    StructuralEnd,
    Meta,
    Other,
}

impl StatementKind {
    /// Kinds that survive preprocessing and take part in alignment.
    pub fn is_relevant(self) -> bool {
        matches!(
            self,
            StatementKind::ArrowLine
                | StatementKind::ParticipantDecl
                | StatementKind::NoteDecl
                | StatementKind::BoxDecl
                | StatementKind::GroupDecl
        )
    }
}

impl fmt::Display for StatementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParticipantKeyword {
    Participant,
    Actor,
    Boundary,
    Control,
    Entity,
    Database,
    Collections,
    Queue,
}

impl ParticipantKeyword {
    fn from_word(word: &str) -> Option<Self> {
        Some(match word.to_ascii_lowercase().as_str() {
            "participant" => Self::Participant,
            "actor" => Self::Actor,
            "boundary" => Self::Boundary,
            "control" => Self::Control,
            "entity" => Self::Entity,
            "database" => Self::Database,
            "collections" => Self::Collections,
            "queue" => Self::Queue,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParticipantStatement {
    pub keyword: ParticipantKeyword,
    pub name: String,
    pub alias: Option<String>,
    pub color: Option<String>,
}

impl ParticipantStatement {
    /// The identifier arrows use to refer to this participant.
    pub fn node_name(&self) -> &str {
        self.alias.as_deref().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotePosition {
    Over,
    LeftOf,
    RightOf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoteStatement {
    pub position: NotePosition,
    pub anchors: Vec<String>,
    pub body: String,
    /// Inclusive 1-based line range covered by the note.
    pub span: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKeyword {
    Group,
    Alt,
    Opt,
    Loop,
    Par,
    Break,
    Critical,
    Else,
}

impl GroupKeyword {
    pub fn key(self) -> &'static str {
        match self {
            Self::Group => "group",
            Self::Alt => "alt",
            Self::Opt => "opt",
            Self::Loop => "loop",
            Self::Par => "par",
            Self::Break => "break",
            Self::Critical => "critical",
            Self::Else => "else",
        }
    }

    fn from_word(word: &str) -> Option<Self> {
        Some(match word.to_ascii_lowercase().as_str() {
            "group" => Self::Group,
            "alt" => Self::Alt,
            "opt" => Self::Opt,
            "loop" => Self::Loop,
            "par" => Self::Par,
            "break" => Self::Break,
            "critical" => Self::Critical,
            "else" => Self::Else,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupStatement {
    pub keyword: GroupKeyword,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxStatement {
    pub label: Option<String>,
    pub color: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Element {
    Arrow(ArrowStatement),
    Participant(ParticipantStatement),
    Note(NoteStatement),
    Group(GroupStatement),
    Box(BoxStatement),
}

/// A relevant statement with its location in the source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PumlStatement {
    /// 1-based line of the statement's first line.
    pub line_no: usize,
    /// 1-based line of its last line (differs from `line_no` for multi-line notes).
    pub last_line_no: usize,
    /// Trimmed source lines joined with `\n`.
    pub text: String,
    pub element: Element,
}

impl PumlStatement {
    pub fn kind(&self) -> StatementKind {
        match self.element {
            Element::Arrow(_) => StatementKind::ArrowLine,
            Element::Participant(_) => StatementKind::ParticipantDecl,
            Element::Note(_) => StatementKind::NoteDecl,
            Element::Group(_) => StatementKind::GroupDecl,
            Element::Box(_) => StatementKind::BoxDecl,
        }
    }

    pub fn line_count(&self) -> usize {
        self.last_line_no - self.line_no + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParseWarning {
    /// A note/box/group opener without a matching end; closed at end of file.
    UnterminatedBlock { kind: StatementKind, line_no: usize },
    /// A keyword line that could not be turned into a statement.
    Skipped { line_no: usize, reason: String },
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseWarning::UnterminatedBlock { kind, line_no } => {
                write!(
                    f,
                    "line {line_no}: unterminated {kind} block closed at end of file"
                )
            }
            ParseWarning::Skipped { line_no, reason } => write!(f, "line {line_no}: skipped ({reason})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PumlScript {
    pub source_name: String,
    pub lines: Vec<String>,
    pub statements: Vec<PumlStatement>,
    pub warnings: Vec<ParseWarning>,
}

impl PumlScript {
    pub fn statement_at(&self, line_no: usize) -> Option<&PumlStatement> {
        self.statements
            .binary_search_by_key(&line_no, |s| s.line_no)
            .ok()
            .map(|i| &self.statements[i])
    }
}

const META_WORDS: [&str; 5] = ["title", "autonumber", "skinparam", "hide", "scale"];
const END_WORDS: [&str; 4] = ["end", "endnote", "endhnote", "endrnote"];
const NOTE_WORDS: [&str; 3] = ["note", "hnote", "rnote"];

/// Classifies one line of a sequence diagram.
///
/// Keywords are matched case-insensitively on the first word, unless the
/// rest of the line starts with an arrow (`box -> A` is an arrow between a
/// node called `box` and `A`).
pub fn classify_line(line: &str) -> StatementKind {
    let t = line.trim();
    if t.is_empty()
        || t.starts_with('\'')
        || t.starts_with("==")
        || t.starts_with("...")
        || t.starts_with("|||")
    {
        return StatementKind::Other;
    }
    let (word, rest) = first_word(t);
    let word = word.to_ascii_lowercase();
    if word.starts_with("@startuml") || word.starts_with("@enduml") {
        return StatementKind::Meta;
    }
    if !begins_with_arrow(rest) {
        if END_WORDS.contains(&word.as_str()) {
            return StatementKind::StructuralEnd;
        }
        if META_WORDS.contains(&word.as_str()) {
            return StatementKind::Meta;
        }
        if ParticipantKeyword::from_word(&word).is_some() {
            return StatementKind::ParticipantDecl;
        }
        if NOTE_WORDS.contains(&word.as_str()) {
            return StatementKind::NoteDecl;
        }
        if word == "box" {
            return StatementKind::BoxDecl;
        }
        if GroupKeyword::from_word(&word).is_some() {
            return StatementKind::GroupDecl;
        }
    }
    if arrow::has_arrow(t) {
        return StatementKind::ArrowLine;
    }
    StatementKind::Other
}

fn color_token(tok: &str) -> bool {
    tok.starts_with('#') && tok.len() > 1
}

fn parse_participant(line: &str) -> Option<ParticipantStatement> {
    let tokens = tokenize(line.trim());
    let keyword = ParticipantKeyword::from_word(tokens.first()?)?;
    let name = strip_quotes(tokens.get(1)?).trim().to_string();
    if name.is_empty() {
        return None;
    }
    let mut alias = None;
    let mut color = None;
    let mut i = 2;
    while i < tokens.len() {
        let tok = tokens[i];
        if tok.eq_ignore_ascii_case("as") {
            if let Some(next) = tokens.get(i + 1) {
                let a = strip_quotes(next).trim();
                if !a.is_empty() {
                    alias = Some(a.to_string());
                }
                i += 1;
            }
        } else if color_token(tok) {
            color = Some(tok.to_string());
        }
        i += 1;
    }
    // `participant Long as "Display"`: the unquoted side is the identifier.
    if let Some(a) = &alias {
        let quoted_alias = tokens
            .iter()
            .skip(2)
            .any(|t| t.starts_with('"') && strip_quotes(t).trim() == a);
        if quoted_alias && !tokens[1].starts_with('"') {
            let display = alias.take().unwrap_or_default();
            return Some(ParticipantStatement {
                keyword,
                name: display,
                alias: Some(name),
                color,
            });
        }
    }
    Some(ParticipantStatement {
        keyword,
        name,
        alias,
        color,
    })
}

/// Parses the header of a note line. Returns the note and whether its body
/// continues on following lines.
fn parse_note_header(line: &str, line_no: usize) -> (NoteStatement, bool) {
    let (head, text) = split_message(line.trim());
    let (_, after_keyword) = first_word(head);
    let (pos_word, after_pos) = first_word(after_keyword);
    let (position, mut rest) = match pos_word.to_ascii_lowercase().as_str() {
        "over" => (NotePosition::Over, after_pos),
        "left" => (NotePosition::LeftOf, after_pos),
        "right" => (NotePosition::RightOf, after_pos),
        _ => (NotePosition::Over, after_keyword),
    };
    if position != NotePosition::Over {
        let (of, after) = first_word(rest);
        if of.eq_ignore_ascii_case("of") {
            rest = after;
        }
    }
    let anchors = rest
        .split(',')
        .map(|a| {
            let a = a.trim();
            // Drop a trailing color such as `A #yellow`.
            let a = match a.rfind(char::is_whitespace) {
                Some(i) if color_token(a[i..].trim()) => a[..i].trim(),
                _ => a,
            };
            strip_quotes(a).trim().to_string()
        })
        .filter(|a| !a.is_empty() && !color_token(a))
        .collect();
    let body = text.map(|t| t.trim().to_string());
    let multi_line = body.is_none();
    (
        NoteStatement {
            position,
            anchors,
            body: body.unwrap_or_default(),
            span: (line_no, line_no),
        },
        multi_line,
    )
}

fn is_note_end(line: &str) -> bool {
    let words: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    matches!(
        words.iter().map(String::as_str).collect::<Vec<_>>().as_slice(),
        ["end", "note" | "hnote" | "rnote"] | ["endnote" | "endhnote" | "endrnote"]
    )
}

fn parse_group(line: &str) -> Option<GroupStatement> {
    let (word, rest) = first_word(line.trim());
    let keyword = GroupKeyword::from_word(word)?;
    let label = rest.trim();
    Some(GroupStatement {
        keyword,
        label: (!label.is_empty()).then(|| label.to_string()),
    })
}

fn parse_box(line: &str) -> BoxStatement {
    let (_, rest) = first_word(line.trim());
    let tokens = tokenize(rest);
    let mut color = None;
    let mut label_parts = Vec::new();
    for tok in tokens {
        if color_token(tok) {
            color = Some(tok.to_string());
        } else {
            label_parts.push(tok);
        }
    }
    let label = label_parts.join(" ");
    let label = strip_quotes(&label).trim().to_string();
    BoxStatement {
        label: (!label.is_empty()).then_some(label),
        color,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OpenBlock {
    Box(usize),
    Group(usize),
}

/// Parses a script into classified statements.
///
/// Multi-line notes are folded into one statement. Unterminated blocks are
/// closed at end of file and reported as warnings; an arrow line with a
/// missing endpoint is an error.
pub fn parse_script(source_name: &str, text: &str) -> Result<PumlScript, PumlError> {
    let lines: Vec<String> = text.lines().map(str::to_string).collect();
    let mut statements = Vec::new();
    let mut warnings = Vec::new();
    let mut open: Vec<OpenBlock> = Vec::new();

    let mut i = 0;
    while i < lines.len() {
        let line = &lines[i];
        let line_no = i + 1;
        let trimmed = line.trim();
        let element = match classify_line(line) {
            StatementKind::ArrowLine => Some(Element::Arrow(parse_arrow(line).map_err(|e| match e {
                PumlError::MalformedArrow { line, .. } => PumlError::MalformedArrow {
                    line_no: Some(line_no),
                    line,
                },
                other => other,
            })?)),
            StatementKind::ParticipantDecl => match parse_participant(line) {
                Some(p) => Some(Element::Participant(p)),
                None => {
                    warnings.push(ParseWarning::Skipped {
                        line_no,
                        reason: "participant without a name".into(),
                    });
                    None
                }
            },
            StatementKind::NoteDecl => {
                let (mut note, multi_line) = parse_note_header(line, line_no);
                if multi_line {
                    let mut j = i + 1;
                    while j < lines.len() && !is_note_end(&lines[j]) {
                        j += 1;
                    }
                    let body_end = j.min(lines.len());
                    note.body = lines[i + 1..body_end]
                        .iter()
                        .map(|l| l.trim())
                        .collect::<Vec<_>>()
                        .join("\n");
                    if j >= lines.len() {
                        warnings.push(ParseWarning::UnterminatedBlock {
                            kind: StatementKind::NoteDecl,
                            line_no,
                        });
                        note.span = (line_no, lines.len());
                    } else {
                        note.span = (line_no, j + 1);
                    }
                }
                let (first, last) = note.span;
                let text = lines[first - 1..last]
                    .iter()
                    .map(|l| l.trim())
                    .collect::<Vec<_>>()
                    .join("\n");
                statements.push(PumlStatement {
                    line_no: first,
                    last_line_no: last,
                    text,
                    element: Element::Note(note),
                });
                i = last;
                continue;
            }
            StatementKind::BoxDecl => {
                open.push(OpenBlock::Box(line_no));
                Some(Element::Box(parse_box(line)))
            }
            StatementKind::GroupDecl => {
                let group = parse_group(line).expect("classified as group");
                if group.keyword != GroupKeyword::Else {
                    open.push(OpenBlock::Group(line_no));
                }
                Some(Element::Group(group))
            }
            StatementKind::StructuralEnd => {
                let closes_box = trimmed
                    .split_whitespace()
                    .nth(1)
                    .is_some_and(|w| w.eq_ignore_ascii_case("box"));
                let target = open.iter().rposition(|b| match b {
                    OpenBlock::Box(_) => closes_box,
                    OpenBlock::Group(_) => !closes_box,
                });
                if let Some(pos) = target {
                    open.remove(pos);
                }
                None
            }
            StatementKind::Meta | StatementKind::Other => None,
        };
        if let Some(element) = element {
            statements.push(PumlStatement {
                line_no,
                last_line_no: line_no,
                text: trimmed.to_string(),
                element,
            });
        }
        i += 1;
    }
    for block in open {
        let (kind, line_no) = match block {
            OpenBlock::Box(n) => (StatementKind::BoxDecl, n),
            OpenBlock::Group(n) => (StatementKind::GroupDecl, n),
        };
        warnings.push(ParseWarning::UnterminatedBlock { kind, line_no });
    }
    Ok(PumlScript {
        source_name: source_name.to_string(),
        lines,
        statements,
        warnings,
    })
}

/// Ground-truth element totals used as metric denominators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruthCounts {
    pub node_count: usize,
    pub arrow_count: usize,
    pub message_count: usize,
    pub note_count: usize,
    pub group_count: usize,
    pub box_count: usize,
    pub participant_count: usize,
    pub relevant_line_count: usize,
}

impl GroundTruthCounts {
    /// Sum of all element totals (the error-density denominator).
    pub fn element_total(&self) -> usize {
        self.node_count
            + self.arrow_count
            + self.message_count
            + self.note_count
            + self.group_count
            + self.box_count
            + self.participant_count
    }
}

/// Counts components; node occurrences are counted per arrow endpoint, so a
/// self-message contributes two.
pub fn count_components(script: &PumlScript) -> GroundTruthCounts {
    let mut c = GroundTruthCounts {
        relevant_line_count: script.statements.len(),
        ..Default::default()
    };
    for stmt in &script.statements {
        match &stmt.element {
            Element::Arrow(a) => {
                c.arrow_count += 1;
                c.node_count += 2;
                if a.message.is_some() {
                    c.message_count += 1;
                }
            }
            Element::Participant(_) => c.participant_count += 1,
            Element::Note(_) => c.note_count += 1,
            Element::Group(_) => c.group_count += 1,
            Element::Box(_) => c.box_count += 1,
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_line("PGWA -> SGW : 2a. Update Bearer Request (PGW Change Info)"),
            StatementKind::ArrowLine
        );
        assert_eq!(classify_line("end note"), StatementKind::StructuralEnd);
        assert_eq!(classify_line("@startuml"), StatementKind::Meta);
    }

    #[test]
    fn classify_keywords() {
        for (line, kind) in [
            ("  participant UE", StatementKind::ParticipantDecl),
            ("Actor UE", StatementKind::ParticipantDecl),
            ("database DB", StatementKind::ParticipantDecl),
            ("note over A : x -> y", StatementKind::NoteDecl),
            ("hnote over A", StatementKind::NoteDecl),
            ("box \"Core\" #LightBlue", StatementKind::BoxDecl),
            ("group Setup", StatementKind::GroupDecl),
            ("ALT success", StatementKind::GroupDecl),
            ("else failure", StatementKind::GroupDecl),
            ("loop", StatementKind::GroupDecl),
            ("end", StatementKind::StructuralEnd),
            ("end group", StatementKind::StructuralEnd),
            ("end box", StatementKind::StructuralEnd),
            ("endnote", StatementKind::StructuralEnd),
            ("title Attach -> Detach", StatementKind::Meta),
            ("autonumber", StatementKind::Meta),
            ("skinparam ArrowColor #red", StatementKind::Meta),
            ("hide footbox", StatementKind::Meta),
            ("scale 2", StatementKind::Meta),
            ("@enduml", StatementKind::Meta),
            ("box -> A", StatementKind::ArrowLine),
            ("", StatementKind::Other),
            ("' A -> B", StatementKind::Other),
            ("== Phase -> 2 ==", StatementKind::Other),
            ("activate A", StatementKind::Other),
            ("A ..> B", StatementKind::Other),
            ("-> B : m", StatementKind::ArrowLine),
        ] {
            assert_eq!(classify_line(line), kind, "{line:?}");
        }
    }

    #[test]
    fn three_line_script_has_one_statement() {
        let s = parse_script("t", "@startuml\nA -> B : hi\n@enduml\n").unwrap();
        assert_eq!(s.lines.len(), 3);
        assert_eq!(s.statements.len(), 1);
        assert_eq!(s.statements[0].kind(), StatementKind::ArrowLine);
        assert_eq!(s.statements[0].line_no, 2);
    }

    #[test]
    fn multi_line_note_is_folded() {
        let s = parse_script("t", "note over A,B\n  text1\nend note\nA -> B").unwrap();
        assert_eq!(s.statements.len(), 2);
        let note = &s.statements[0];
        assert_eq!((note.line_no, note.last_line_no), (1, 3));
        assert_eq!(note.text, "note over A,B\ntext1\nend note");
        match &note.element {
            Element::Note(n) => {
                assert_eq!(n.anchors, vec!["A", "B"]);
                assert_eq!(n.body, "text1");
                assert_eq!(n.position, NotePosition::Over);
                assert_eq!(n.span, (1, 3));
            }
            other => panic!("expected note, got {other:?}"),
        }
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn note_positions_and_colors() {
        let s = parse_script(
            "t",
            "note left of UE #yellow : hi\nnote right of \"Serving GW\": x\nnote left: y",
        )
        .unwrap();
        let notes: Vec<&NoteStatement> = s
            .statements
            .iter()
            .map(|st| match &st.element {
                Element::Note(n) => n,
                _ => panic!(),
            })
            .collect();
        assert_eq!(notes[0].position, NotePosition::LeftOf);
        assert_eq!(notes[0].anchors, vec!["UE"]);
        assert_eq!(notes[0].body, "hi");
        assert_eq!(notes[1].position, NotePosition::RightOf);
        assert_eq!(notes[1].anchors, vec!["Serving GW"]);
        assert!(notes[2].anchors.is_empty());
    }

    #[test]
    fn unterminated_blocks_warn_and_close_at_eof() {
        let s = parse_script("t", "box Core\ngroup G\nnote over A\nbody\nA -> B").unwrap();
        // The open note swallows the rest of the file.
        assert_eq!(s.statements.len(), 3);
        let kinds: Vec<StatementKind> = s
            .warnings
            .iter()
            .map(|w| match w {
                ParseWarning::UnterminatedBlock { kind, .. } => *kind,
                _ => panic!(),
            })
            .collect();
        assert_eq!(
            kinds,
            vec![
                StatementKind::NoteDecl,
                StatementKind::BoxDecl,
                StatementKind::GroupDecl
            ]
        );
    }

    #[test]
    fn malformed_arrow_reports_line() {
        let err = parse_script("t", "@startuml\nA -> : m\n").unwrap_err();
        assert_eq!(
            err,
            PumlError::MalformedArrow {
                line_no: Some(2),
                line: "A -> : m".into()
            }
        );
    }

    #[test]
    fn participants_with_aliases() {
        let p = parse_participant("participant \"Serving GW\" as SGW #red").unwrap();
        assert_eq!(p.name, "Serving GW");
        assert_eq!(p.alias.as_deref(), Some("SGW"));
        assert_eq!(p.color.as_deref(), Some("#red"));
        assert_eq!(p.node_name(), "SGW");

        let p = parse_participant("participant SGW as \"Serving GW\"").unwrap();
        assert_eq!(p.node_name(), "SGW");
        assert_eq!(p.name, "Serving GW");

        let p = parse_participant("actor UE").unwrap();
        assert_eq!(p.keyword, ParticipantKeyword::Actor);
        assert_eq!(p.alias, None);
        assert!(parse_participant("participant").is_none());
    }

    #[test]
    fn group_and_box_fields() {
        assert_eq!(
            parse_group("alt success case").unwrap(),
            GroupStatement {
                keyword: GroupKeyword::Alt,
                label: Some("success case".into())
            }
        );
        assert_eq!(parse_group("loop").unwrap().label, None);
        assert_eq!(
            parse_box("box \"Core Network\" #LightBlue"),
            BoxStatement {
                label: Some("Core Network".into()),
                color: Some("#LightBlue".into())
            }
        );
        assert_eq!(
            parse_box("box"),
            BoxStatement {
                label: None,
                color: None
            }
        );
    }

    #[test]
    fn count_examples() {
        let s = parse_script("t", "A -> B : m1\nB -> C").unwrap();
        let c = count_components(&s);
        assert_eq!((c.node_count, c.arrow_count, c.message_count), (4, 2, 1));
        assert_eq!(
            count_components(&parse_script("e", "").unwrap()),
            GroundTruthCounts::default()
        );
    }

    #[test]
    fn count_all_kinds() {
        let text = "@startuml\nparticipant A\nactor B\nbox X\nparticipant C\nend box\n\
                    alt ok\nA -> A : self\nelse ko\nA --> B\nend\nnote over A\nx\ny\nend note\n@enduml";
        let s = parse_script("t", text).unwrap();
        let c = count_components(&s);
        assert_eq!(c.participant_count, 3);
        assert_eq!(c.box_count, 1);
        assert_eq!(c.group_count, 2);
        assert_eq!(c.note_count, 1);
        assert_eq!(c.arrow_count, 2);
        assert_eq!(c.node_count, 4);
        assert_eq!(c.message_count, 1);
        assert_eq!(c.relevant_line_count, 9);
        assert!(s.warnings.is_empty(), "{:?}", s.warnings);
    }

    #[test]
    fn crlf_input() {
        let s = parse_script("t", "A -> B : m\r\nnote over A\r\nx\r\nend note\r\n").unwrap();
        assert_eq!(s.statements.len(), 2);
        assert_eq!(s.lines[0], "A -> B : m");
    }
}
