//! Random PlantUML sequence diagrams built from a small item tree.
//!
//! Ground-truth text deliberately avoids the uppercase letters Q, X, Z, J
//! and V; the mutation harness builds inserted elements from exactly those
//! letters so they never look similar to anything already present.

use rand::seq::SliceRandom;
use rand::Rng;

pub const NAMES: [&str; 16] = [
    "UE", "AMF", "SMF", "UPF", "PCF", "AUSF", "UDM", "NRF", "SGW", "PGW", "MME", "HSS", "ENB", "GNB", "NEF",
    "BSF",
];

const PHRASES: [&str; 17] = [
    "Registration Request",
    "Registration Accept",
    "Create Session Request",
    "Create Session Response",
    "Modify Bearer Request",
    "Modify Bearer Response",
    "Authentication Request",
    "Authentication Response",
    "Security Mode Command",
    "PDU Session Establishment",
    "Update Bearer Request (PGW Change Info)",
    "Delete Session Request",
    "Service Request",
    "Attach Complete",
    "Paging",
    "Handover Required",
    "Path Switch Request",
];

const BOX_LABELS: [&str; 4] = ["Core Network", "Access Network", "Home Network", "Radio"];
const COLORS: [&str; 4] = ["#red", "#blue", "#LightBlue", "#green"];
const KEYWORDS: [&str; 7] = [
    "participant",
    "database",
    "entity",
    "control",
    "boundary",
    "collections",
    "queue",
];
const GROUPS: [&str; 6] = ["loop", "opt", "group", "par", "critical", "break"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticipantSpec {
    pub keyword: String,
    pub name: String,
    /// Quoted display name; `name` then acts as the alias.
    pub display: Option<String>,
    pub inserted: bool,
}

impl ParticipantSpec {
    fn render(&self) -> String {
        match &self.display {
            Some(d) => format!("{} \"{}\" as {}", self.keyword, d, self.name),
            None => format!("{} {}", self.keyword, self.name),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Written {
    Forward,
    Reversed,
    Bidirectional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowSpec {
    /// Canonical sender.
    pub source: String,
    /// Canonical receiver.
    pub target: String,
    pub dashed: bool,
    pub written: Written,
    pub head: &'static str,
    pub color: Option<&'static str>,
    pub message: Option<String>,
    pub mutated: bool,
}

impl ArrowSpec {
    pub fn render(&self) -> String {
        let shaft_end = if self.dashed { "-" } else { "" };
        let line = match self.written {
            Written::Forward => {
                let color = self.color.map(|c| format!("[{c}]")).unwrap_or_default();
                format!(
                    "{} -{}{}{} {}",
                    self.source, color, shaft_end, self.head, self.target
                )
            }
            Written::Reversed => format!("{} <-{} {}", self.target, shaft_end, self.source),
            Written::Bidirectional => format!("{} <-{}> {}", self.source, shaft_end, self.target),
        };
        match &self.message {
            Some(m) => format!("{line} : {m}"),
            None => line,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoteSpec {
    /// `over`, `left of` or `right of`.
    pub position: &'static str,
    pub anchors: Vec<String>,
    pub body: Vec<String>,
    pub inserted: bool,
}

impl NoteSpec {
    fn render(&self, indent: &str, out: &mut Vec<String>) {
        let head = format!("{indent}note {} {}", self.position, self.anchors.join(", "));
        if self.body.len() == 1 {
            out.push(format!("{head} : {}", self.body[0]));
        } else {
            out.push(head);
            out.extend(self.body.iter().map(|l| format!("{indent}  {l}")));
            out.push(format!("{indent}end note"));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub keyword: String,
    pub label: String,
    pub body: Vec<Item>,
    /// `else` branches (label, body); only for `alt`.
    pub branches: Vec<(String, Vec<Item>)>,
    pub inserted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxSpec {
    pub label: String,
    pub color: Option<&'static str>,
    pub members: Vec<ParticipantSpec>,
    pub inserted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Participant(ParticipantSpec),
    Arrow(ArrowSpec),
    Note(NoteSpec),
    Group(GroupSpec),
    Box(BoxSpec),
    /// Non-statement line: blank, comment, divider, delay or spacer.
    Filler(String),
}

impl Item {
    /// Relevant statements this item contributes.
    pub fn statements(&self) -> usize {
        match self {
            Item::Participant(_) | Item::Arrow(_) | Item::Note(_) => 1,
            Item::Group(g) => {
                1 + count(&g.body) + g.branches.iter().map(|(_, b)| 1 + count(b)).sum::<usize>()
            }
            Item::Box(b) => 1 + b.members.len(),
            Item::Filler(_) => 0,
        }
    }

    fn render(&self, depth: usize, out: &mut Vec<String>) {
        let indent = "  ".repeat(depth);
        match self {
            Item::Participant(p) => out.push(format!("{indent}{}", p.render())),
            Item::Arrow(a) => out.push(format!("{indent}{}", a.render())),
            Item::Note(n) => n.render(&indent, out),
            Item::Group(g) => {
                out.push(format!("{indent}{} {}", g.keyword, g.label));
                render_items(&g.body, depth + 1, out);
                for (label, body) in &g.branches {
                    out.push(format!("{indent}else {label}"));
                    render_items(body, depth + 1, out);
                }
                out.push(format!("{indent}end"));
            }
            Item::Box(b) => {
                let color = b.color.map(|c| format!(" {c}")).unwrap_or_default();
                out.push(format!("{indent}box \"{}\"{color}", b.label));
                for m in &b.members {
                    out.push(format!("{indent}  {}", m.render()));
                }
                out.push(format!("{indent}end box"));
            }
            Item::Filler(line) => out.push(line.clone()),
        }
    }
}

pub fn count(items: &[Item]) -> usize {
    items.iter().map(Item::statements).sum()
}

fn render_items(items: &[Item], depth: usize, out: &mut Vec<String>) {
    for item in items {
        item.render(depth, out);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script {
    pub header: Vec<String>,
    pub items: Vec<Item>,
}

impl Script {
    pub fn render(&self) -> String {
        let mut lines = vec!["@startuml".to_string()];
        lines.extend(self.header.iter().cloned());
        render_items(&self.items, 0, &mut lines);
        lines.push("@enduml".to_string());
        let mut text = lines.join("\n");
        text.push('\n');
        text
    }

    pub fn statement_count(&self) -> usize {
        count(&self.items)
    }

    /// Node names usable on arrows (aliases where declared).
    pub fn node_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        for item in &self.items {
            match item {
                Item::Participant(p) => names.push(p.name.clone()),
                Item::Box(b) => names.extend(b.members.iter().map(|m| m.name.clone())),
                _ => {}
            }
        }
        names
    }
}

#[derive(Debug, Clone)]
pub struct GenOptions {
    /// Allow `actor` declarations (not in normal form).
    pub allow_actor: bool,
    /// Allow arrows that the mutation harness never touches (bidirectional,
    /// self-messages, message-less).
    pub exotic_arrows: bool,
    pub max_depth: usize,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            allow_actor: false,
            exotic_arrows: true,
            max_depth: 2,
        }
    }
}

/// Lowercase token from `a`..=`m`.
pub fn token(rng: &mut impl Rng, len: usize) -> String {
    (0..len).map(|_| rng.gen_range(b'a'..=b'm') as char).collect()
}

struct Gen<'a, R: Rng> {
    rng: &'a mut R,
    options: &'a GenOptions,
    names: Vec<String>,
    step: usize,
    seen_arrows: std::collections::HashSet<String>,
}

impl<R: Rng> Gen<'_, R> {
    fn message(&mut self) -> String {
        self.step += 1;
        let phrase = PHRASES.choose(self.rng).unwrap();
        format!("{}. {} (ref {})", self.step, phrase, token(self.rng, 16))
    }

    fn pick_name(&mut self) -> String {
        self.names.choose(self.rng).unwrap().clone()
    }

    fn arrow(&mut self) -> ArrowSpec {
        let source = self.pick_name();
        let mut target = self.pick_name();
        let exotic = self.options.exotic_arrows;
        if source == target && !(exotic && self.rng.gen_bool(0.3)) {
            target = self
                .names
                .iter()
                .find(|n| **n != source)
                .cloned()
                .unwrap_or(target);
        }
        let roll = self.rng.gen_range(0..100);
        let written = if exotic && roll < 5 {
            Written::Bidirectional
        } else if roll < 20 {
            Written::Reversed
        } else {
            Written::Forward
        };
        let head = if written == Written::Forward {
            *[">", ">", ">", ">>", "\\", "/"].choose(self.rng).unwrap()
        } else {
            ">"
        };
        let color = (written == Written::Forward && self.rng.gen_bool(0.1))
            .then(|| *COLORS.choose(self.rng).unwrap());
        let mut spec = ArrowSpec {
            source,
            target,
            dashed: self.rng.gen_bool(0.35),
            written,
            head,
            color,
            message: None,
            mutated: false,
        };
        if !exotic || self.rng.gen_bool(0.92) || self.seen_arrows.contains(&spec.render()) {
            spec.message = Some(self.message());
        }
        self.seen_arrows.insert(spec.render());
        spec
    }

    fn note(&mut self) -> NoteSpec {
        let position = *["over", "left of", "right of"].choose(self.rng).unwrap();
        let mut anchors = vec![self.pick_name()];
        if position == "over" && self.rng.gen_bool(0.3) {
            let other = self.pick_name();
            if other != anchors[0] {
                anchors.push(other);
            }
        }
        let lines = self.rng.gen_range(1..=3);
        let body = (0..lines)
            .map(|_| format!("Context {} {}", token(self.rng, 8), token(self.rng, 6)))
            .collect();
        NoteSpec {
            position,
            anchors,
            body,
            inserted: false,
        }
    }

    fn filler(&mut self) -> Item {
        let line = match self.rng.gen_range(0..5) {
            0 => String::new(),
            1 => format!("' step {} {}", self.step, token(self.rng, 5)),
            2 => format!("== Phase {} ==", self.step),
            3 => "...".to_string(),
            _ => "|||".to_string(),
        };
        Item::Filler(line)
    }

    fn fill(&mut self, mut budget: usize, depth: usize) -> Vec<Item> {
        let mut items = Vec::new();
        while budget > 0 {
            if self.rng.gen_bool(0.08) {
                items.push(self.filler());
            }
            let roll = self.rng.gen_range(0..100);
            if roll < 12 && budget >= 3 && depth < self.options.max_depth {
                let group = self.group(budget, depth);
                budget -= group.statements();
                items.push(group);
            } else if roll < 25 {
                items.push(Item::Note(self.note()));
                budget -= 1;
            } else {
                items.push(Item::Arrow(self.arrow()));
                budget -= 1;
            }
        }
        items
    }

    /// A group using at most `budget` statements (`budget >= 2`).
    fn group(&mut self, budget: usize, depth: usize) -> Item {
        let alt = self.rng.gen_bool(0.4);
        let keyword = if alt {
            "alt".to_string()
        } else {
            GROUPS.choose(self.rng).unwrap().to_string()
        };
        let mut left = budget - 1;
        let label = format!(
            "{} {}",
            ["success", "failure", "retry", "timer"].choose(self.rng).unwrap(),
            token(self.rng, 6)
        );
        let body_size = self.rng.gen_range(1..=left.min(4));
        left -= body_size;
        let body = self.fill(body_size, depth + 1);
        let mut branches = Vec::new();
        if alt {
            while left >= 2 && branches.len() < 2 && self.rng.gen_bool(0.6) {
                let size = self.rng.gen_range(1..=(left - 1).min(3));
                left -= size + 1;
                let branch_label = format!("case {}", token(self.rng, 5));
                branches.push((branch_label, self.fill(size, depth + 1)));
            }
        }
        Item::Group(GroupSpec {
            keyword,
            label,
            body,
            branches,
            inserted: false,
        })
    }
}

/// Generates a script with exactly `statements` relevant statements
/// (at least 2).
pub fn generate(rng: &mut impl Rng, statements: usize, options: &GenOptions) -> Script {
    let statements = statements.max(2);
    let mut header = Vec::new();
    if rng.gen_bool(0.5) {
        header.push(format!("title Call Flow {}", token(rng, 4)));
    }
    if rng.gen_bool(0.4) {
        header.push("autonumber".to_string());
    }
    if rng.gen_bool(0.3) {
        header.push("skinparam sequenceMessageAlign center".to_string());
    }
    if rng.gen_bool(0.2) {
        header.push("hide footbox".to_string());
    }

    // Participants take up to a third of the budget, at least two names.
    let max_participants = (statements / 3).clamp(2, 7);
    let n = rng.gen_range(2..=max_participants);
    let mut pool: Vec<&str> = NAMES.to_vec();
    pool.shuffle(rng);
    let mut participants: Vec<ParticipantSpec> = pool[..n]
        .iter()
        .map(|name| {
            let keyword = if options.allow_actor && rng.gen_bool(0.25) {
                "actor"
            } else if rng.gen_bool(0.7) {
                "participant"
            } else {
                KEYWORDS.choose(rng).unwrap()
            };
            let display = rng
                .gen_bool(0.2)
                .then(|| format!("{name} Node {}", token(rng, 3)));
            ParticipantSpec {
                keyword: keyword.to_string(),
                name: name.to_string(),
                display,
                inserted: false,
            }
        })
        .collect();

    let mut items = Vec::new();
    let mut used = 0;
    if n >= 3 && statements >= n + 4 && rng.gen_bool(0.4) {
        let members: Vec<ParticipantSpec> = participants.drain(..2).collect();
        used += 1 + members.len();
        items.push(Item::Box(BoxSpec {
            label: BOX_LABELS.choose(rng).unwrap().to_string(),
            color: rng.gen_bool(0.5).then(|| *COLORS.choose(rng).unwrap()),
            members,
            inserted: false,
        }));
    }
    used += participants.len();
    items.extend(participants.into_iter().map(Item::Participant));

    let mut gen = Gen {
        rng,
        options,
        names: Vec::new(),
        step: 0,
        seen_arrows: Default::default(),
    };
    let script = Script {
        header: header.clone(),
        items: items.clone(),
    };
    gen.names = script.node_names();
    items.extend(gen.fill(statements - used, 0));
    if gen.rng.gen_bool(0.5) {
        items.push(Item::Filler(String::new()));
    }
    Script { header, items }
}
