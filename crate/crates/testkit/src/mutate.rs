//! Applies known edits to a generated script and tallies the errors each
//! edit must produce.
//!
//! Substitutions are small edits on arrows that carry unique messages, so the
//! mutated line is always closest to its original. Inserted elements are
//! built from letters the generator never uses, keeping them far (normalized
//! distance above 0.7) from any deleted element of the same kind.

use std::collections::BTreeMap;

use puml_metrics::{ErrorCategory, ErrorKind};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::generate::{BoxSpec, GroupSpec, Item, NoteSpec, ParticipantSpec, Script, Written};

/// Expected error counts keyed by (category, kind).
pub type Expected = BTreeMap<(ErrorCategory, ErrorKind), u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mutation {
    FlipArrow,
    ToggleStyle,
    RenameNode,
    EditMessage,
    InsertNote,
    DeleteNote,
    InsertGroup,
    DeleteGroup,
    InsertBox,
    DeleteBox,
    InsertParticipant,
    DeleteParticipant,
}

impl Mutation {
    pub const ALL: [Mutation; 12] = [
        Mutation::FlipArrow,
        Mutation::ToggleStyle,
        Mutation::RenameNode,
        Mutation::EditMessage,
        Mutation::InsertNote,
        Mutation::DeleteNote,
        Mutation::InsertGroup,
        Mutation::DeleteGroup,
        Mutation::InsertBox,
        Mutation::DeleteBox,
        Mutation::InsertParticipant,
        Mutation::DeleteParticipant,
    ];

    pub fn expected(self) -> (ErrorCategory, ErrorKind) {
        use ErrorCategory as C;
        use ErrorKind as K;
        match self {
            Mutation::FlipArrow => (C::EdgeDirection, K::Substitution),
            Mutation::ToggleStyle => (C::EdgeType, K::Substitution),
            Mutation::RenameNode => (C::Node, K::Substitution),
            Mutation::EditMessage => (C::Message, K::Substitution),
            Mutation::InsertNote => (C::Note, K::Insertion),
            Mutation::DeleteNote => (C::Note, K::Deletion),
            Mutation::InsertGroup => (C::Group, K::Insertion),
            Mutation::DeleteGroup => (C::Group, K::Deletion),
            Mutation::InsertBox => (C::Box, K::Insertion),
            Mutation::DeleteBox => (C::Box, K::Deletion),
            Mutation::InsertParticipant => (C::Participant, K::Insertion),
            Mutation::DeleteParticipant => (C::Participant, K::Deletion),
        }
    }
}

/// Path to a nested item list: (item index, branch) pairs, where branch 0 is
/// a group's main body and branch k its k-th `else`.
type ListPath = Vec<(usize, usize)>;

fn list_paths(items: &[Item], prefix: &ListPath, out: &mut Vec<ListPath>) {
    out.push(prefix.clone());
    for (i, item) in items.iter().enumerate() {
        if let Item::Group(g) = item {
            for b in 0..=g.branches.len() {
                let list = if b == 0 { &g.body } else { &g.branches[b - 1].1 };
                let mut path = prefix.clone();
                path.push((i, b));
                list_paths(list, &path, out);
            }
        }
    }
}

fn list_mut<'a>(items: &'a mut Vec<Item>, path: &[(usize, usize)]) -> &'a mut Vec<Item> {
    match path.split_first() {
        None => items,
        Some((&(i, b), rest)) => match &mut items[i] {
            Item::Group(g) => {
                let list = if b == 0 {
                    &mut g.body
                } else {
                    &mut g.branches[b - 1].1
                };
                list_mut(list, rest)
            }
            _ => unreachable!("list path through a non-group item"),
        },
    }
}

/// All (list, index) positions holding an item matching `pred`.
fn positions(items: &mut Vec<Item>, pred: impl Fn(&Item) -> bool) -> Vec<(ListPath, usize)> {
    let mut paths = Vec::new();
    list_paths(items, &Vec::new(), &mut paths);
    let mut out = Vec::new();
    for path in paths {
        let list = list_mut(items, &path);
        out.extend(
            list.iter()
                .enumerate()
                .filter(|(_, it)| pred(it))
                .map(|(i, _)| (path.clone(), i)),
        );
    }
    out
}

/// Text from letters absent in generated ground truths.
fn foreign(rng: &mut impl Rng, len: usize) -> String {
    const ALPHABET: &[u8] = b"QXZJV";
    (0..len).map(|_| *ALPHABET.choose(rng).unwrap() as char).collect()
}

fn mutable_arrow(item: &Item) -> bool {
    matches!(item, Item::Arrow(a)
        if !a.mutated && a.message.is_some() && a.source != a.target && a.written != Written::Bidirectional)
}

fn wrappable(item: &Item) -> bool {
    matches!(item, Item::Arrow(_) | Item::Note(_) | Item::Filler(_))
}

/// Tries one mutation; false when the script has no eligible target.
fn apply(script: &mut Script, rng: &mut impl Rng, mutation: Mutation) -> bool {
    let names = script.node_names();
    let items = &mut script.items;
    match mutation {
        Mutation::FlipArrow | Mutation::ToggleStyle | Mutation::RenameNode | Mutation::EditMessage => {
            let Some((path, idx)) = positions(items, mutable_arrow).choose(rng).cloned() else {
                return false;
            };
            let Item::Arrow(arrow) = &mut list_mut(items, &path)[idx] else {
                unreachable!()
            };
            arrow.mutated = true;
            match mutation {
                Mutation::FlipArrow => std::mem::swap(&mut arrow.source, &mut arrow.target),
                Mutation::ToggleStyle => arrow.dashed = !arrow.dashed,
                Mutation::RenameNode => {
                    let end = if rng.gen_bool(0.5) {
                        &mut arrow.source
                    } else {
                        &mut arrow.target
                    };
                    end.push('x');
                }
                _ => arrow.message.as_mut().unwrap().push('!'),
            }
            true
        }
        Mutation::InsertNote => {
            let mut paths = Vec::new();
            list_paths(items, &Vec::new(), &mut paths);
            let path = paths.choose(rng).unwrap().clone();
            let body = if rng.gen_bool(0.5) {
                vec![foreign(rng, 100)]
            } else {
                vec![foreign(rng, 50), foreign(rng, 50)]
            };
            let note = NoteSpec {
                position: "over",
                anchors: vec![names.choose(rng).cloned().unwrap_or_else(|| "UE".into())],
                body,
                inserted: true,
            };
            let list = list_mut(items, &path);
            let at = rng.gen_range(0..=list.len());
            list.insert(at, Item::Note(note));
            true
        }
        Mutation::DeleteNote => {
            let Some((path, idx)) = positions(items, |it| matches!(it, Item::Note(n) if !n.inserted))
                .choose(rng)
                .cloned()
            else {
                return false;
            };
            list_mut(items, &path).remove(idx);
            true
        }
        Mutation::InsertGroup => {
            let mut paths = Vec::new();
            list_paths(items, &Vec::new(), &mut paths);
            let path = paths.choose(rng).unwrap().clone();
            let label = foreign(rng, 40);
            let list = list_mut(items, &path);
            let at = rng.gen_range(0..=list.len());
            let mut width = 0;
            let max = rng.gen_range(0..=3);
            while width < max && at + width < list.len() && wrappable(&list[at + width]) {
                width += 1;
            }
            let body: Vec<Item> = list.drain(at..at + width).collect();
            list.insert(
                at,
                Item::Group(GroupSpec {
                    keyword: "group".into(),
                    label,
                    body,
                    branches: Vec::new(),
                    inserted: true,
                }),
            );
            true
        }
        Mutation::DeleteGroup => {
            let plain = |it: &Item| matches!(it, Item::Group(g) if !g.inserted && g.branches.is_empty());
            let Some((path, idx)) = positions(items, plain).choose(rng).cloned() else {
                return false;
            };
            let list = list_mut(items, &path);
            let Item::Group(group) = list.remove(idx) else {
                unreachable!()
            };
            list.splice(idx..idx, group.body);
            true
        }
        Mutation::InsertBox => {
            let starts: Vec<usize> = (0..items.len())
                .filter(|&i| matches!(items[i], Item::Participant(_)))
                .collect();
            let Some(&at) = starts.choose(rng) else {
                return false;
            };
            let width =
                if at + 1 < items.len() && matches!(items[at + 1], Item::Participant(_)) && rng.gen_bool(0.5)
                {
                    2
                } else {
                    1
                };
            let members = items
                .drain(at..at + width)
                .map(|it| match it {
                    Item::Participant(p) => p,
                    _ => unreachable!(),
                })
                .collect();
            items.insert(
                at,
                Item::Box(BoxSpec {
                    label: foreign(rng, 40),
                    color: None,
                    members,
                    inserted: true,
                }),
            );
            true
        }
        Mutation::DeleteBox => {
            let boxes: Vec<usize> = (0..items.len())
                .filter(|&i| matches!(&items[i], Item::Box(b) if !b.inserted))
                .collect();
            let Some(&at) = boxes.choose(rng) else {
                return false;
            };
            let Item::Box(b) = items.remove(at) else {
                unreachable!()
            };
            items.splice(at..at, b.members.into_iter().map(Item::Participant));
            true
        }
        Mutation::InsertParticipant => {
            let header = items
                .iter()
                .take_while(|it| matches!(it, Item::Participant(_) | Item::Box(_)))
                .count();
            let at = rng.gen_range(0..=header);
            let spec = ParticipantSpec {
                keyword: "participant".into(),
                name: foreign(rng, 40),
                display: None,
                inserted: true,
            };
            items.insert(at, Item::Participant(spec));
            true
        }
        Mutation::DeleteParticipant => {
            // (top-level index, box member index)
            let mut targets: Vec<(usize, Option<usize>)> = Vec::new();
            for (i, item) in items.iter().enumerate() {
                match item {
                    Item::Participant(p) if !p.inserted => targets.push((i, None)),
                    Item::Box(b) => targets.extend(
                        b.members
                            .iter()
                            .enumerate()
                            .filter(|(_, m)| !m.inserted)
                            .map(|(j, _)| (i, Some(j))),
                    ),
                    _ => {}
                }
            }
            let Some(&(i, member)) = targets.choose(rng) else {
                return false;
            };
            match (member, &mut items[i]) {
                (Some(j), Item::Box(b)) => {
                    b.members.remove(j);
                }
                _ => {
                    items.remove(i);
                }
            }
            true
        }
    }
}

/// Applies `count` random mutations. Returns the mutated script, the
/// mutations actually applied and the errors they must produce.
pub fn mutate(script: &Script, rng: &mut impl Rng, count: usize) -> (Script, Vec<Mutation>, Expected) {
    let mut out = script.clone();
    let mut applied = Vec::new();
    let mut attempts = 0;
    while applied.len() < count && attempts < count * 20 {
        attempts += 1;
        let mutation = *Mutation::ALL.choose(rng).unwrap();
        if apply(&mut out, rng, mutation) {
            applied.push(mutation);
        }
    }
    let mut expected = Expected::new();
    for m in &applied {
        *expected.entry(m.expected()).or_default() += 1;
    }
    (out, applied, expected)
}

/// Applies one specific mutation if possible.
pub fn mutate_one(script: &mut Script, rng: &mut impl Rng, mutation: Mutation) -> bool {
    apply(script, rng, mutation)
}
