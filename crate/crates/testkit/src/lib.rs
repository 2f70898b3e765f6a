//! Test fixtures for puml-metrics: a synthetic sequence-diagram generator,
//! a mutation harness with known expected error counts, and brute-force
//! oracles for the core algorithms.

pub mod corpus;
pub mod generate;
pub mod mutate;
pub mod oracle;

pub use corpus::{dataset_corpus, CorpusFile, DATASET_BINS};
pub use generate::{
    generate, ArrowSpec, GenOptions, GroupSpec, Item, NoteSpec, ParticipantSpec, Script, Written,
};
pub use mutate::{mutate, mutate_one, Expected, Mutation};
