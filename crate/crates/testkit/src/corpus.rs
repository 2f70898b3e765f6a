//! A 50-file dataset whose ground truths fall into the default line-count
//! bins as 10, 13, 5, 13 and 9 files.

use rand::Rng;

use crate::generate::{generate, GenOptions, Script};
use crate::mutate::{mutate, Expected};

/// (lowest, highest, files) per relevant-line bin.
pub const DATASET_BINS: [(usize, usize, usize); 5] =
    [(5, 20, 10), (21, 30, 13), (31, 40, 5), (41, 50, 13), (51, 100, 9)];

pub struct CorpusFile {
    pub name: String,
    pub ground_truth: Script,
    pub candidate: Script,
    pub expected: Expected,
}

/// Ground truths with the bin shape above, each paired with a candidate
/// carrying up to `max_mutations` known edits.
pub fn dataset_corpus(rng: &mut impl Rng, max_mutations: usize) -> Vec<CorpusFile> {
    let options = GenOptions::default();
    let mut files = Vec::new();
    for (lo, hi, n) in DATASET_BINS {
        for _ in 0..n {
            let statements = rng.gen_range(lo..=hi);
            let ground_truth = generate(rng, statements, &options);
            let k = rng.gen_range(0..=max_mutations);
            let (candidate, _, expected) = mutate(&ground_truth, rng, k);
            files.push(CorpusFile {
                name: format!("diagram_{:02}.puml", files.len() + 1),
                ground_truth,
                candidate,
                expected,
            });
        }
    }
    files
}
