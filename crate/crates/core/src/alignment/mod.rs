//! Pairing of removed and added lines.
//!
//! Within each statement kind, removed and added lines are matched by a
//! minimum total Levenshtein distance assignment. Pairs whose normalized
//! distance exceeds the unrelatedness threshold are dissolved back into a
//! deletion plus an insertion.

mod assignment;
mod levenshtein;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diff::LineDelta;
use crate::puml::{classify_line, StatementKind};

pub use assignment::linear_sum_assignment;
pub use levenshtein::{levenshtein, normalized_levenshtein};

pub const DEFAULT_TAU: f64 = 0.7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignedPair {
    pub gt_delta: LineDelta,
    pub cand_delta: LineDelta,
    pub distance: usize,
    pub normalized_distance: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AlignmentResult {
    pub pairs: Vec<AlignedPair>,
    pub unpaired_removed: Vec<LineDelta>,
    pub unpaired_added: Vec<LineDelta>,
}

fn delta_kind(delta: &LineDelta) -> StatementKind {
    classify_line(delta.text.lines().next().unwrap_or(""))
}

fn by_kind(deltas: &[LineDelta]) -> BTreeMap<StatementKind, Vec<&LineDelta>> {
    let mut groups: BTreeMap<StatementKind, Vec<&LineDelta>> = BTreeMap::new();
    for d in deltas {
        groups.entry(delta_kind(d)).or_default().push(d);
    }
    groups
}

/// Optimal pairing between `a` and `b`, as index pairs into them.
///
/// Costs are total distance first, then the sum of positions (earlier lines
/// pair first), then positional skew. The solver always runs on the
/// lexicographically smaller side as rows, so swapping the operands yields
/// the transposed pairing.
fn pair_indices(a: &[&str], b: &[&str]) -> Vec<(usize, usize, usize)> {
    if a > b {
        return pair_indices(b, a)
            .into_iter()
            .map(|(i, j, d)| (j, i, d))
            .collect();
    }
    let dist: Vec<Vec<usize>> = a
        .iter()
        .map(|x| b.iter().map(|y| levenshtein(x, y)).collect())
        .collect();
    let k = (a.len() + b.len()) as i128;
    let skew_weight = 1i128;
    let position_weight = k * k + 1;
    let distance_weight = position_weight * (2 * k * k + 1) + position_weight;
    let costs: Vec<Vec<i64>> = dist
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &d)| {
                    let (ii, jj) = (i as i128, j as i128);
                    let c = d as i128 * distance_weight
                        + (ii + jj) * position_weight
                        + (ii - jj).abs() * skew_weight;
                    i64::try_from(c).expect("assignment cost overflow")
                })
                .collect()
        })
        .collect();
    linear_sum_assignment(&costs)
        .into_iter()
        .map(|(i, j)| (i, j, dist[i][j]))
        .collect()
}

/// Pairs removed with added lines per statement kind.
///
/// Pairs with normalized distance above `tau` become one unpaired removed and
/// one unpaired added line. Output lists are ordered by line number.
pub fn assign_pairs(removed: &[LineDelta], added: &[LineDelta], tau: f64) -> AlignmentResult {
    let mut result = AlignmentResult::default();
    let removed_groups = by_kind(removed);
    let mut added_groups = by_kind(added);

    for (kind, rs) in removed_groups {
        let adds = added_groups.remove(&kind).unwrap_or_default();
        let r_text: Vec<&str> = rs.iter().map(|d| d.text.trim()).collect();
        let a_text: Vec<&str> = adds.iter().map(|d| d.text.trim()).collect();
        let mut r_used = vec![false; rs.len()];
        let mut a_used = vec![false; adds.len()];
        for (i, j, distance) in pair_indices(&r_text, &a_text) {
            let longest = r_text[i].chars().count().max(a_text[j].chars().count());
            let normalized_distance = if longest == 0 {
                0.0
            } else {
                distance as f64 / longest as f64
            };
            if normalized_distance > tau {
                continue;
            }
            r_used[i] = true;
            a_used[j] = true;
            result.pairs.push(AlignedPair {
                gt_delta: rs[i].clone(),
                cand_delta: adds[j].clone(),
                distance,
                normalized_distance,
            });
        }
        result.unpaired_removed.extend(
            rs.iter()
                .zip(&r_used)
                .filter(|(_, &u)| !u)
                .map(|(d, _)| (*d).clone()),
        );
        result.unpaired_added.extend(
            adds.iter()
                .zip(&a_used)
                .filter(|(_, &u)| !u)
                .map(|(d, _)| (*d).clone()),
        );
    }
    for (_, adds) in added_groups {
        result.unpaired_added.extend(adds.into_iter().cloned());
    }

    result
        .pairs
        .sort_by_key(|p| (p.gt_delta.line_no(), p.cand_delta.line_no()));
    result.unpaired_removed.sort_by_key(LineDelta::line_no);
    result.unpaired_added.sort_by_key(LineDelta::line_no);
    result
}
