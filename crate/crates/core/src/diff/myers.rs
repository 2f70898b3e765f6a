//! Myers O(ND) shortest edit script over lines.

use super::{FileDiff, LineDelta};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditOp {
    /// Unchanged line: (gt index, cand index), 0-based.
    Equal(usize, usize),
    Delete(usize),
    Insert(usize),
}

impl EditOp {
    fn transpose(self) -> EditOp {
        match self {
            EditOp::Equal(i, j) => EditOp::Equal(j, i),
            EditOp::Delete(i) => EditOp::Insert(i),
            EditOp::Insert(j) => EditOp::Delete(j),
        }
    }
}

fn myers<T: PartialEq>(a: &[T], b: &[T]) -> Vec<EditOp> {
    let (n, m) = (a.len() as isize, b.len() as isize);
    let max = n + m;
    if max == 0 {
        return Vec::new();
    }
    let offset = max + 1;
    let idx = |k: isize| (k + offset) as usize;
    let mut v = vec![0isize; (2 * max + 3) as usize];
    let mut trace: Vec<Vec<isize>> = Vec::new();

    'search: for d in 0..=max {
        trace.push(v.clone());
        let mut k = -d;
        while k <= d {
            let mut x = if k == -d || (k != d && v[idx(k - 1)] < v[idx(k + 1)]) {
                v[idx(k + 1)]
            } else {
                v[idx(k - 1)] + 1
            };
            let mut y = x - k;
            while x < n && y < m && a[x as usize] == b[y as usize] {
                x += 1;
                y += 1;
            }
            v[idx(k)] = x;
            if x >= n && y >= m {
                break 'search;
            }
            k += 2;
        }
    }

    let mut ops = Vec::new();
    let (mut x, mut y) = (n, m);
    for (d, v) in trace.iter().enumerate().rev() {
        let d = d as isize;
        let k = x - y;
        let prev_k = if k == -d || (k != d && v[idx(k - 1)] < v[idx(k + 1)]) {
            k + 1
        } else {
            k - 1
        };
        let prev_x = v[idx(prev_k)];
        let prev_y = prev_x - prev_k;
        while x > prev_x && y > prev_y {
            ops.push(EditOp::Equal((x - 1) as usize, (y - 1) as usize));
            x -= 1;
            y -= 1;
        }
        if d > 0 {
            if x == prev_x {
                ops.push(EditOp::Insert((y - 1) as usize));
            } else {
                ops.push(EditOp::Delete((x - 1) as usize));
            }
        }
        x = prev_x;
        y = prev_y;
    }
    ops.reverse();
    ops
}

fn shortest_edit_script<T: PartialEq>(a: &[T], b: &[T]) -> Vec<EditOp> {
    let prefix = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    let suffix = a[prefix..]
        .iter()
        .rev()
        .zip(b[prefix..].iter().rev())
        .take_while(|(x, y)| x == y)
        .count();
    let (a_mid, b_mid) = (&a[prefix..a.len() - suffix], &b[prefix..b.len() - suffix]);

    let mut ops: Vec<EditOp> = (0..prefix).map(|i| EditOp::Equal(i, i)).collect();
    ops.extend(myers(a_mid, b_mid).into_iter().map(|op| match op {
        EditOp::Equal(i, j) => EditOp::Equal(i + prefix, j + prefix),
        EditOp::Delete(i) => EditOp::Delete(i + prefix),
        EditOp::Insert(j) => EditOp::Insert(j + prefix),
    }));
    ops.extend((0..suffix).map(|s| EditOp::Equal(a.len() - suffix + s, b.len() - suffix + s)));
    ops
}

/// Within each run of changes, deletions come before insertions.
fn deletions_first(ops: Vec<EditOp>) -> Vec<EditOp> {
    let mut out = Vec::with_capacity(ops.len());
    let mut inserts = Vec::new();
    for op in ops {
        match op {
            EditOp::Delete(_) => out.push(op),
            EditOp::Insert(_) => inserts.push(op),
            EditOp::Equal(..) => {
                out.append(&mut inserts);
                out.push(op);
            }
        }
    }
    out.append(&mut inserts);
    out
}

/// Minimal edit script between two line sequences.
///
/// The search always runs on the lexicographically smaller sequence first
/// and is transposed back when needed, so `edit_script(b, a)` is exactly the
/// transpose of `edit_script(a, b)`.
pub fn edit_script<T: PartialEq + Ord>(a: &[T], b: &[T]) -> Vec<EditOp> {
    let ops = if a <= b {
        shortest_edit_script(a, b)
    } else {
        shortest_edit_script(b, a)
            .into_iter()
            .map(EditOp::transpose)
            .collect()
    };
    deletions_first(ops)
}

/// Diffs two line sequences (compared after right-trim).
pub fn diff_lines(gt_name: &str, cand_name: &str, gt: &[String], cand: &[String]) -> FileDiff {
    let a: Vec<&str> = gt.iter().map(|l| l.trim_end()).collect();
    let b: Vec<&str> = cand.iter().map(|l| l.trim_end()).collect();
    let deltas = edit_script(&a, &b)
        .into_iter()
        .map(|op| match op {
            EditOp::Equal(i, j) => LineDelta::context(cand[j].clone(), i + 1, j + 1),
            EditOp::Delete(i) => LineDelta::removed(gt[i].clone(), i + 1),
            EditOp::Insert(j) => LineDelta::added(cand[j].clone(), j + 1),
        })
        .collect();
    FileDiff {
        gt_name: gt_name.to_string(),
        cand_name: cand_name.to_string(),
        deltas,
    }
}
