//! Slow, obviously-correct reference implementations.

/// Full-matrix Wagner-Fischer edit distance over chars.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

/// Longest common subsequence length by dynamic programming.
pub fn lcs<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            d[i][j] = if a[i - 1] == b[j - 1] {
                d[i - 1][j - 1] + 1
            } else {
                d[i - 1][j].max(d[i][j - 1])
            };
        }
    }
    d[a.len()][b.len()]
}

/// Minimum number of line insertions plus deletions.
pub fn line_edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.len() + b.len() - 2 * lcs(a, b)
}

/// Minimum total cost of matching min(rows, cols) pairs, by enumerating
/// every injective map from the smaller side into the larger.
pub fn brute_force_assignment(costs: &[Vec<i64>]) -> i64 {
    let rows = costs.len();
    let cols = costs.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let matrix: Vec<Vec<i64>> = if rows <= cols {
        costs.to_vec()
    } else {
        (0..cols)
            .map(|j| (0..rows).map(|i| costs[i][j]).collect())
            .collect()
    };
    let mut used = vec![false; matrix[0].len()];
    best(&matrix, 0, &mut used)
}

fn best(m: &[Vec<i64>], row: usize, used: &mut [bool]) -> i64 {
    if row == m.len() {
        return 0;
    }
    let mut result = i64::MAX;
    for j in 0..used.len() {
        if !used[j] {
            used[j] = true;
            result = result.min(m[row][j] + best(m, row + 1, used));
            used[j] = false;
        }
    }
    result
}
