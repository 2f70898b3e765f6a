//! Rectangular linear sum assignment.
//!
//! Shortest augmenting paths with dual potentials (the Jonker-Volgenant
//! family), O(n^3) on the padded square matrix.

/// Minimum-cost matching of `min(rows, cols)` pairs.
///
/// Rectangular inputs are padded to a square with a sentinel cost one above
/// the largest real cost; rows or columns matched to padding are left out of
/// the result. Returned pairs are `(row, col)` sorted by row.
pub fn linear_sum_assignment(costs: &[Vec<i64>]) -> Vec<(usize, usize)> {
    let rows = costs.len();
    let cols = costs.first().map_or(0, Vec::len);
    assert!(
        costs.iter().all(|r| r.len() == cols),
        "cost matrix must be rectangular"
    );
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    let n = rows.max(cols);
    let sentinel = costs.iter().flatten().copied().max().unwrap_or(0) as i128 + 1;
    let cost = |i: usize, j: usize| -> i128 {
        if i < rows && j < cols {
            costs[i][j] as i128
        } else {
            sentinel
        }
    };

    // 1-based arrays; p[j] is the row matched to column j, column 0 is the
    // virtual start of each augmenting path.
    let inf = i128::MAX / 4;
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut pairs: Vec<(usize, usize)> = (1..=n)
        .filter(|&j| p[j] != 0 && p[j] <= rows && j <= cols)
        .map(|j| (p[j] - 1, j - 1))
        .collect();
    pairs.sort_unstable();
    pairs
}
