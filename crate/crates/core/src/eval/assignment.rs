//! Maximum-weight one-to-one assignment on small dense matrices.

/// Shortest-augmenting-path Hungarian algorithm minimizing `cost` over
/// assignments of every row to a distinct column. Requires `rows <= cols`.
///
/// Returns the column of each row.
fn min_cost_rows(cost: &[Vec<f64>], cols: usize) -> Vec<usize> {
    let rows = cost.len();
    debug_assert!(rows <= cols);
    const NONE: usize = usize::MAX;
    // 1-based potentials; column 0 is the virtual source
    let mut u = vec![0.0; rows + 1];
    let mut v = vec![0.0; cols + 1];
    let mut row_of = vec![NONE; cols + 1];
    let mut way = vec![0usize; cols + 1];
    for r in 1..=rows {
        row_of[0] = r;
        let mut j0 = 0usize;
        let mut min_to = vec![f64::INFINITY; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if reduced < min_to[j] {
                    min_to[j] = reduced;
                    way[j] = j0;
                }
                if min_to[j] < delta {
                    delta = min_to[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_to[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == NONE {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of_row = vec![0usize; rows];
    for j in 1..=cols {
        if row_of[j] != NONE {
            col_of_row[row_of[j] - 1] = j - 1;
        }
    }
    col_of_row
}

/// Maximum total weight over partial one-to-one matchings of rows to columns.
///
/// Weights must be non-negative, so padding to a square with zeros changes
/// nothing. The total is summed in ascending order of the matched weights,
/// which makes it independent of row and column order.
pub fn max_weight_matching(weights: &[Vec<f64>], cols: usize) -> (f64, Vec<Option<usize>>) {
    let rows = weights.len();
    if rows == 0 || cols == 0 {
        return (0.0, vec![None; rows]);
    }
    let n = rows.max(cols);
    let cost: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i < rows && j < cols {
                        -weights[i][j]
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let cols_of = min_cost_rows(&cost, n);
    let assignment: Vec<Option<usize>> = (0..rows)
        .map(|i| {
            let j = cols_of[i];
            (j < cols && weights[i][j] > 0.0).then_some(j)
        })
        .collect();
    let total = matched_total(weights, &assignment);
    (total, assignment)
}

/// Order-independent sum of the matched weights.
pub fn matched_total(weights: &[Vec<f64>], assignment: &[Option<usize>]) -> f64 {
    let mut vals: Vec<f64> = assignment
        .iter()
        .enumerate()
        .filter_map(|(i, j)| j.map(|j| weights[i][j]))
        .collect();
    vals.sort_by(f64::total_cmp);
    vals.into_iter().sum()
}

/// Tolerance for treating two assignment totals as equal.
pub const TIE_EPS: f64 = 1e-9;

/// Optimal matching with a deterministic tie-break: among optimal matchings,
/// the lexicographically smallest row-to-column map, where "unmatched" sorts
/// after every column.
pub fn lexicographic_max_matching(weights: &[Vec<f64>], cols: usize) -> (f64, Vec<Option<usize>>) {
    let rows = weights.len();
    let (best, _) = max_weight_matching(weights, cols);
    let mut fixed: Vec<Option<usize>> = Vec::with_capacity(rows);
    let mut used = vec![false; cols];
    let mut fixed_sum = 0.0;
    for i in 0..rows {
        let free_cols: Vec<usize> = (0..cols).filter(|&j| !used[j]).collect();
        let rest = |exclude: Option<usize>| -> f64 {
            let sub_cols: Vec<usize> = free_cols.iter().copied().filter(|&j| Some(j) != exclude).collect();
            let sub: Vec<Vec<f64>> = weights[i + 1..]
                .iter()
                .map(|row| sub_cols.iter().map(|&j| row[j]).collect())
                .collect();
            max_weight_matching(&sub, sub_cols.len()).0
        };
        let mut choice = None;
        let mut best_candidate = (f64::NEG_INFINITY, None);
        for &j in &free_cols {
            if weights[i][j] <= 0.0 {
                continue;
            }
            let total = fixed_sum + weights[i][j] + rest(Some(j));
            if total >= best - TIE_EPS {
                choice = Some(Some(j));
                break;
            }
            if total > best_candidate.0 {
                best_candidate = (total, Some(j));
            }
        }
        let choice = choice.unwrap_or_else(|| {
            let unmatched = fixed_sum + rest(None);
            if unmatched >= best - TIE_EPS || unmatched >= best_candidate.0 {
                None
            } else {
                best_candidate.1
            }
        });
        if let Some(j) = choice {
            used[j] = true;
            fixed_sum += weights[i][j];
        }
        fixed.push(choice);
    }
    (matched_total(weights, &fixed), fixed)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Best total over all injections rows -> columns ∪ {unmatched}.
    pub(crate) fn brute_force(weights: &[Vec<f64>], cols: usize) -> f64 {
        fn rec(w: &[Vec<f64>], i: usize, used: &mut Vec<bool>, acc: f64) -> f64 {
            if i == w.len() {
                return acc;
            }
            let mut best = rec(w, i + 1, used, acc);
            for j in 0..used.len() {
                if !used[j] {
                    used[j] = true;
                    best = best.max(rec(w, i + 1, used, acc + w[i][j]));
                    used[j] = false;
                }
            }
            best
        }
        rec(weights, 0, &mut vec![false; cols], 0.0)
    }

    #[test]
    fn two_by_two() {
        let w = vec![vec![0.9, 0.1], vec![0.2, 0.8]];
        let (total, a) = lexicographic_max_matching(&w, 2);
        assert!((total - 1.7).abs() < 1e-15);
        assert_eq!(a, vec![Some(0), Some(1)]);
    }

    #[test]
    fn rectangular_both_ways() {
        let tall = vec![vec![0.3], vec![0.9], vec![0.5]];
        assert_eq!(lexicographic_max_matching(&tall, 1), (0.9, vec![None, Some(0), None]));
        let wide = vec![vec![0.3, 0.9, 0.5]];
        assert_eq!(lexicographic_max_matching(&wide, 3), (0.9, vec![Some(1)]));
    }

    #[test]
    fn ties_pick_lexicographically_smallest() {
        let w = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert_eq!(lexicographic_max_matching(&w, 2).1, vec![Some(0), Some(1)]);
        let zeros = vec![vec![0.0, 0.0]];
        assert_eq!(lexicographic_max_matching(&zeros, 2).1, vec![None]);
        // row 0 could take column 0 or 1 at equal total
        let w = vec![vec![0.5, 0.5], vec![0.0, 0.5]];
        let (total, a) = lexicographic_max_matching(&w, 2);
        assert_eq!(total, 1.0);
        assert_eq!(a, vec![Some(0), Some(1)]);
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(max_weight_matching(&[], 3), (0.0, vec![]));
        assert_eq!(max_weight_matching(&[vec![]], 0), (0.0, vec![None]));
    }

    proptest::proptest! {
        #[test]
        fn matches_brute_force(n_rows in 0usize..6, n_cols in 0usize..6, seed in proptest::collection::vec(0.0f64..1.0, 36)) {
            let w: Vec<Vec<f64>> = (0..n_rows).map(|i| (0..n_cols).map(|j| seed[i * 6 + j]).collect()).collect();
            let expected = brute_force(&w, n_cols);
            let (hung, _) = max_weight_matching(&w, n_cols);
            let (lex, a) = lexicographic_max_matching(&w, n_cols);
            proptest::prop_assert!((hung - expected).abs() <= 1e-12);
            proptest::prop_assert!((lex - expected).abs() <= 1e-12);
            let mut seen = std::collections::HashSet::new();
            proptest::prop_assert!(a.iter().flatten().all(|j| seen.insert(*j)));
        }
    }
}
