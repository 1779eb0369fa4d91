//! Minimum-cost perfect assignment (Hungarian method with potentials).

use std::ops::{Add, Sub};

use num_traits::Zero;

/// Solves the square assignment problem exactly. Returns, per row, its
/// assigned column, and the total cost. Panics on a non-square matrix.
pub fn min_cost_assignment<T>(cost: &[Vec<T>]) -> (Vec<usize>, T)
where
    T: Copy + Ord + Zero + Add<Output = T> + Sub<Output = T>,
{
    let n = cost.len();
    assert!(
        cost.iter().all(|row| row.len() == n),
        "assignment matrix must be square"
    );
    // 1-based arrays; column 0 is a virtual start column.
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<T>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta: Option<T> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if minv[j].is_none_or(|m| cur < m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                if delta.is_none_or(|d| minv[j].unwrap() < d) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] = u[owner[j]] + delta;
                    v[j] = v[j] - delta;
                } else if let Some(m) = minv[j] {
                    minv[j] = Some(m - delta);
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        if owner[j] > 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    let total = assignment
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (i, &j)| acc + cost[i][j]);
    (assignment, total)
}
