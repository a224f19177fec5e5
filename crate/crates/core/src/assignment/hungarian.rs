//! Shortest augmenting path assignment with dual potentials, generic over
//! the cost type.
//!
//! Only addition, subtraction and a total order are used, so any totally
//! ordered abelian group works: plain integers for the sum objective,
//! lexicographically ordered integer vectors for the bottleneck objectives.

use alloc::vec;
use alloc::vec::Vec;

/// Cost type usable by [`solve`].
pub trait AssignmentCost: Clone + Ord {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
}

impl AssignmentCost for i64 {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

impl AssignmentCost for i128 {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

/// Minimum-cost perfect matching on an `n x n` bipartite graph.
///
/// `cost(i, j)` returns `None` for a forbidden edge. Returns `sigma` with
/// `sigma[row] = column`, or `None` if forbidden edges leave no perfect
/// matching. Scans columns in increasing order and only replaces a candidate
/// on strict improvement, so the result is deterministic.
pub fn solve<C, F>(n: usize, zero: C, mut cost: F) -> Option<Vec<usize>>
where
    C: AssignmentCost,
    F: FnMut(usize, usize) -> Option<C>,
{
    // 1-based with column 0 as the virtual root of each search tree.
    let mut u = vec![zero.clone(); n + 1];
    let mut v = vec![zero.clone(); n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv: Vec<Option<C>> = vec![None; n + 1];
    let mut used = vec![false; n + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|m| *m = None);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta: Option<C> = None;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                if let Some(c) = cost(i0 - 1, j - 1) {
                    let reduced = c.sub(&u[i0]).sub(&v[j]);
                    if minv[j].as_ref().is_none_or(|m| reduced < *m) {
                        minv[j] = Some(reduced);
                        way[j] = j0;
                    }
                }
                if let Some(m) = &minv[j] {
                    if delta.as_ref().is_none_or(|d| m < d) {
                        delta = Some(m.clone());
                        j1 = j;
                    }
                }
            }
            let delta = delta?;
            for j in 0..=n {
                if used[j] {
                    let i = owner[j];
                    u[i] = u[i].add(&delta);
                    v[j] = v[j].sub(&delta);
                } else if let Some(m) = minv[j].as_mut() {
                    *m = m.sub(&delta);
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

    let mut sigma = vec![0usize; n];
    for j in 1..=n {
        sigma[owner[j] - 1] = j - 1;
    }
    Some(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_three_by_three() {
        let c = [[4i64, 1, 3], [2, 0, 5], [3, 2, 2]];
        let sigma = solve(3, 0i64, |i, j| Some(c[i][j])).unwrap();
        let total: i64 = sigma.iter().enumerate().map(|(i, &j)| c[i][j]).sum();
        assert_eq!(total, 5);
    }

    #[test]
    fn forbidden_edges_are_avoided() {
        // the cheap diagonal is forbidden except on row 2
        let c = [[None, Some(9i64), Some(9)], [Some(9), None, Some(9)], [Some(1), Some(1), Some(0)]];
        let sigma = solve(3, 0i64, |i, j| c[i][j]).unwrap();
        assert!(sigma.iter().enumerate().all(|(i, &j)| c[i][j].is_some()));
    }

    #[test]
    fn infeasible_when_a_row_is_fully_forbidden() {
        assert!(solve(2, 0i64, |i, _| if i == 0 { None } else { Some(1) }).is_none());
    }

    #[test]
    fn empty_problem() {
        assert_eq!(solve(0, 0i64, |_, _| Some(0)), Some(vec![]));
    }
}
