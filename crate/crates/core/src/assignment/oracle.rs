//! Exhaustive reference solvers for small instances.

use alloc::vec::Vec;

use super::{AssignmentError, CostMatrix, GlbopInstance, Matching};
use crate::fairness::WeightMultiset;

/// Largest size accepted by the brute-force solvers.
pub const ORACLE_LIMIT: usize = 8;

// Steps to the next permutation in lexicographic order.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("p[i + 1] > p[i]");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn check_size(n: usize) -> Result<(), AssignmentError> {
    if n > ORACLE_LIMIT {
        return Err(AssignmentError::TooLarge { n, limit: ORACLE_LIMIT });
    }
    Ok(())
}

/// Enumerates all matchings and keeps the first leximax-minimal one, which is
/// the lexicographically smallest optimal permutation.
pub fn brute_force_glbop(g: &GlbopInstance) -> Result<(Matching, WeightMultiset), AssignmentError> {
    check_size(g.size())?;
    let mut perm: Vec<usize> = (0..g.size()).collect();
    let mut best: Option<(Matching, WeightMultiset)> = None;
    loop {
        let m = Matching { sigma: perm.clone() };
        if let Some(w) = g.matching_weight(&m) {
            if best.as_ref().is_none_or(|(_, b)| w < *b) {
                best = Some((m, w));
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.ok_or(AssignmentError::NoPerfectMatching)
}

/// Minimum total over all permutations.
pub fn brute_force_lsap(c: &CostMatrix) -> Result<(Matching, u64), AssignmentError> {
    check_size(c.size())?;
    let mut perm: Vec<usize> = (0..c.size()).collect();
    let mut best: Option<(Matching, u64)> = None;
    loop {
        let m = Matching { sigma: perm.clone() };
        let total = c.total(&m);
        if best.as_ref().is_none_or(|(_, b)| total < *b) {
            best = Some((m, total));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best.expect("at least one permutation"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn permutations_are_enumerated_in_order() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn two_by_two() {
        let ms = |v: &[u32]| v.iter().copied().collect::<WeightMultiset>();
        let g = GlbopInstance::from_rows(vec![vec![ms(&[5]), ms(&[7])], vec![ms(&[5, 4]), ms(&[7, 6])]]).unwrap();
        let (m, w) = brute_force_glbop(&g).unwrap();
        assert_eq!(m.as_slice(), &[1, 0]);
        assert_eq!(w, ms(&[7, 5, 4]));
    }

    #[test]
    fn single_edge() {
        let g = GlbopInstance::from_rows(vec![vec![WeightMultiset::singleton(3)]]).unwrap();
        assert_eq!(brute_force_glbop(&g).unwrap().1, WeightMultiset::singleton(3));
    }

    #[test]
    fn size_limit() {
        let g = GlbopInstance::from_rows(vec![vec![WeightMultiset::new(); 9]; 9]).unwrap();
        assert_eq!(brute_force_glbop(&g), Err(AssignmentError::TooLarge { n: 9, limit: 8 }));
    }
}
