use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{FairnessError, Penalty, SortedAllocation, WeightMultiset};

/// Position of a sorted sequence among all sorted sequences of its length.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rank(BigUint);

impl Rank {
    pub fn zero() -> Self {
        Rank(BigUint::zero())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// Lossy conversion, for reporting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl From<BigUint> for Rank {
    fn from(v: BigUint) -> Self {
        Rank(v)
    }
}

impl From<u64> for Rank {
    fn from(v: u64) -> Self {
        Rank(BigUint::from(v))
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Rank {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigUint::from_str(s).map(Rank)
    }
}

/// Exact binomial coefficient, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

// C(n + x - i, x - 1) for the 1-based position i, with C(m, -1) = 0.
fn position_term(n: usize, i: usize, x: Penalty) -> BigUint {
    if x == 0 {
        return BigUint::zero();
    }
    let x = u64::from(x);
    let (n, i) = (n as u64, i as u64);
    binomial(n + x - i, x - 1)
}

/// Closed-form rank of a non-increasing sequence among all non-increasing
/// sequences of the same length, ordered lexicographically.
pub fn rank(s: &SortedAllocation) -> Rank {
    let n = s.len();
    let mut acc = BigUint::zero();
    for (idx, &x) in s.values().iter().enumerate() {
        if x == 0 {
            break;
        }
        acc += position_term(n, idx + 1, x);
    }
    Rank(acc)
}

/// Rank computed by peeling off the head: the sequences below `(x1, 0, ..., 0)`
/// are counted as multisets of size `n` over `x1` symbols, and the rest by
/// ranking the tail at length `n - 1`.
///
/// Kept as an independent check of [`rank`]; it builds a counting table and is
/// only suitable for small inputs.
pub fn rank_recursive(s: &SortedAllocation) -> Rank {
    fn go(values: &[Penalty]) -> BigUint {
        match values.split_first() {
            None => BigUint::zero(),
            Some((&head, tail)) => go(tail) + multisets(head as usize, values.len()),
        }
    }
    Rank(go(s.values()))
}

// Number of multisets of size `size` drawn from `symbols` symbols.
fn multisets(symbols: usize, size: usize) -> BigUint {
    if size == 0 {
        return BigUint::one();
    }
    if symbols == 0 {
        return BigUint::zero();
    }
    // table[k] holds the count for k symbols at the current size.
    let mut table = vec![BigUint::one(); symbols + 1];
    table[0] = BigUint::zero();
    for _ in 1..=size {
        for k in 1..=symbols {
            let prev = table[k - 1].clone();
            table[k] += prev;
        }
    }
    // After `size` rounds starting from all-ones (size 0), table[k] is M(k, size).
    table[symbols].clone()
}

/// Inverse of [`rank`] for sequences of length `n`.
pub fn unrank(r: &Rank, n: usize) -> SortedAllocation {
    let mut remaining = r.0.clone();
    let mut values = Vec::with_capacity(n);
    let mut bound: Option<Penalty> = None;
    for i in 1..=n {
        let x = largest_fitting(n, i, &remaining, bound);
        remaining -= position_term(n, i, x);
        values.push(x);
        bound = Some(x);
    }
    debug_assert!(remaining.is_zero() || n == 0);
    SortedAllocation::new(values).expect("greedy choice is non-increasing")
}

// Largest x <= bound whose position term does not exceed `remaining`.
fn largest_fitting(n: usize, i: usize, remaining: &BigUint, bound: Option<Penalty>) -> Penalty {
    let fits = |x: Penalty| position_term(n, i, x) <= *remaining;
    let hi = match bound {
        Some(b) => {
            if fits(b) {
                return b;
            }
            b
        }
        None => {
            let mut hi: Penalty = 1;
            while fits(hi) {
                hi = hi.checked_mul(2).expect("rank too large for penalty range");
            }
            hi
        }
    };
    // fits(lo) holds, fits(hi) does not.
    let mut lo: Penalty = 0;
    let mut hi = hi;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Order isomorphism for minimization: sort non-increasingly, then rank.
pub fn rho_min(x: &WeightMultiset) -> Rank {
    rank(&x.to_sorted())
}

/// Order isomorphism for maximization, where larger items are better.
///
/// Ranks `m - asc(x)` with `m` the constant sequence of `value_cap`.
pub fn rho_max(x: &WeightMultiset, value_cap: Penalty) -> Result<Rank, FairnessError> {
    if let Some(value) = x.max().filter(|&v| v > value_cap) {
        return Err(FairnessError::ExceedsCap { value, cap: value_cap });
    }
    let complement: Vec<Penalty> = x.items().iter().rev().map(|&v| value_cap - v).collect();
    let seq = SortedAllocation::new(complement).expect("complement of ascending is descending");
    Ok(rank(&seq))
}

/// Representative of the mean rank of `xs`, rounded to the nearest integer
/// with ties going up.
pub fn average_allocation(xs: &[SortedAllocation], n: usize) -> Result<SortedAllocation, FairnessError> {
    if xs.is_empty() {
        return Err(FairnessError::EmptyInput);
    }
    if let Some(bad) = xs.iter().find(|x| x.len() != n) {
        return Err(FairnessError::LengthMismatch { expected: n, found: bad.len() });
    }
    let total: BigUint = xs.iter().map(|x| rank(x).0).sum();
    let count = BigUint::from(xs.len());
    let (quotient, remainder) = total.div_rem(&count);
    let mean = if remainder * 2u32 >= count { quotient + 1u32 } else { quotient };
    Ok(unrank(&Rank(mean), n))
}
