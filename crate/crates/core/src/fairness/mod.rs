//! Leximax comparison of penalty multisets and the order isomorphism onto the
//! naturals.
//!
//! A penalty multiset is compared by sorting it non-increasingly and comparing
//! the resulting sequences lexicographically, where a proper prefix precedes
//! its extensions. Smaller means fairer for minimization problems.
//!
//! For a fixed length `n`, [`rank`] maps the sorted sequences bijectively and
//! order-preservingly onto `0, 1, 2, ...`. This turns allocation vectors into
//! plain integers that can be averaged ([`average_allocation`]) or fed to
//! rank-based statistics, and [`unrank`] maps integers back.

mod notation;
mod rank;

pub use notation::NotationError;
pub use rank::{average_allocation, binomial, rank, rank_recursive, rho_max, rho_min, unrank, Rank};

use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

/// A single penalty value (cost units).
pub type Penalty = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FairnessError {
    #[error("no allocations to aggregate")]
    EmptyInput,
    #[error("allocation has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("sequence increases at position {index}")]
    NotSorted { index: usize },
    #[error("value {value} exceeds the cap {cap}")]
    ExceedsCap { value: Penalty, cap: Penalty },
}

/// A finite multiset of penalties.
///
/// Items are kept sorted non-increasingly, so insertion order is unobservable
/// and the derived equality is multiset equality. The derived ordering is the
/// leximax order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightMultiset {
    items: Vec<Penalty>,
}

impl WeightMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(value: Penalty) -> Self {
        Self { items: alloc::vec![value] }
    }

    pub fn insert(&mut self, value: Penalty) {
        let at = self.items.partition_point(|&x| x >= value);
        self.items.insert(at, value);
    }

    /// Disjoint union: multiplicities add up.
    pub fn union(&self, other: &WeightMultiset) -> WeightMultiset {
        let mut items = Vec::with_capacity(self.items.len() + other.items.len());
        let (mut a, mut b) = (self.items.iter().peekable(), other.items.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) => {
                    if x >= y {
                        items.push(x);
                        a.next();
                    } else {
                        items.push(y);
                        b.next();
                    }
                }
                (Some(_), None) => {
                    items.extend(a);
                    break;
                }
                (None, _) => {
                    items.extend(b);
                    break;
                }
            }
        }
        WeightMultiset { items }
    }

    pub fn extend_from(&mut self, other: &WeightMultiset) {
        *self = self.union(other);
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Items in non-increasing order.
    pub fn items(&self) -> &[Penalty] {
        &self.items
    }

    pub fn multiplicity(&self, value: Penalty) -> usize {
        self.items.iter().filter(|&&x| x == value).count()
    }

    pub fn sum(&self) -> u64 {
        self.items.iter().map(|&x| u64::from(x)).sum()
    }

    pub fn max(&self) -> Option<Penalty> {
        self.items.first().copied()
    }

    pub fn to_sorted(&self) -> SortedAllocation {
        SortedAllocation { values: self.items.clone() }
    }
}

impl FromIterator<Penalty> for WeightMultiset {
    fn from_iter<I: IntoIterator<Item = Penalty>>(iter: I) -> Self {
        let mut items: Vec<Penalty> = iter.into_iter().collect();
        items.sort_unstable_by(|a, b| b.cmp(a));
        Self { items }
    }
}

impl From<SortedAllocation> for WeightMultiset {
    fn from(s: SortedAllocation) -> Self {
        Self { items: s.values }
    }
}

/// A penalty sequence in non-increasing order.
///
/// `Ord` is the leximax order: the first differing position decides, and a
/// proper prefix is smaller than any of its extensions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SortedAllocation {
    values: Vec<Penalty>,
}

impl SortedAllocation {
    /// Wraps an already sorted sequence, rejecting any increase.
    pub fn new(values: Vec<Penalty>) -> Result<Self, FairnessError> {
        if let Some(index) = values.windows(2).position(|w| w[0] < w[1]) {
            return Err(FairnessError::NotSorted { index: index + 1 });
        }
        Ok(Self { values })
    }

    pub fn from_unsorted(mut values: Vec<Penalty>) -> Self {
        values.sort_unstable_by(|a, b| b.cmp(a));
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self { values: alloc::vec![0; n] }
    }

    pub fn values(&self) -> &[Penalty] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Penalty> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.values.iter().map(|&x| u64::from(x)).sum()
    }

    /// The non-decreasing form of the same items.
    pub fn ascending(&self) -> Vec<Penalty> {
        self.values.iter().rev().copied().collect()
    }
}

/// Leximax comparison of two sorted sequences, possibly of different length.
///
/// `Less` means `a` is strictly fairer than `b`.
pub fn leximax_compare(a: &SortedAllocation, b: &SortedAllocation) -> Ordering {
    a.values.as_slice().cmp(b.values.as_slice())
}
