//! Exact assignment solvers: the linear sum assignment problem (LSAP) and the
//! generalized lexicographic bottleneck problem on perfect matchings (GLBOP),
//! where every edge carries a multiset of penalties and a matching is judged
//! by the leximax order of the union of its edge multisets.
//!
//! GLBOP reduces to a sum assignment problem over multiplicity vectors: with
//! `t_1 > t_2 > ... > t_k` the distinct penalties of the instance, a multiset
//! is encoded as the vector of multiplicities of `t_1, ..., t_k`. Encoding is
//! additive over disjoint unions, and lexicographic order on the vectors
//! agrees with leximax order on the multisets.

pub mod hungarian;
mod oracle;

pub use hungarian::AssignmentCost;
pub use oracle::{brute_force_glbop, brute_force_lsap, ORACLE_LIMIT};

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::fairness::{Penalty, SortedAllocation, WeightMultiset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("cost {0} is too large")]
    CostTooLarge(u64),
    #[error("value {0} is not in the value list")]
    ValueNotListed(Penalty),
    #[error("forbidden edges leave no perfect matching")]
    NoPerfectMatching,
    #[error("brute force is limited to n <= {limit}, got {n}")]
    TooLarge { n: usize, limit: usize },
}

/// A perfect matching: `sigma[i]` is the column assigned to row `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    sigma: Vec<usize>,
}

impl Matching {
    pub fn new(sigma: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; sigma.len()];
        for &j in &sigma {
            if j >= sigma.len() || core::mem::replace(&mut seen[j], true) {
                return None;
            }
        }
        Some(Self { sigma })
    }

    pub fn identity(n: usize) -> Self {
        Self { sigma: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn column_of(&self, row: usize) -> usize {
        self.sigma[row]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.sigma
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sigma.iter().copied().enumerate()
    }
}

// Keeps potentials and partial sums well inside i64.
const MAX_SCALAR_COST: u64 = 1 << 52;

/// Square matrix of scalar costs.
///
/// Rectangular input is padded with zero-cost dummy rows or columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostMatrix {
    n: usize,
    rows: usize,
    cols: usize,
    cost: Vec<u64>,
}

impl CostMatrix {
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self, AssignmentError> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len().max(cols);
        let mut cost = vec![0u64; n * n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(AssignmentError::RaggedRows { row: i, expected: cols, found: row.len() });
            }
            for (j, &c) in row.iter().enumerate() {
                if c > MAX_SCALAR_COST {
                    return Err(AssignmentError::CostTooLarge(c));
                }
                cost[i * n + j] = c;
            }
        }
        Ok(Self { n, rows: rows.len(), cols, cost })
    }

    /// Side length after padding.
    pub fn size(&self) -> usize {
        self.n
    }

    /// Shape before padding, `(rows, cols)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.cost[i * self.n + j]
    }

    pub fn total(&self, m: &Matching) -> u64 {
        m.pairs().map(|(i, j)| self.get(i, j)).sum()
    }
}

/// Solves the linear sum assignment problem.
pub fn solve_lsap(c: &CostMatrix) -> (Matching, u64) {
    let sigma = hungarian::solve(c.n, 0i64, |i, j| Some(c.get(i, j) as i64))
        .expect("complete bipartite graph has a perfect matching");
    let m = Matching { sigma };
    let total = c.total(&m);
    (m, total)
}

/// Square GLBOP instance with a penalty multiset on every edge.
///
/// An edge may be forbidden, in which case no matching may use it. Dummy
/// rows and columns added by padding carry empty multisets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlbopInstance {
    n: usize,
    rows: usize,
    cols: usize,
    weights: Vec<Option<WeightMultiset>>,
}

impl GlbopInstance {
    pub fn from_rows(rows: Vec<Vec<WeightMultiset>>) -> Result<Self, AssignmentError> {
        Self::from_edges(rows.into_iter().map(|r| r.into_iter().map(Some).collect()).collect())
    }

    /// Like [`GlbopInstance::from_rows`]; `None` marks a forbidden edge.
    pub fn from_edges(rows: Vec<Vec<Option<WeightMultiset>>>) -> Result<Self, AssignmentError> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len().max(cols);
        let mut weights = vec![Some(WeightMultiset::new()); n * n];
        let real_rows = rows.len();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(AssignmentError::RaggedRows { row: i, expected: cols, found: row.len() });
            }
            for (j, w) in row.into_iter().enumerate() {
                weights[i * n + j] = w;
            }
        }
        Ok(Self { n, rows: real_rows, cols, weights })
    }

    /// Instance with singleton weights `{c[i][j]}`.
    pub fn from_cost_matrix(c: &CostMatrix) -> Self {
        let n = c.size();
        let weights = (0..n * n).map(|k| Some(WeightMultiset::singleton(c.get(k / n, k % n) as Penalty))).collect();
        let (rows, cols) = c.shape();
        Self { n, rows, cols, weights }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Edge weight, `None` if the edge is forbidden.
    pub fn weight(&self, i: usize, j: usize) -> Option<&WeightMultiset> {
        self.weights[i * self.n + j].as_ref()
    }

    /// Union of the weights of the matched edges.
    pub fn matching_weight(&self, m: &Matching) -> Option<WeightMultiset> {
        let mut acc = WeightMultiset::new();
        for (i, j) in m.pairs() {
            acc.extend_from(self.weight(i, j)?);
        }
        Some(acc)
    }
}

/// All penalties occurring on any allowed edge, in decreasing order.
pub fn distinct_values(g: &GlbopInstance) -> Vec<Penalty> {
    let mut values: Vec<Penalty> = g.weights.iter().flatten().flat_map(|w| w.items().iter().copied()).collect();
    values.sort_unstable_by(|a, b| b.cmp(a));
    values.dedup();
    values
}

/// Multiplicity vector of a multiset relative to a decreasing value list.
///
/// Components are signed so that the same type can carry dual potentials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VectorCost(Vec<i64>);

impl VectorCost {
    pub fn zero(len: usize) -> Self {
        VectorCost(vec![0; len])
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }
}

impl AssignmentCost for VectorCost {
    fn add(&self, other: &Self) -> Self {
        VectorCost(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, other: &Self) -> Self {
        VectorCost(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

/// Encodes `w` as multiplicities of `values` (which must be decreasing).
pub fn encode_vector(w: &WeightMultiset, values: &[Penalty]) -> Result<VectorCost, AssignmentError> {
    let mut counts = vec![0i64; values.len()];
    for &x in w.items() {
        let pos = values.binary_search_by(|v| x.cmp(v)).map_err(|_| AssignmentError::ValueNotListed(x))?;
        counts[pos] += 1;
    }
    Ok(VectorCost(counts))
}

/// Optimal GLBOP solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlbopSolution {
    pub matching: Matching,
    pub weight: WeightMultiset,
}

/// Solves the GLBOP exactly.
///
/// When the multiplicity vectors fit positionally into an `i128` (radix one
/// more than the largest possible multiplicity in a matching) the sum problem
/// is solved on those integers; otherwise on [`VectorCost`] directly. Both
/// give the same optimum.
pub fn solve_glbop(g: &GlbopInstance) -> Result<GlbopSolution, AssignmentError> {
    let values = distinct_values(g);
    let sigma = match positional_radix(g, values.len()) {
        Some(radix) => solve_positional(g, &values, radix),
        None => solve_vectorial(g, &values),
    }
    .ok_or(AssignmentError::NoPerfectMatching)?;
    let matching = Matching { sigma };
    let weight = g.matching_weight(&matching).expect("solver only uses allowed edges");
    Ok(GlbopSolution { matching, weight })
}

// Radix such that no component of a matching sum can carry, if it fits.
fn positional_radix(g: &GlbopInstance, len: usize) -> Option<i128> {
    let max_items: u64 =
        (0..g.n).map(|i| (0..g.n).filter_map(|j| g.weight(i, j).map(|w| w.len() as u64)).max().unwrap_or(0)).sum();
    let radix = i128::from(max_items + 1);
    // Dual potentials stay within a few multiples of the largest matching sum.
    let limit = i128::MAX >> 8;
    let mut scale: i128 = 1;
    for _ in 0..len {
        scale = scale.checked_mul(radix).filter(|&s| s <= limit)?;
    }
    Some(radix)
}

fn solve_positional(g: &GlbopInstance, values: &[Penalty], radix: i128) -> Option<Vec<usize>> {
    let encoded: Vec<Option<i128>> = g
        .weights
        .iter()
        .map(|w| {
            w.as_ref().map(|w| {
                encode_vector(w, values)
                    .expect("values are collected from the instance")
                    .0
                    .iter()
                    .fold(0i128, |acc, &c| acc * radix + i128::from(c))
            })
        })
        .collect();
    hungarian::solve(g.n, 0i128, |i, j| encoded[i * g.n + j])
}

fn solve_vectorial(g: &GlbopInstance, values: &[Penalty]) -> Option<Vec<usize>> {
    let encoded: Vec<Option<VectorCost>> = g
        .weights
        .iter()
        .map(|w| w.as_ref().map(|w| encode_vector(w, values).expect("values are collected from the instance")))
        .collect();
    hungarian::solve(g.n, VectorCost::zero(values.len()), |i, j| encoded[i * g.n + j].clone())
}

#[doc(hidden)]
pub fn solve_glbop_vectorial(g: &GlbopInstance) -> Result<GlbopSolution, AssignmentError> {
    let values = distinct_values(g);
    let sigma = solve_vectorial(g, &values).ok_or(AssignmentError::NoPerfectMatching)?;
    let matching = Matching { sigma };
    let weight = g.matching_weight(&matching).expect("solver only uses allowed edges");
    Ok(GlbopSolution { matching, weight })
}

/// Lexicographic bottleneck assignment on a scalar matrix.
pub fn solve_lbap(c: &CostMatrix) -> (Matching, SortedAllocation) {
    let g = GlbopInstance::from_cost_matrix(c);
    let sol = solve_glbop(&g).expect("no forbidden edges");
    (sol.matching, sol.weight.to_sorted())
}
