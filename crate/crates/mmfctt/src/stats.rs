//! One-sided Wilcoxon rank-sum test on exact ranks.

use mmfctt_core::fairness::Rank;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

/// Largest combined sample size for which the exact null distribution is
/// enumerated.
pub const EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("both samples must be non-empty")]
pub struct EmptySample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WilcoxonResult {
    /// Sum of the midranks of the first sample.
    pub statistic: f64,
    pub p_value: f64,
    pub significant: bool,
    pub method: Method,
}

/// Tests whether `a` is stochastically smaller than `b`.
///
/// Exact when the combined size is at most [`EXACT_LIMIT`] and there are no
/// ties, otherwise the normal approximation with tie and continuity
/// corrections.
pub fn wilcoxon_one_sided(a: &[Rank], b: &[Rank], alpha: f64) -> Result<WilcoxonResult, EmptySample> {
    if a.is_empty() || b.is_empty() {
        return Err(EmptySample);
    }
    let (ranks, ties) = midranks(a, b);
    let statistic: f64 = ranks[..a.len()].iter().sum();
    let (p_value, method) = if a.len() + b.len() <= EXACT_LIMIT && ties.is_empty() {
        (exact_p(a.len(), b.len(), statistic.round() as usize), Method::Exact)
    } else {
        (normal_p(a.len(), b.len(), statistic, &ties), Method::Normal)
    };
    Ok(WilcoxonResult { statistic, p_value, significant: p_value < alpha, method })
}

// Midranks of the pooled sample (a first, then b) and the sizes of the tie
// groups larger than one.
fn midranks(a: &[Rank], b: &[Rank]) -> (Vec<f64>, Vec<usize>) {
    let pooled: Vec<&Rank> = a.iter().chain(b).collect();
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&x, &y| pooled[x].cmp(pooled[y]));
    let mut ranks = vec![0.0; pooled.len()];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && pooled[order[end]] == pooled[order[start]] {
            end += 1;
        }
        let mid = (start + end + 1) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = mid;
        }
        if end - start > 1 {
            ties.push(end - start);
        }
        start = end;
    }
    (ranks, ties)
}

/// P(W <= w) for the rank sum W of `m` values drawn without replacement from
/// 1..=m+n.
pub fn exact_p(m: usize, n: usize, w: usize) -> f64 {
    let total = m + n;
    let max_sum = total * (total + 1) / 2;
    // ways[k][s]: subsets of size k with sum s
    let mut ways = vec![vec![0f64; max_sum + 1]; m + 1];
    ways[0][0] = 1.0;
    for r in 1..=total {
        for k in (1..=m.min(r)).rev() {
            for s in (r..=max_sum).rev() {
                ways[k][s] += ways[k - 1][s - r];
            }
        }
    }
    let all: f64 = ways[m].iter().sum();
    ways[m][..=w.min(max_sum)].iter().sum::<f64>() / all
}

/// P(W <= statistic) under the normal approximation with continuity
/// correction. `ties` lists the sizes of the tie groups.
pub fn normal_p(m: usize, n: usize, statistic: f64, ties: &[usize]) -> f64 {
    let (m, n) = (m as f64, n as f64);
    let total = m + n;
    let mean = m * (total + 1.0) / 2.0;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (total * (total - 1.0));
    let var = m * n / 12.0 * (total + 1.0 - tie_term);
    if var <= 0.0 {
        // every value tied
        return 1.0;
    }
    let z = (statistic - mean + 0.5) / var.sqrt();
    Normal::standard().cdf(z)
}
