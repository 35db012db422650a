use std::cmp::Ordering;

use serde::Serialize;

use super::ranks::rank_row;
use super::special::normal_sf;
use crate::error::{Error, Result};

/// Largest effective sample size tested by exact enumeration.
pub const EXACT_LIMIT: usize = 20;

/// Below this many non-zero differences the test is not run (p = 1).
pub const MIN_EFFECTIVE: usize = 5;

/// Outcome of a paired two-sided Wilcoxon signed-rank test of `x` against
/// `y` (differences `x - y`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairwiseResult {
    /// `min(w_plus, w_minus)`.
    pub statistic: f64,
    pub w_plus: f64,
    pub w_minus: f64,
    pub p_two_sided: f64,
    /// Number of non-zero differences.
    pub n_effective: usize,
    /// The p-value comes from the exact null distribution.
    pub exact: bool,
    /// Too few non-zero differences; `p_two_sided` is 1 by convention.
    pub degenerate: bool,
}

impl PairwiseResult {
    /// `Less` when `x` tends to be smaller than `y`, `Greater` when larger.
    pub fn direction(&self) -> Ordering {
        self.w_plus.total_cmp(&self.w_minus)
    }

    /// `x` is significantly smaller than `y` at level `alpha`.
    pub fn x_smaller(&self, alpha: f64) -> bool {
        self.p_two_sided < alpha && self.direction() == Ordering::Less
    }

    /// `x` is significantly larger than `y` at level `alpha`.
    pub fn x_larger(&self, alpha: f64) -> bool {
        self.p_two_sided < alpha && self.direction() == Ordering::Greater
    }
}

pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64]) -> Result<PairwiseResult> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!("paired samples differ in length ({} vs {})", x.len(), y.len())));
    }
    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    if diffs.iter().any(|d| d.is_nan()) {
        return Err(Error::invalid("paired differences contain NaN"));
    }
    let nonzero: Vec<f64> = diffs.into_iter().filter(|&d| d != 0.0).collect();
    let n = nonzero.len();
    let abs: Vec<f64> = nonzero.iter().map(|d| d.abs()).collect();
    let ranks = rank_row(&abs)?;
    // average ranks are multiples of 1/2, so doubled ranks are integers
    let doubled: Vec<u64> = ranks.iter().map(|r| (2.0 * r).round() as u64).collect();
    let t_plus: u64 = nonzero.iter().zip(&doubled).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    let total: u64 = doubled.iter().sum();
    let w_plus = t_plus as f64 / 2.0;
    let w_minus = (total - t_plus) as f64 / 2.0;
    let mut result = PairwiseResult {
        statistic: w_plus.min(w_minus),
        w_plus,
        w_minus,
        p_two_sided: 1.0,
        n_effective: n,
        exact: false,
        degenerate: false,
    };
    if n < MIN_EFFECTIVE {
        result.degenerate = true;
        return Ok(result);
    }
    if n <= EXACT_LIMIT {
        result.exact = true;
        result.p_two_sided = exact_p(&doubled, t_plus);
    } else {
        result.p_two_sided = normal_p(&ranks, w_plus);
    }
    Ok(result)
}

/// Exact two-sided p-value: the null distribution of the doubled positive
/// rank sum is counted over all `2^n` sign assignments.
fn exact_p(doubled: &[u64], t_plus: u64) -> f64 {
    let total: u64 = doubled.iter().sum();
    let mut counts = vec![0u64; total as usize + 1];
    counts[0] = 1;
    let mut reach = 0usize;
    for &r in doubled {
        let r = r as usize;
        for s in (0..=reach).rev() {
            if counts[s] > 0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let t = t_plus as usize;
    let lower: u64 = counts[..=t].iter().sum();
    let upper: u64 = counts[t..].iter().sum();
    let patterns = (1u64 << doubled.len()) as f64;
    (2.0 * lower.min(upper) as f64 / patterns).min(1.0)
}

/// Normal approximation with tie and continuity corrections.
fn normal_p(ranks: &[f64], w_plus: f64) -> f64 {
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((w_plus - mean).abs() - 0.5).max(0.0) / var.sqrt();
    (2.0 * normal_sf(z)).min(1.0)
}
