use serde::Serialize;

use crate::error::{Error, Result};

/// Per-function ranks of `k` algorithms over `N` functions (rank 1 is the
/// smallest value; ties share the average rank).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankMatrix {
    /// `values[function][algorithm]`.
    pub values: Vec<Vec<f64>>,
    pub k: usize,
    pub n: usize,
}

impl RankMatrix {
    /// Builds a matrix from precomputed rank rows, checking the shape and
    /// the row-sum law `k (k + 1) / 2`.
    pub fn from_rows(values: Vec<Vec<f64>>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::invalid("rank matrix needs at least one row"));
        }
        let k = values[0].len();
        if k < 2 || values.iter().any(|r| r.len() != k) {
            return Err(Error::invalid("rank rows must all have the same length k >= 2"));
        }
        let expected = (k * (k + 1)) as f64 / 2.0;
        if let Some(i) = values.iter().position(|r| (r.iter().sum::<f64>() - expected).abs() > 1e-9) {
            return Err(Error::invalid(format!("rank row {i} does not sum to {expected}")));
        }
        Ok(RankMatrix { values, k, n })
    }

    pub fn sum_ranks(&self) -> Vec<f64> {
        (0..self.k).map(|j| self.values.iter().map(|r| r[j]).sum()).collect()
    }

    pub fn mean_ranks(&self) -> Vec<f64> {
        self.sum_ranks().into_iter().map(|s| s / self.n as f64).collect()
    }
}

/// Average ranks of one row (1-based, ascending, ties averaged).
pub fn rank_row(row: &[f64]) -> Result<Vec<f64>> {
    if row.iter().any(|v| v.is_nan()) {
        return Err(Error::invalid("cannot rank NaN"));
    }
    let mut idx: Vec<usize> = (0..row.len()).collect();
    idx.sort_by(|&a, &b| row[a].total_cmp(&row[b]));
    let mut ranks = vec![0.0; row.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && row[idx[end]] == row[idx[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &idx[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    Ok(ranks)
}

/// Ranks the algorithms on each function by their median values
/// (`medians[function][algorithm]`).
pub fn rank_algorithms(medians: &[Vec<f64>]) -> Result<RankMatrix> {
    if medians.is_empty() {
        return Err(Error::invalid("need at least one function"));
    }
    let k = medians[0].len();
    if k < 2 {
        return Err(Error::invalid("need at least two algorithms to rank"));
    }
    if medians.iter().any(|r| r.len() != k) {
        return Err(Error::invalid("all rows must have the same number of algorithms"));
    }
    let values = medians.iter().map(|r| rank_row(r)).collect::<Result<Vec<_>>>()?;
    Ok(RankMatrix { values, k, n: medians.len() })
}
