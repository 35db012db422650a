use std::ops::RangeInclusive;

use crate::error::{Error, Result};

/// Numbers of algorithms covered by the critical-value table.
pub const NEMENYI_K_RANGE: RangeInclusive<usize> = 2..=20;

/// `q_0.05` for `k = 2..=20`: studentized range quantile at infinite
/// degrees of freedom divided by `sqrt(2)`.
const Q_005: [f64; 19] = [
    1.959_964, 2.343_701, 2.569_032, 2.727_774, 2.849_705, 2.948_320, 3.030_878, 3.101_730, 3.163_684, 3.218_654, 3.268_004,
    3.312_739, 3.353_618, 3.391_230, 3.426_041, 3.458_425, 3.488_685, 3.517_073, 3.543_799,
];

/// Tabulated critical value `q_alpha` for `k` algorithms.
pub fn nemenyi_q(k: usize, alpha: f64) -> Result<f64> {
    if alpha != 0.05 {
        return Err(Error::invalid(format!("only alpha = 0.05 is tabulated, got {alpha}")));
    }
    if !NEMENYI_K_RANGE.contains(&k) {
        return Err(Error::UnsupportedK(k));
    }
    Ok(Q_005[k - 2])
}

/// Nemenyi critical difference `q_alpha sqrt(k (k + 1) / (6 N))` in mean
/// ranks.
pub fn nemenyi_cd(k: usize, n: usize, alpha: f64) -> Result<f64> {
    let q = nemenyi_q(k, alpha)?;
    if n == 0 {
        return Err(Error::invalid("Nemenyi CD needs N >= 1"));
    }
    Ok(q * ((k * (k + 1)) as f64 / (6.0 * n as f64)).sqrt())
}
