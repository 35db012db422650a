use serde::Serialize;

use crate::error::{Error, Result};

/// Mean, median and sample standard deviation of a vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Descriptive {
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (`n - 1` denominator; 0 for one sample).
    pub std: f64,
}

pub fn descriptive(samples: &[f64]) -> Result<Descriptive> {
    if samples.is_empty() {
        return Err(Error::invalid("descriptive statistics need at least one sample"));
    }
    if samples.iter().any(|v| v.is_nan()) {
        return Err(Error::invalid("samples contain NaN"));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let std = if samples.len() < 2 {
        0.0
    } else {
        (samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    Ok(Descriptive { mean, median: median(samples)?, std })
}

/// Median; the midpoint of the two central order statistics for even sizes.
pub fn median(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid("median of an empty sample"));
    }
    if samples.iter().any(|v| v.is_nan()) {
        return Err(Error::invalid("samples contain NaN"));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    Ok(if n % 2 == 1 { s[n / 2] } else { (s[n / 2 - 1] + s[n / 2]) / 2.0 })
}

/// Quantile of sorted data by linear interpolation between order
/// statistics at position `q (n - 1)`.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_cases() {
        let d = descriptive(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!((d.mean, d.median), (2.5, 2.5));
        // sqrt(5/3)
        assert!((d.std - 1.290_994_448_735_805_6).abs() < 1e-12);
        assert_eq!(descriptive(&[7.0]).unwrap(), Descriptive { mean: 7.0, median: 7.0, std: 0.0 });
        assert_eq!(descriptive(&[5.0; 3]).unwrap(), Descriptive { mean: 5.0, median: 5.0, std: 0.0 });
        assert!(descriptive(&[]).is_err());
        assert_eq!(median(&[3.0, 1.0, 2.0]).unwrap(), 2.0);
    }

    #[test]
    fn quantiles_interpolate() {
        let s: Vec<f64> = (1..=9).map(f64::from).collect();
        assert_eq!(quantile_sorted(&s, 0.25), 3.0);
        assert_eq!(quantile_sorted(&s, 0.5), 5.0);
        assert_eq!(quantile_sorted(&[1.0, 2.0], 0.5), 1.5);
    }
}
