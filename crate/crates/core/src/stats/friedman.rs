use serde::Serialize;

use super::ranks::RankMatrix;
use super::special::chi2_sf;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FriedmanResult {
    pub chi2: f64,
    pub p: f64,
    pub df: usize,
}

/// Friedman test over a rank matrix:
/// `chi2 = 12 N / (k (k + 1)) * sum_j (mean_rank_j - (k + 1) / 2)^2`, with
/// the p-value from the chi-square tail on `k - 1` degrees of freedom.
pub fn friedman(ranks: &RankMatrix) -> Result<FriedmanResult> {
    let (k, n) = (ranks.k, ranks.n);
    if k < 2 || n < 2 {
        return Err(Error::invalid(format!("Friedman test needs k >= 2 and N >= 2 (got k={k}, N={n})")));
    }
    let (kf, nf) = (k as f64, n as f64);
    let centre = (kf + 1.0) / 2.0;
    let spread: f64 = ranks.mean_ranks().iter().map(|r| (r - centre).powi(2)).sum();
    let chi2 = 12.0 * nf / (kf * (kf + 1.0)) * spread;
    let chi2 = if chi2 < 1e-12 { 0.0 } else { chi2 };
    Ok(FriedmanResult { chi2, p: chi2_sf(chi2, (k - 1) as f64), df: k - 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::rank_algorithms;
    use proptest::prelude::*;

    #[test]
    fn consistent_order_k3_n10() {
        let m = RankMatrix::from_rows(vec![vec![1.0, 2.0, 3.0]; 10]).unwrap();
        let r = friedman(&m).unwrap();
        assert!((r.chi2 - 20.0).abs() < 1e-9);
        assert!((r.p - 4.539_992_976_248_485e-5).abs() < 1e-12);
    }

    #[test]
    fn all_tied_gives_zero_and_one() {
        let m = RankMatrix::from_rows(vec![vec![2.0; 3]; 6]).unwrap();
        let r = friedman(&m).unwrap();
        assert_eq!((r.chi2, r.p), (0.0, 1.0));
        assert!(friedman(&RankMatrix::from_rows(vec![vec![1.0, 2.0]]).unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn column_permutation_invariance(rows in prop::collection::vec(prop::collection::vec(0u8..6, 4), 2..12), rot in 0usize..4) {
            let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
            let permuted: Vec<Vec<f64>> = rows.iter().map(|r| { let mut r = r.clone(); r.rotate_left(rot); r }).collect();
            let a = friedman(&rank_algorithms(&rows).unwrap()).unwrap();
            let b = friedman(&rank_algorithms(&permuted).unwrap()).unwrap();
            prop_assert!((a.chi2 - b.chi2).abs() < 1e-9);
        }

        #[test]
        fn p_decreases_in_chi2(a in 0.0f64..60.0, b in 0.0f64..60.0, df in 1usize..20) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(chi2_sf(hi, df as f64) <= chi2_sf(lo, df as f64));
        }
    }
}
