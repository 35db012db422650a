use rand::Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

pub const DEFAULT_ROPE: f64 = 10.0;
pub const DEFAULT_MC_SAMPLES: usize = 50_000;
/// Fewer Monte Carlo samples than this set [`BayesResult::low_samples`].
pub const MIN_RELIABLE_SAMPLES: usize = 1_000;

/// Posterior probabilities that the difference lies left of, inside, or
/// right of the region of practical equivalence `[-rope, rope]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BayesResult {
    pub p_left: f64,
    pub p_rope: f64,
    pub p_right: f64,
    pub rope: f64,
    pub samples: usize,
    /// Too few Monte Carlo samples for a reliable estimate.
    pub low_samples: bool,
}

/// Bayesian signed-rank test by Monte Carlo.
///
/// The differences are augmented with a pseudo-observation at 0. Each
/// posterior sample draws Dirichlet(1, ..., 1) weights `w` and splits the
/// mass `w_i w_j` of every pair `(i, j)` according to where the Walsh
/// average `(d_i + d_j) / 2` falls; the region holding the most mass wins the
/// sample (the ROPE on ties). The result is the fraction of samples each
/// region wins.
pub fn bayes_signed_rank(diffs: &[f64], rope: f64, mc_samples: usize, seed: u64) -> Result<BayesResult> {
    if diffs.len() < 2 {
        return Err(Error::invalid(format!("Bayesian signed-rank needs at least 2 differences, got {}", diffs.len())));
    }
    if diffs.iter().any(|d| !d.is_finite()) {
        return Err(Error::invalid("differences must be finite"));
    }
    if !(rope >= 0.0 && rope.is_finite()) {
        return Err(Error::invalid(format!("rope must be a non-negative number, got {rope}")));
    }
    if mc_samples == 0 {
        return Err(Error::invalid("need at least one Monte Carlo sample"));
    }
    let mut z = Vec::with_capacity(diffs.len() + 1);
    z.push(0.0);
    z.extend_from_slice(diffs);
    let m = z.len();
    // region of each pair: 0 left, 1 rope, 2 right
    let region: Vec<u8> = (0..m * m)
        .map(|p| {
            let s = (z[p / m] + z[p % m]) / 2.0;
            if s < -rope {
                0
            } else if s > rope {
                2
            } else {
                1
            }
        })
        .collect();
    let mut rng = rng_from_seed(seed);
    let mut wins = [0.0f64; 3];
    let mut w = vec![0.0; m];
    for _ in 0..mc_samples {
        let mut total = 0.0;
        for v in w.iter_mut() {
            *v = rng.sample::<f64, _>(Exp1);
            total += *v;
        }
        w.iter_mut().for_each(|v| *v /= total);
        let mut mass = [0.0f64; 3];
        for i in 0..m {
            let row = &region[i * m..(i + 1) * m];
            let mut part = [0.0f64; 3];
            for (r, wj) in row.iter().zip(&w) {
                part[*r as usize] += wj;
            }
            for r in 0..3 {
                mass[r] += w[i] * part[r];
            }
        }
        let top = mass[0].max(mass[1]).max(mass[2]);
        if mass[1] == top {
            wins[1] += 1.0;
        } else if mass[0] == mass[2] {
            wins[0] += 0.5;
            wins[2] += 0.5;
        } else if mass[0] == top {
            wins[0] += 1.0;
        } else {
            wins[2] += 1.0;
        }
    }
    let n = mc_samples as f64;
    Ok(BayesResult {
        p_left: wins[0] / n,
        p_rope: wins[1] / n,
        p_right: wins[2] / n,
        rope,
        samples: mc_samples,
        low_samples: mc_samples < MIN_RELIABLE_SAMPLES,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn clear_cases() {
        let r = bayes_signed_rank(&[100.0; 20], 10.0, 5_000, 1).unwrap();
        assert!(r.p_right >= 0.99, "{r:?}");
        let r = bayes_signed_rank(&[0.0; 20], 10.0, 5_000, 1).unwrap();
        assert!(r.p_rope >= 0.99, "{r:?}");
        let r = bayes_signed_rank(&[-50.0; 20], 10.0, 5_000, 1).unwrap();
        assert!(r.p_left >= 0.99, "{r:?}");
    }

    #[test]
    fn mirrored_input_swaps_tails() {
        let d = [12.0, -3.0, 25.0, 8.0, -15.0, 30.0, 2.0, 11.0, -1.0, 19.0];
        let neg: Vec<f64> = d.iter().map(|v| -v).collect();
        let a = bayes_signed_rank(&d, 10.0, 20_000, 7).unwrap();
        let b = bayes_signed_rank(&neg, 10.0, 20_000, 7).unwrap();
        assert!((a.p_left - b.p_right).abs() < 0.01);
        assert!((a.p_right - b.p_left).abs() < 0.01);
    }

    #[test]
    fn argument_checks() {
        assert!(bayes_signed_rank(&[1.0], 10.0, 100, 1).is_err());
        assert!(bayes_signed_rank(&[1.0, f64::NAN], 10.0, 100, 1).is_err());
        assert!(bayes_signed_rank(&[1.0, 2.0], 10.0, 0, 1).is_err());
        assert!(bayes_signed_rank(&[1.0, 2.0], 10.0, 999, 1).unwrap().low_samples);
        assert!(!bayes_signed_rank(&[1.0, 2.0], 10.0, 1000, 1).unwrap().low_samples);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn probabilities_sum_to_one_and_replay(d in prop::collection::vec(-50.0f64..50.0, 2..15), seed in 0u64..1000) {
            let a = bayes_signed_rank(&d, 10.0, 500, seed).unwrap();
            prop_assert!((a.p_left + a.p_rope + a.p_right - 1.0).abs() < 1e-9);
            let b = bayes_signed_rank(&d, 10.0, 500, seed).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
