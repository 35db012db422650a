//! Statistical battery for comparing algorithms across functions:
//! descriptive statistics, median-based ranking, the Wilcoxon signed-rank
//! and Friedman tests, Nemenyi critical differences and the Bayesian
//! signed-rank test with a region of practical equivalence.
//!
//! Everything here is a pure function of its inputs (the Bayesian test takes
//! an explicit seed), so calls can run concurrently.

mod bayes;
mod descriptive;
mod friedman;
mod nemenyi;
mod ranks;
pub mod special;
mod wilcoxon;

pub use bayes::{bayes_signed_rank, BayesResult, DEFAULT_MC_SAMPLES, DEFAULT_ROPE, MIN_RELIABLE_SAMPLES};
pub use descriptive::{descriptive, median, quantile_sorted, Descriptive};
pub use friedman::{friedman, FriedmanResult};
pub use nemenyi::{nemenyi_cd, nemenyi_q, NEMENYI_K_RANGE};
pub use ranks::{rank_algorithms, rank_row, RankMatrix};
pub use wilcoxon::{wilcoxon_signed_rank, PairwiseResult, EXACT_LIMIT, MIN_EFFECTIVE};
