//! Tables and figure data computed from a [`ResultSet`].
//!
//! A *contender* is one algorithm label under one transformation. When the
//! analysed records span several transformations, contenders are labelled
//! `ALG/transform`; restricting the analysis to a single transformation
//! labels them by algorithm alone.
//!
//! Conventions:
//! * The summary's `mean`, `median` and `std` columns average the per-function
//!   run statistics over functions (mean of means, mean of medians, mean of
//!   standard deviations). Functions with very different error scales
//!   dominate these averages; the rank columns are scale-free.
//! * Ranks use per-function median final errors.
//! * Wins and losses count per-function Wilcoxon tests over runs (paired by
//!   run index) significant at 0.05, summed over functions and opponents.
//! * `p_median_pairwise` is the median of the contender's `k - 1` two-sided
//!   Wilcoxon p-values against each opponent over per-function medians.
//! * Bayesian cells compare `A` (row) with `B` (column) on per-function
//!   median errors with `diff = err_B - err_A`, so `p_right` is the
//!   probability that `A` is practically better.

mod table;

pub use table::{Cell, Table};

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::{ResultSet, RunRecord};
use crate::seed::SeedHasher;
use crate::stats::{
    bayes_signed_rank, descriptive, median, nemenyi_cd, quantile_sorted, rank_algorithms, wilcoxon_signed_rank, BayesResult, RankMatrix,
    DEFAULT_MC_SAMPLES, DEFAULT_ROPE,
};
use crate::transforms::TransformKind;

pub const SIGNIFICANCE: f64 = 0.05;

/// Runs of one contender at one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Contender {
    pub label: String,
    pub algorithm: String,
    pub transform: TransformKind,
    /// Final errors by function id, ordered by run index.
    pub errors: BTreeMap<u32, Vec<f64>>,
}

impl Contender {
    pub fn medians(&self) -> Result<Vec<f64>> {
        self.errors.values().map(|e| median(e)).collect()
    }
}

fn select<'a>(results: &'a ResultSet, dim: usize, transform: Option<TransformKind>) -> Result<Vec<&'a RunRecord>> {
    let at_dim: Vec<&RunRecord> = results.records.iter().filter(|r| r.dim == dim).collect();
    if at_dim.is_empty() {
        return Err(Error::NotFound(format!("no records for dim {dim}")));
    }
    let chosen: Vec<&RunRecord> = at_dim.into_iter().filter(|r| transform.is_none_or(|t| r.transform == t)).collect();
    if chosen.is_empty() {
        return Err(Error::NotFound(format!("no records for transformation {} at dim {dim}", transform.map_or("?", |t| t.label()))));
    }
    Ok(chosen)
}

/// Groups the records of `dim` (optionally one transformation) into
/// contenders, checking they cover the same functions and run counts.
pub fn contenders(results: &ResultSet, dim: usize, transform: Option<TransformKind>) -> Result<Vec<Contender>> {
    let records = select(results, dim, transform)?;
    let transforms: BTreeSet<TransformKind> = records.iter().map(|r| r.transform).collect();
    let mut groups: BTreeMap<(String, TransformKind), BTreeMap<u32, Vec<(u32, f64)>>> = BTreeMap::new();
    for r in records {
        groups.entry((r.algorithm.clone(), r.transform)).or_default().entry(r.function).or_default().push((r.run, r.final_error));
    }
    let out: Vec<Contender> = groups
        .into_iter()
        .map(|((algorithm, t), by_fn)| Contender {
            label: if transforms.len() > 1 { format!("{algorithm}/{}", t.label()) } else { algorithm.clone() },
            algorithm,
            transform: t,
            errors: by_fn
                .into_iter()
                .map(|(f, mut runs)| {
                    runs.sort_by_key(|(run, _)| *run);
                    (f, runs.into_iter().map(|(_, e)| e).collect())
                })
                .collect(),
        })
        .collect();
    let shape = |c: &Contender| c.errors.iter().map(|(f, e)| (*f, e.len())).collect::<Vec<_>>();
    if out.iter().any(|c| shape(c) != shape(&out[0])) {
        return Err(Error::invalid(format!("contenders at dim {dim} do not cover the same functions and runs")));
    }
    Ok(out)
}

/// Median-based ranks of the contenders (one column each, in order).
pub fn rank_matrix(contenders: &[Contender]) -> Result<RankMatrix> {
    if contenders.len() == 1 {
        let n = contenders[0].errors.len();
        return Ok(RankMatrix { values: vec![vec![1.0]; n], k: 1, n });
    }
    let columns = contenders.iter().map(Contender::medians).collect::<Result<Vec<_>>>()?;
    let n = columns[0].len();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    rank_algorithms(&rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub dim: usize,
    pub algorithm: String,
    pub mean: f64,
    pub median: f64,
    pub std: f64,
    pub sum_rank: f64,
    pub mean_rank: f64,
    pub wins: usize,
    pub losses: usize,
    /// `None` without opponents.
    pub p_median_pairwise: Option<f64>,
}

pub fn summary_table(results: &ResultSet, dim: usize, transform: Option<TransformKind>) -> Result<Vec<SummaryRow>> {
    let cs = contenders(results, dim, transform)?;
    let ranks = rank_matrix(&cs)?;
    let sums = ranks.sum_ranks();
    let medians = cs.iter().map(Contender::medians).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(cs.len());
    for (a, c) in cs.iter().enumerate() {
        let stats = c.errors.values().map(|e| descriptive(e)).collect::<Result<Vec<_>>>()?;
        let n = stats.len() as f64;
        let (mut wins, mut losses) = (0, 0);
        let mut pairwise_p = Vec::new();
        for (b, other) in cs.iter().enumerate() {
            if a == b {
                continue;
            }
            for (f, errs) in &c.errors {
                let w = wilcoxon_signed_rank(errs, &other.errors[f])?;
                wins += w.x_smaller(SIGNIFICANCE) as usize;
                losses += w.x_larger(SIGNIFICANCE) as usize;
            }
            pairwise_p.push(wilcoxon_signed_rank(&medians[a], &medians[b])?.p_two_sided);
        }
        rows.push(SummaryRow {
            dim,
            algorithm: c.label.clone(),
            mean: stats.iter().map(|s| s.mean).sum::<f64>() / n,
            median: stats.iter().map(|s| s.median).sum::<f64>() / n,
            std: stats.iter().map(|s| s.std).sum::<f64>() / n,
            sum_rank: sums[a],
            mean_rank: sums[a] / ranks.n as f64,
            wins,
            losses,
            p_median_pairwise: if pairwise_p.is_empty() { None } else { Some(median(&pairwise_p)?) },
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdGroupData {
    /// `(label, mean rank)` by ascending mean rank.
    pub ranking: Vec<(String, f64)>,
    pub cd: f64,
    /// Maximal runs of the ranking whose mean-rank spread is at most `cd`,
    /// as index ranges into `ranking` (inclusive).
    pub groups: Vec<(usize, usize)>,
}

impl CdGroupData {
    pub fn group_labels(&self) -> Vec<Vec<&str>> {
        self.groups.iter().map(|&(s, e)| self.ranking[s..=e].iter().map(|(l, _)| l.as_str()).collect()).collect()
    }
}

/// Critical-difference diagram data for a rank matrix whose columns are
/// labelled by `labels`.
pub fn cd_diagram_data(ranks: &RankMatrix, labels: &[String]) -> Result<CdGroupData> {
    if labels.len() != ranks.k {
        return Err(Error::invalid(format!("{} labels for {} algorithms", labels.len(), ranks.k)));
    }
    let cd = nemenyi_cd(ranks.k, ranks.n, SIGNIFICANCE)?;
    let mut ranking: Vec<(String, f64)> = labels.iter().cloned().zip(ranks.mean_ranks()).collect();
    ranking.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let mut groups = Vec::new();
    let mut last_end = None;
    for start in 0..ranking.len() {
        let mut end = start;
        while end + 1 < ranking.len() && ranking[end + 1].1 - ranking[start].1 <= cd {
            end += 1;
        }
        if last_end.is_none_or(|l| end > l) {
            groups.push((start, end));
            last_end = Some(end);
        }
    }
    Ok(CdGroupData { ranking, cd, groups })
}

/// Pairwise Bayesian signed-rank results, `cells[a][b]` comparing row `a`
/// with column `b`; the diagonal is empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BayesMatrix {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<Option<BayesResult>>>,
}

pub fn bayes_heatmap_data(
    results: &ResultSet,
    dim: usize,
    transform: Option<TransformKind>,
    rope: f64,
    mc_samples: usize,
    seed: u64,
) -> Result<BayesMatrix> {
    let cs = contenders(results, dim, transform)?;
    if cs.len() < 2 {
        return Err(Error::invalid("the Bayesian map needs at least two contenders"));
    }
    let medians = cs.iter().map(Contender::medians).collect::<Result<Vec<_>>>()?;
    let k = cs.len();
    let mut cells = vec![vec![None; k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let pair_seed = SeedHasher::new("invbench/bayes-map").u64(seed).u32(dim as u32).str(&cs[a].label).str(&cs[b].label).finish();
            let diffs: Vec<f64> = medians[b].iter().zip(&medians[a]).map(|(eb, ea)| eb - ea).collect();
            let r = bayes_signed_rank(&diffs, rope, mc_samples, pair_seed)?;
            // the mirrored comparison uses the same draws, so it is the exact swap
            cells[b][a] = Some(BayesResult { p_left: r.p_right, p_right: r.p_left, ..r });
            cells[a][b] = Some(r);
        }
    }
    Ok(BayesMatrix { labels: cs.into_iter().map(|c| c.label).collect(), cells })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxplotData {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
}

/// Five-number summary with linearly interpolated quartiles and whiskers at
/// the most extreme samples within 1.5 IQR of the box.
pub fn boxplot_data(samples: &[f64]) -> Result<BoxplotData> {
    if samples.is_empty() {
        return Err(Error::invalid("boxplot of an empty sample"));
    }
    if samples.iter().any(|v| v.is_nan()) {
        return Err(Error::invalid("boxplot samples contain NaN"));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let (q1, median, q3) = (quantile_sorted(&s, 0.25), quantile_sorted(&s, 0.5), quantile_sorted(&s, 0.75));
    let iqr = q3 - q1;
    let (lo, hi) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let inside: Vec<f64> = s.iter().copied().filter(|v| *v >= lo && *v <= hi).collect();
    Ok(BoxplotData {
        median,
        q1,
        q3,
        whisker_low: inside.first().copied().unwrap_or(q1),
        whisker_high: inside.last().copied().unwrap_or(q3),
        outliers: s.into_iter().filter(|v| *v < lo || *v > hi).collect(),
    })
}

/// Which best-so-far series a convergence curve follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    Error,
    Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub algorithm: String,
    pub checkpoint_evals: u64,
    pub median: f64,
}

/// Per contender and checkpoint, the median over runs of the best-so-far
/// error (or raw value).
pub fn convergence_data(results: &ResultSet, function: u32, dim: usize, transform: Option<TransformKind>, series: Series) -> Result<Vec<ConvergencePoint>> {
    let records = select(results, dim, transform)?;
    let transforms: BTreeSet<TransformKind> = records.iter().map(|r| r.transform).collect();
    let mut groups: BTreeMap<(String, TransformKind), Vec<&RunRecord>> = BTreeMap::new();
    for r in records.into_iter().filter(|r| r.function == function) {
        groups.entry((r.algorithm.clone(), r.transform)).or_default().push(r);
    }
    if groups.is_empty() {
        return Err(Error::NotFound(format!("no records for function {function} at dim {dim}")));
    }
    let mut out = Vec::new();
    for ((algorithm, t), runs) in groups {
        let label = if transforms.len() > 1 { format!("{algorithm}/{}", t.label()) } else { algorithm };
        for (i, &evals) in results.checkpoint_evals.iter().enumerate() {
            let column: Vec<f64> = runs
                .iter()
                .map(|r| match series {
                    Series::Error => r.trajectory[i],
                    Series::Value => r.values[i],
                })
                .collect();
            out.push(ConvergencePoint { algorithm: label.clone(), checkpoint_evals: evals, median: median(&column)? });
        }
    }
    Ok(out)
}

/// Names accepted by [`analysis_table`].
pub const TABLES: [&str; 5] = ["summary", "cd", "bayes", "boxplot", "convergence"];

/// Options shared by the analysis tables.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisOptions {
    /// Restrict to one dimension (all dimensions otherwise).
    pub dim: Option<usize>,
    pub transform: Option<TransformKind>,
    pub rope: f64,
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { dim: None, transform: None, rope: DEFAULT_ROPE, mc_samples: DEFAULT_MC_SAMPLES, seed: 0 }
    }
}

fn dims(results: &ResultSet, opts: &AnalysisOptions) -> Result<Vec<usize>> {
    match opts.dim {
        Some(d) if results.dims().contains(&d) => Ok(vec![d]),
        Some(d) => Err(Error::NotFound(format!("no records for dim {d}"))),
        None => Ok(results.dims()),
    }
}

/// Builds one of the named [`TABLES`] over every selected dimension.
pub fn analysis_table(results: &ResultSet, name: &str, opts: &AnalysisOptions) -> Result<Table> {
    let dims = dims(results, opts)?;
    match name {
        "summary" => {
            let mut t = Table::new(
                "summary",
                &["dim", "algorithm", "mean", "median", "std", "sum_rank", "mean_rank", "wins", "losses", "p_median_pairwise"],
            );
            for &d in &dims {
                for r in summary_table(results, d, opts.transform)? {
                    t.push(vec![
                        d.into(),
                        r.algorithm.into(),
                        r.mean.into(),
                        r.median.into(),
                        r.std.into(),
                        r.sum_rank.into(),
                        r.mean_rank.into(),
                        r.wins.into(),
                        r.losses.into(),
                        r.p_median_pairwise.into(),
                    ]);
                }
            }
            Ok(t)
        }
        "cd" => {
            let mut t = Table::new("cd", &["dim", "position", "algorithm", "mean_rank", "cd", "group_start", "group_end"]);
            for &d in &dims {
                let cs = contenders(results, d, opts.transform)?;
                let labels: Vec<String> = cs.iter().map(|c| c.label.clone()).collect();
                let data = cd_diagram_data(&rank_matrix(&cs)?, &labels)?;
                for (i, (label, rank)) in data.ranking.iter().enumerate() {
                    // widest group containing this position
                    let (s, e) = data.groups.iter().filter(|(s, e)| *s <= i && i <= *e).max_by_key(|(s, e)| e - s).copied().unwrap_or((i, i));
                    t.push(vec![d.into(), (i + 1).into(), label.clone().into(), (*rank).into(), data.cd.into(), (s + 1).into(), (e + 1).into()]);
                }
            }
            Ok(t)
        }
        "bayes" => {
            let mut t = Table::new("bayes", &["dim", "algorithm_a", "algorithm_b", "p_left", "p_rope", "p_right", "rope", "samples"]);
            for &d in &dims {
                let m = bayes_heatmap_data(results, d, opts.transform, opts.rope, opts.mc_samples, opts.seed)?;
                for (a, row) in m.cells.iter().enumerate() {
                    for (b, cell) in row.iter().enumerate() {
                        if let Some(r) = cell {
                            t.push(vec![
                                d.into(),
                                m.labels[a].clone().into(),
                                m.labels[b].clone().into(),
                                r.p_left.into(),
                                r.p_rope.into(),
                                r.p_right.into(),
                                r.rope.into(),
                                r.samples.into(),
                            ]);
                        }
                    }
                }
            }
            Ok(t)
        }
        "boxplot" => {
            let mut t = Table::new(
                "boxplot",
                &["dim", "function", "algorithm", "median", "q1", "q3", "whisker_low", "whisker_high", "outliers"],
            );
            for &d in &dims {
                let cs = contenders(results, d, opts.transform)?;
                let functions: Vec<u32> = cs[0].errors.keys().copied().collect();
                for f in functions {
                    for c in &cs {
                        let b = boxplot_data(&c.errors[&f])?;
                        let outliers = b.outliers.iter().map(|v| crate::harness::format_float(*v)).collect::<Vec<_>>().join(";");
                        t.push(vec![
                            d.into(),
                            f.into(),
                            c.label.clone().into(),
                            b.median.into(),
                            b.q1.into(),
                            b.q3.into(),
                            b.whisker_low.into(),
                            b.whisker_high.into(),
                            outliers.into(),
                        ]);
                    }
                }
            }
            Ok(t)
        }
        "convergence" => {
            let mut t = Table::new("convergence", &["dim", "function", "algorithm", "checkpoint_evals", "median_error", "median_value"]);
            for &d in &dims {
                let functions: BTreeSet<u32> = select(results, d, opts.transform)?.iter().map(|r| r.function).collect();
                for f in functions {
                    let errors = convergence_data(results, f, d, opts.transform, Series::Error)?;
                    let values = convergence_data(results, f, d, opts.transform, Series::Value)?;
                    for (e, v) in errors.into_iter().zip(values) {
                        t.push(vec![d.into(), f.into(), e.algorithm.into(), e.checkpoint_evals.into(), e.median.into(), v.median.into()]);
                    }
                }
            }
            Ok(t)
        }
        other => Err(Error::config(format!("unknown table {other:?}; expected one of {}", TABLES.join(", ")))),
    }
}

#[cfg(test)]
mod tests;
