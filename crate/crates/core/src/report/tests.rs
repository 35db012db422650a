use super::*;
use crate::harness::{Accounting, AlgorithmSpec, RunConfig};
use crate::optimizers::AlgorithmId;
use crate::stats::nemenyi_cd;
use crate::transforms::TransformSpec;
use proptest::prelude::*;

/// Result set with `error(algorithm, function, run)` as final errors and a
/// two-point trajectory ending there.
fn synthetic(labels: &[&str], functions: u32, runs: u32, error: impl Fn(usize, u32, u32) -> f64) -> ResultSet {
    let mut records = Vec::new();
    for (a, label) in labels.iter().enumerate() {
        for f in 1..=functions {
            for run in 0..runs {
                let e = error(a, f, run);
                records.push(RunRecord {
                    algorithm: label.to_string(),
                    hybrid: false,
                    function: f,
                    transform: TransformKind::Baseline,
                    dim: 10,
                    run,
                    seed: 0,
                    trajectory: vec![e + 1.0, e],
                    values: vec![e + 101.0, e + 100.0],
                    final_error: e,
                    final_value: e + 100.0,
                    evaluations_used: 100,
                    out_of_reach: false,
                    failed: false,
                    accounting: Accounting::default(),
                });
            }
        }
    }
    ResultSet {
        schema_version: 1,
        config: RunConfig {
            dims: vec![10],
            budget_fes: 100,
            agents: 20,
            runs,
            master_seed: 0,
            algorithms: vec![AlgorithmSpec::new(AlgorithmId::Shade, false)],
            transformations: vec![TransformSpec::baseline()],
            suite_seed: 0,
            checkpoints: 2,
            functions: None,
        },
        checkpoint_evals: vec![50, 100],
        records,
    }
}

const NINETEEN: [&str; 19] = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "n", "o", "p", "q", "r", "s"];

#[test]
fn single_contender_summary() {
    let rs = synthetic(&["X"], 29, 5, |_, f, r| (f * 10 + r) as f64);
    let rows = summary_table(&rs, 10, None).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0].sum_rank, rows[0].wins, rows[0].losses), (29.0, 0, 0));
    assert_eq!(rows[0].p_median_pairwise, None);
}

#[test]
fn best_everywhere_has_sum_rank_n() {
    let rs = synthetic(&NINETEEN, 29, 6, |a, f, r| ((a + 1) * 1000) as f64 + ((f * 7 + r) % 11) as f64);
    let rows = summary_table(&rs, 10, None).unwrap();
    assert_eq!(rows[0].sum_rank, 29.0);
    assert_eq!(rows[18].sum_rank, 551.0);
    for r in &rows {
        assert!((r.mean_rank - r.sum_rank / 29.0).abs() < 1e-12);
        assert!(r.wins + r.losses <= 18 * 29);
        assert!((29.0..=19.0 * 29.0).contains(&r.sum_rank));
    }
    // strict separation on every function: 6 runs all smaller => exact p 1/32
    assert_eq!(rows[0].wins, 18 * 29);
    assert_eq!(rows[18].losses, 18 * 29);
    assert!(rows[0].p_median_pairwise.unwrap() < 1e-5);
}

#[test]
fn summary_statistics_aggregate_per_function_runs() {
    let rs = synthetic(&["X", "Y"], 2, 4, |a, f, r| if a == 0 { (f as f64) * (r as f64 + 1.0) } else { 100.0 });
    let x = &summary_table(&rs, 10, None).unwrap()[0];
    // f1 runs 1,2,3,4 (mean 2.5); f2 runs 2,4,6,8 (mean 5)
    assert_eq!(x.mean, 3.75);
    assert_eq!(x.median, 3.75);
    let std1 = (5.0f64 / 3.0).sqrt();
    assert!((x.std - 1.5 * std1).abs() < 1e-12);
}

#[test]
fn missing_dim_is_not_found() {
    let rs = synthetic(&["X", "Y"], 3, 5, |a, _, _| a as f64);
    assert!(matches!(summary_table(&rs, 30, None), Err(Error::NotFound(_))));
    assert!(matches!(summary_table(&rs, 10, Some(TransformKind::Rotate)), Err(Error::NotFound(_))));
    let opts = AnalysisOptions { dim: Some(50), ..AnalysisOptions::default() };
    assert!(matches!(analysis_table(&rs, "summary", &opts), Err(Error::NotFound(_))));
}

fn labels(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("A{i}")).collect()
}

#[test]
fn cd_groups_separate_and_merge() {
    let apart = RankMatrix::from_rows(vec![vec![1.0, 2.0]; 40]).unwrap();
    let d = cd_diagram_data(&apart, &labels(2)).unwrap();
    assert!(d.cd < 1.0);
    assert_eq!(d.groups, vec![(0, 0), (1, 1)]);

    let tied = RankMatrix::from_rows(vec![vec![2.0; 3]; 5]).unwrap();
    let d = cd_diagram_data(&tied, &labels(3)).unwrap();
    assert_eq!(d.groups, vec![(0, 2)]);

    let big = RankMatrix::from_rows((0..29).map(|i| (0..19).map(|j| ((i + j) % 19 + 1) as f64).collect()).collect()).unwrap();
    let d = cd_diagram_data(&big, &labels(19)).unwrap();
    assert_eq!(d.cd, nemenyi_cd(19, 29, 0.05).unwrap());
    assert!(matches!(cd_diagram_data(&RankMatrix::from_rows(vec![vec![1.0, 2.0]]).unwrap(), &labels(3)), Err(Error::InvalidArgument(_))));
}

proptest! {
    #[test]
    fn cd_groups_are_maximal_contiguous_and_cover(rows in prop::collection::vec(prop::collection::vec(0u8..4, 5), 3..30)) {
        let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
        let m = rank_algorithms(&rows).unwrap();
        let d = cd_diagram_data(&m, &labels(5)).unwrap();
        let mut covered = [false; 5];
        for &(s, e) in &d.groups {
            prop_assert!(d.ranking[e].1 - d.ranking[s].1 <= d.cd);
            // maximal: the next position is out of reach
            if e + 1 < 5 {
                prop_assert!(d.ranking[e + 1].1 - d.ranking[s].1 > d.cd);
            }
            covered[s..=e].iter_mut().for_each(|c| *c = true);
        }
        prop_assert!(covered.iter().all(|&c| c));
        prop_assert!(d.ranking.windows(2).all(|w| w[0].1 <= w[1].1));
    }
}

#[test]
fn bayes_map_diagonal_dominance_and_antisymmetry() {
    let rs = synthetic(&["A", "B", "C"], 12, 3, |a, f, _| match a {
        0 => f as f64,
        1 => f as f64 + 50.0,
        _ => f as f64 + ((f % 3) as f64 - 1.0) * 4.0,
    });
    let m = bayes_heatmap_data(&rs, 10, None, 10.0, 4000, 5).unwrap();
    assert_eq!(m.labels, vec!["A", "B", "C"]);
    for i in 0..3 {
        assert!(m.cells[i][i].is_none());
        for j in 0..3 {
            if i != j {
                let (x, y) = (m.cells[i][j].unwrap(), m.cells[j][i].unwrap());
                assert_eq!(x.p_left, y.p_right);
                assert!((x.p_left + x.p_rope + x.p_right - 1.0).abs() < 1e-9);
            }
        }
    }
    assert!(m.cells[0][1].unwrap().p_right >= 0.99);
    assert!(m.cells[0][2].unwrap().p_rope >= 0.9);
    assert!(bayes_heatmap_data(&synthetic(&["A"], 3, 2, |_, _, _| 0.0), 10, None, 10.0, 100, 1).is_err());
}

#[test]
fn boxplot_hand_cases() {
    let s: Vec<f64> = (1..=9).map(f64::from).collect();
    let b = boxplot_data(&s).unwrap();
    assert_eq!((b.median, b.q1, b.q3, b.whisker_low, b.whisker_high), (5.0, 3.0, 7.0, 1.0, 9.0));
    assert!(b.outliers.is_empty());
    let b = boxplot_data(&[4.0; 6]).unwrap();
    assert_eq!((b.median, b.q1, b.q3, b.whisker_low, b.whisker_high), (4.0, 4.0, 4.0, 4.0, 4.0));
    assert!(b.outliers.is_empty());
    let b = boxplot_data(&[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
    assert_eq!(b.outliers, vec![100.0]);
    assert_eq!(b.whisker_high, 4.0);
    assert!(boxplot_data(&[]).is_err());
}

#[test]
fn convergence_medians() {
    let rs = synthetic(&["A"], 2, 1, |_, f, _| f as f64);
    let c = convergence_data(&rs, 2, 10, None, Series::Error).unwrap();
    assert_eq!(c.iter().map(|p| p.median).collect::<Vec<_>>(), vec![3.0, 2.0]);
    assert_eq!(c.iter().map(|p| p.checkpoint_evals).collect::<Vec<_>>(), vec![50, 100]);
    let rs = synthetic(&["A"], 1, 5, |_, _, r| r as f64);
    let c = convergence_data(&rs, 1, 10, None, Series::Value).unwrap();
    assert!(c.windows(2).all(|w| w[1].median <= w[0].median));
    assert_eq!(c[1].median, 102.0);
    assert!(convergence_data(&rs, 9, 10, None, Series::Error).is_err());
}

#[test]
fn analysis_tables_are_stable() {
    let rs = synthetic(&["A", "B", "C"], 6, 5, |a, f, r| ((a * 31 + f as usize * 7 + r as usize * 3) % 17) as f64);
    let opts = AnalysisOptions { mc_samples: 2000, ..AnalysisOptions::default() };
    for name in TABLES {
        let x = analysis_table(&rs, name, &opts).unwrap().to_csv().unwrap();
        let y = analysis_table(&rs, name, &opts).unwrap().to_csv().unwrap();
        assert_eq!(x, y, "{name}");
        assert!(x.lines().count() > 1, "{name}");
    }
    assert!(analysis_table(&rs, "nope", &opts).is_err());
}
