//! Inverse-regression replacement operator.
//!
//! After each generation of the base algorithm the `g = floor(fraction *
//! agents)` worst agents are overwritten with forecast candidates. The
//! forecast picks a target objective value beyond the current best,
//! `f* = f_best - gamma (f_median - f_best)`, fits each coordinate as a
//! linear function of the objective value over the population
//! (`x_j ~ s_j f + b_j`, least squares) and reads the fitted line at `f*`.
//! Each candidate gets independent Gaussian jitter and is clamped to the box.
//!
//! Fitness values enter only through exact differences to the population
//! best, so adding a constant to the objective yields bitwise the same
//! candidates.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitness::Fitness;
use crate::objective::{Bounds, Evaluator};
use crate::optimizers::OptimizerState;
use crate::seed::substream;

/// Below this fitness variance the regression is considered degenerate.
pub const DEGENERATE_VARIANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HybridConfig {
    pub enabled: bool,
    /// Share of the population replaced each generation.
    pub fraction: f64,
    /// Extrapolation depth of the target value.
    pub gamma: f64,
    /// Jitter standard deviation as a fraction of the box width.
    pub sigma: f64,
}

impl Default for HybridConfig {
    fn default() -> Self {
        HybridConfig { enabled: false, fraction: 0.1, gamma: 0.5, sigma: 0.01 }
    }
}

impl HybridConfig {
    pub fn enabled() -> Self {
        HybridConfig { enabled: true, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fraction > 0.0 && self.fraction < 1.0) {
            return Err(Error::config(format!("hybrid.fraction must lie in (0, 1), got {}", self.fraction)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::config(format!("hybrid.gamma must be positive, got {}", self.gamma)));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::config(format!("hybrid.sigma must be non-negative, got {}", self.sigma)));
        }
        Ok(())
    }

    /// Number of agents replaced per generation, `floor(fraction * agents)`;
    /// at least one is required.
    pub fn replaced(&self, agents: usize) -> Result<usize> {
        self.validate()?;
        let g = (self.fraction * agents as f64).floor() as usize;
        if g == 0 {
            return Err(Error::config(format!(
                "hybrid.fraction {} replaces no agent of a population of {agents}",
                self.fraction
            )));
        }
        Ok(g.min(agents))
    }
}

fn to_fitness(values: &[f64]) -> Vec<Fitness> {
    values.iter().map(|&v| Fitness::new(v)).collect()
}

/// Best value and `f_median - f_best`.
fn best_and_median(fitness: &[Fitness]) -> Result<(Fitness, f64)> {
    if fitness.len() < 2 {
        return Err(Error::invalid(format!("need at least 2 fitness values, got {}", fitness.len())));
    }
    if fitness.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("fitness values must be finite"));
    }
    let mut sorted = fitness.to_vec();
    sorted.sort_by(Fitness::total_cmp);
    let n = sorted.len();
    let best = sorted[0];
    let d_lo = sorted[(n - 1) / 2].diff(best);
    let d_hi = sorted[n / 2].diff(best);
    Ok((best, (d_lo + d_hi) / 2.0))
}

fn offset_of(fitness: &[Fitness], gamma: f64) -> Result<f64> {
    let (_, median_gap) = best_and_median(fitness)?;
    Ok(-gamma * median_gap)
}

/// Target value relative to the best: `-gamma (f_median - f_best)`.
pub fn target_offset(fitness: &[f64], gamma: f64) -> Result<f64> {
    offset_of(&to_fitness(fitness), gamma)
}

/// Target objective value `f* = f_best - gamma (f_median - f_best)`.
pub fn target_fitness(fitness: &[f64], gamma: f64) -> Result<f64> {
    let (best, median_gap) = best_and_median(&to_fitness(fitness))?;
    Ok(best.value() - gamma * median_gap)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub position: Vec<f64>,
    /// The fitness values had (numerically) no spread; the candidate is the
    /// best agent plus jitter.
    pub degenerate: bool,
}

/// Per-coordinate least-squares line of position on fitness, in
/// best-relative fitness units.
#[derive(Debug, Clone)]
struct Calibration {
    best_index: usize,
    mean_gap: f64,
    mean_position: Vec<f64>,
    slope: Vec<f64>,
    degenerate: bool,
}

impl Calibration {
    fn fit(positions: &[Vec<f64>], fitness: &[Fitness]) -> Result<Self> {
        if positions.len() != fitness.len() {
            return Err(Error::invalid(format!("{} positions but {} fitness values", positions.len(), fitness.len())));
        }
        best_and_median(fitness)?;
        let n = fitness.len() as f64;
        let dim = positions[0].len();
        let mut best_index = 0;
        for (i, f) in fitness.iter().enumerate() {
            if *f < fitness[best_index] {
                best_index = i;
            }
        }
        let best = fitness[best_index];
        let gaps: Vec<f64> = fitness.iter().map(|f| f.diff(best)).collect();
        let mean_gap = gaps.iter().sum::<f64>() / n;
        let var = gaps.iter().map(|d| (d - mean_gap).powi(2)).sum::<f64>() / n;
        let mut mean_position = vec![0.0; dim];
        for x in positions {
            for (m, v) in mean_position.iter_mut().zip(x) {
                *m += v;
            }
        }
        mean_position.iter_mut().for_each(|m| *m /= n);
        let degenerate = !(var >= DEGENERATE_VARIANCE);
        let slope = if degenerate {
            vec![0.0; dim]
        } else {
            (0..dim)
                .map(|j| {
                    let cov = positions.iter().zip(&gaps).map(|(x, d)| (d - mean_gap) * (x[j] - mean_position[j])).sum::<f64>() / n;
                    cov / var
                })
                .collect()
        };
        Ok(Calibration { best_index, mean_gap, mean_position, slope, degenerate })
    }

    fn candidate(&self, positions: &[Vec<f64>], gap: f64, bounds: Bounds, sigma: f64, rng: &mut ChaCha8Rng) -> Prediction {
        let spread = sigma * bounds.width();
        let position = (0..self.slope.len())
            .map(|j| {
                let centre = if self.degenerate {
                    positions[self.best_index][j]
                } else {
                    self.mean_position[j] + self.slope[j] * (gap - self.mean_gap)
                };
                let jitter: f64 = rng.sample(StandardNormal);
                bounds.clamp(centre + spread * jitter)
            })
            .collect();
        Prediction { position, degenerate: self.degenerate }
    }
}

/// Predicts a position whose objective value should be close to `f_star`.
pub fn predict_candidate(
    positions: &[Vec<f64>],
    fitness: &[f64],
    f_star: f64,
    bounds: Bounds,
    sigma: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Prediction> {
    let fitness = to_fitness(fitness);
    let cal = Calibration::fit(positions, &fitness)?;
    let best = fitness[cal.best_index].value();
    Ok(cal.candidate(positions, f_star - best, bounds, sigma, rng))
}

/// Outcome of one [`HybridOperator::inject`] call.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InjectReport {
    pub evaluations: u64,
    /// Slots that were overwritten, in replacement order.
    pub replaced: Vec<usize>,
    /// Candidates produced by the degenerate (no-spread) fallback.
    pub degenerate: usize,
}

/// The replacement operator with its own random stream, so attaching it does
/// not perturb the base algorithm's draws.
#[derive(Debug, Clone)]
pub struct HybridOperator {
    config: HybridConfig,
    rng: ChaCha8Rng,
}

impl HybridOperator {
    pub fn new(config: HybridConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        Ok(HybridOperator { config, rng: substream(seed, "hybrid-operator") })
    }

    pub fn config(&self) -> &HybridConfig {
        &self.config
    }

    /// Indices of the `g` largest fitness values, ties to the lower index.
    pub fn worst_indices<T: Copy + Into<Fitness>>(fitness: &[T], g: usize) -> Vec<usize> {
        let fitness: Vec<Fitness> = fitness.iter().map(|&v| v.into()).collect();
        let mut idx: Vec<usize> = (0..fitness.len()).collect();
        idx.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]).then(a.cmp(&b)));
        idx.truncate(g);
        idx
    }

    /// Replaces the `g` worst agents with forecast candidates, evaluating
    /// each (stops early when the budget runs out). Only the shared search
    /// state is modified.
    pub fn inject(&mut self, state: &mut OptimizerState, evaluator: &mut Evaluator<'_>, remaining_budget: u64) -> Result<InjectReport> {
        let mut report = InjectReport::default();
        let mut budget = remaining_budget.min(evaluator.remaining());
        if budget == 0 {
            return Ok(report);
        }
        let search = state.search_mut();
        let g = self.config.replaced(search.agents())?;
        let pop = &search.population;
        let cal = Calibration::fit(&pop.positions, &pop.fitness)?;
        let gap = offset_of(&pop.fitness, self.config.gamma)?;
        let slots = Self::worst_indices(&pop.fitness, g);
        for slot in slots {
            if budget == 0 {
                break;
            }
            let pred = cal.candidate(&search.population.positions, gap, search.bounds, self.config.sigma, &mut self.rng);
            let value = evaluator.evaluate(&pred.position)?;
            budget -= 1;
            report.evaluations += 1;
            report.degenerate += pred.degenerate as usize;
            search.observe(&pred.position, value);
            search.population.positions[slot] = pred.position;
            search.population.fitness[slot] = value;
            report.replaced.push(slot);
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::Objective;
    use crate::optimizers::{AlgorithmId, Population};
    use crate::seed::rng_from_seed;
    use crate::suite::{BaseFunction, ObjectiveFunction};
    use crate::transforms::{wrap, Transformation};

    #[test]
    fn target_fitness_hand_case() {
        // best 0, median (10 + 20) / 2 = 15, gamma 0.5
        assert_eq!(target_fitness(&[0.0, 10.0, 20.0, 30.0], 0.5).unwrap(), -7.5);
        assert_eq!(target_fitness(&[5.0; 4], 0.5).unwrap(), 5.0);
        assert_eq!(target_fitness(&[30.0, 0.0, 20.0, 10.0], 0.5).unwrap(), -7.5);
    }

    #[test]
    fn target_fitness_shifts_with_objective() {
        let f = [0.0, 10.0, 20.0, 30.0];
        let shifted: Vec<f64> = f.iter().map(|v| v + 6.0).collect();
        assert_eq!(target_fitness(&shifted, 0.5).unwrap() - target_fitness(&f, 0.5).unwrap(), 6.0);
    }

    #[test]
    fn target_fitness_rejects_tiny_input() {
        assert!(target_fitness(&[], 0.5).is_err());
        assert!(target_fitness(&[1.0], 0.5).is_err());
    }

    #[test]
    fn exact_linear_data_is_inverted() {
        let fitness = [0.0, 10.0, 20.0, 30.0];
        let positions: Vec<Vec<f64>> = fitness.iter().map(|&f| vec![f]).collect();
        let mut rng = rng_from_seed(1);
        let p = predict_candidate(&positions, &fitness, -7.5, Bounds::STANDARD, 0.0, &mut rng).unwrap();
        assert!(!p.degenerate);
        assert!((p.position[0] + 7.5).abs() < 1e-12, "{:?}", p.position);
    }

    #[test]
    fn flat_fitness_falls_back_to_best() {
        let fitness = [3.0, 3.0, 3.0];
        let positions = vec![vec![1.0, 2.0], vec![4.0, 5.0], vec![7.0, 8.0]];
        let mut rng = rng_from_seed(2);
        let p = predict_candidate(&positions, &fitness, 3.0, Bounds::STANDARD, 0.0, &mut rng).unwrap();
        assert!(p.degenerate);
        assert_eq!(p.position, vec![1.0, 2.0]);
        let j = predict_candidate(&positions, &fitness, 3.0, Bounds::STANDARD, 0.01, &mut rng).unwrap();
        assert!(j.degenerate);
        assert_ne!(j.position, vec![1.0, 2.0]);
        assert!((j.position[0] - 1.0).abs() < 10.0);
    }

    #[test]
    fn prediction_cancels_vertical_shift() {
        let mut rng = rng_from_seed(3);
        let positions: Vec<Vec<f64>> = (0..20).map(|_| (0..5).map(|_| rng.random_range(-50.0..50.0)).collect()).collect();
        let f = ObjectiveFunction::plain(BaseFunction::Rastrigin, 5);
        let fitness: Vec<f64> = positions.iter().map(|x| f.value(x) + 100.0).collect();
        let shifted: Vec<f64> = fitness.iter().map(|v| v + 6.0).collect();
        let fs = target_fitness(&fitness, 0.5).unwrap();
        let fs_shift = target_fitness(&shifted, 0.5).unwrap();
        let a = predict_candidate(&positions, &fitness, fs, Bounds::STANDARD, 0.0, &mut rng_from_seed(9)).unwrap();
        let b = predict_candidate(&positions, &shifted, fs_shift, Bounds::STANDARD, 0.0, &mut rng_from_seed(9)).unwrap();
        for (x, y) in a.position.iter().zip(&b.position) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn candidates_are_clamped() {
        let fitness = [0.0, 1.0];
        let positions = vec![vec![-90.0], vec![90.0]];
        // slope -180 per unit, target -100 => far outside the box
        let p = predict_candidate(&positions, &fitness, -100.0, Bounds::STANDARD, 0.0, &mut rng_from_seed(1)).unwrap();
        assert_eq!(p.position, vec![-100.0]);
    }

    #[test]
    fn replaced_count_follows_floor_rule() {
        let c = HybridConfig::enabled();
        assert_eq!(c.replaced(20).unwrap(), 2);
        assert_eq!(c.replaced(10).unwrap(), 1);
        assert!(c.replaced(9).is_err());
        assert!(HybridConfig { fraction: 1.0, ..c }.validate().is_err());
        assert_eq!(HybridConfig { fraction: 0.95, ..c }.replaced(20).unwrap(), 19);
    }

    #[test]
    fn worst_indices_break_ties_by_lower_index() {
        assert_eq!(HybridOperator::worst_indices(&[1.0, 5.0, 5.0, 3.0, 5.0], 2), vec![1, 2]);
        assert_eq!(HybridOperator::worst_indices(&[1.0, 2.0, 9.0], 1), vec![2]);
    }

    fn setup(f: &dyn Objective, budget: u64) -> (Evaluator<'_>, OptimizerState) {
        let mut ev = Evaluator::new(f, budget);
        let st = OptimizerState::init(AlgorithmId::Shade, Bounds::STANDARD, f.dim(), 20, 4, &mut ev).unwrap();
        (ev, st)
    }

    #[test]
    fn inject_replaces_the_two_worst() {
        let f = ObjectiveFunction::plain(BaseFunction::Sphere, 3);
        let (mut ev, mut st) = setup(&f, 100);
        let before: Population = st.population().clone();
        let worst = HybridOperator::worst_indices(&before.fitness, 2);
        let best_before = st.best().1;
        let mut op = HybridOperator::new(HybridConfig::enabled(), 1).unwrap();
        let rep = op.inject(&mut st, &mut ev, 80).unwrap();
        assert_eq!(rep.evaluations, 2);
        assert_eq!(rep.replaced, worst);
        assert_eq!(ev.used(), 22);
        let after = st.population();
        assert_eq!(after.agents(), 20);
        for i in 0..20 {
            if worst.contains(&i) {
                assert_eq!(after.fitness[i].value(), f.value(&after.positions[i]));
                assert!(Bounds::STANDARD.contains(&after.positions[i]));
            } else {
                assert_eq!(after.positions[i], before.positions[i]);
            }
        }
        assert!(st.best().1 <= best_before);
    }

    #[test]
    fn inject_truncates_to_budget() {
        let f = ObjectiveFunction::plain(BaseFunction::Sphere, 3);
        let (mut ev, mut st) = setup(&f, 100);
        let mut op = HybridOperator::new(HybridConfig::enabled(), 1).unwrap();
        let rep = op.inject(&mut st, &mut ev, 1).unwrap();
        assert_eq!((rep.evaluations, rep.replaced.len()), (1, 1));
        let rep = op.inject(&mut st, &mut ev, 0).unwrap();
        assert_eq!(rep.evaluations, 0);
        assert_eq!(ev.used(), 21);
    }

    #[test]
    fn near_total_replacement_still_terminates() {
        let f = ObjectiveFunction::plain(BaseFunction::Ackley, 4);
        let (mut ev, mut st) = setup(&f, 500);
        let cfg = HybridConfig { fraction: 0.95, ..HybridConfig::enabled() };
        let mut op = HybridOperator::new(cfg, 1).unwrap();
        while ev.remaining() > 0 {
            let r = ev.remaining();
            st.step(&mut ev, r).unwrap();
            let r = ev.remaining();
            op.inject(&mut st, &mut ev, r).unwrap();
        }
        assert_eq!(ev.used(), 500);
    }

    #[test]
    fn inject_is_shift_equivariant() {
        let f = ObjectiveFunction::plain(BaseFunction::Levy, 5);
        let g = wrap(Transformation::VShift { c: 6.0 }, &f).unwrap();
        let (mut ev_f, mut st_f) = setup(&f, 400);
        let (mut ev_g, mut st_g) = setup(&g, 400);
        let mut op_f = HybridOperator::new(HybridConfig::enabled(), 5).unwrap();
        let mut op_g = HybridOperator::new(HybridConfig::enabled(), 5).unwrap();
        for _ in 0..10 {
            let (rf, rg) = (ev_f.remaining(), ev_g.remaining());
            st_f.step(&mut ev_f, rf).unwrap();
            st_g.step(&mut ev_g, rg).unwrap();
            let (rf, rg) = (ev_f.remaining(), ev_g.remaining());
            op_f.inject(&mut st_f, &mut ev_f, rf).unwrap();
            op_g.inject(&mut st_g, &mut ev_g, rg).unwrap();
            assert_eq!(st_f.population().positions, st_g.population().positions);
        }
    }
}
