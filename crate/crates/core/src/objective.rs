//! Objective contract shared by the suite, the transformation wrappers and
//! the optimizers, plus the budget-metered evaluator the harness hands to
//! every run.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitness::Fitness;

/// A bounded single-objective minimization target.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    /// Raw objective value. Callers are expected to pass `dim()` finite
    /// coordinates; [`Evaluator`] checks this before calling.
    fn value(&self, x: &[f64]) -> f64;

    /// Value in the exact representation the optimizers work with. Wrappers
    /// that add constants override this so the offset is not rounded.
    fn fitness(&self, x: &[f64]) -> Fitness {
        Fitness::new(self.value(x))
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }

    fn fitness(&self, x: &[f64]) -> Fitness {
        (**self).fitness(x)
    }
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }

    fn fitness(&self, x: &[f64]) -> Fitness {
        (**self).fitness(x)
    }
}

/// Per-coordinate box bounds, identical for every coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    /// The `[-100, 100]` hypercube used for every experiment.
    pub const STANDARD: Bounds = Bounds { lower: -100.0, upper: 100.0 };

    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::invalid(format!("bounds [{lower}, {upper}] are not a finite interval")));
        }
        Ok(Bounds { lower, upper })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.lower, self.upper)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().all(|&v| v >= self.lower && v <= self.upper)
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::STANDARD
    }
}

pub(crate) fn check_point(x: &[f64], dim: usize) -> Result<()> {
    if x.len() != dim {
        return Err(Error::invalid(format!("point has {} coordinates, objective expects {dim}", x.len())));
    }
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("coordinate {i} is not finite ({})", x[i])));
    }
    Ok(())
}

/// Evaluation checkpoints: `checkpoints` evenly spaced evaluation counts
/// ending exactly at `budget` (the k-th is `ceil(k * budget / checkpoints)`).
pub fn checkpoint_schedule(budget: u64, checkpoints: usize) -> Vec<u64> {
    let n = checkpoints as u128;
    let b = budget as u128;
    let mut out: Vec<u64> = (1..=n).map(|k| ((k * b).div_ceil(n)) as u64).collect();
    out.dedup();
    out
}

/// Budget-metered view of an objective.
///
/// Every call to [`Evaluator::evaluate`] counts exactly one function
/// evaluation. The evaluator also keeps the best raw value seen so far,
/// samples it at the configured checkpoints, and can optionally record every
/// evaluated point.
pub struct Evaluator<'a> {
    objective: &'a dyn Objective,
    budget: u64,
    used: u64,
    best_value: Fitness,
    schedule: Vec<u64>,
    next_checkpoint: usize,
    samples: Vec<Fitness>,
    trace: Option<Vec<Vec<f64>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(objective: &'a dyn Objective, budget: u64) -> Self {
        Evaluator {
            objective,
            budget,
            used: 0,
            best_value: Fitness::INFINITY,
            schedule: Vec::new(),
            next_checkpoint: 0,
            samples: Vec::new(),
            trace: None,
        }
    }

    /// Samples the best-so-far value whenever the evaluation count reaches
    /// one of `schedule`'s entries (which must be increasing).
    pub fn with_checkpoints(mut self, schedule: Vec<u64>) -> Self {
        self.schedule = schedule;
        self
    }

    /// Records every evaluated point in order.
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.budget - self.used
    }

    /// Best raw objective value evaluated so far (`+inf` before the first).
    pub fn best_value(&self) -> Fitness {
        self.best_value
    }

    /// Best-so-far value at each checkpoint reached so far.
    pub fn samples(&self) -> &[Fitness] {
        &self.samples
    }

    pub fn schedule(&self) -> &[u64] {
        &self.schedule
    }

    pub fn trace(&self) -> Option<&[Vec<f64>]> {
        self.trace.as_deref()
    }

    pub fn into_trace(self) -> Option<Vec<Vec<f64>>> {
        self.trace
    }

    pub fn evaluate(&mut self, x: &[f64]) -> Result<Fitness> {
        if self.used >= self.budget {
            return Err(Error::BudgetExhausted);
        }
        check_point(x, self.objective.dim())?;
        let value = self.objective.fitness(x);
        self.used += 1;
        if let Some(trace) = self.trace.as_mut() {
            trace.push(x.to_vec());
        }
        if !value.is_finite() {
            return Err(Error::NonFiniteObjective { evaluation: self.used });
        }
        if value < self.best_value {
            self.best_value = value;
        }
        while self.next_checkpoint < self.schedule.len() && self.schedule[self.next_checkpoint] <= self.used {
            self.samples.push(self.best_value);
            self.next_checkpoint += 1;
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Sum(usize);

    impl Objective for Sum {
        fn dim(&self) -> usize {
            self.0
        }

        fn value(&self, x: &[f64]) -> f64 {
            x.iter().sum()
        }
    }

    #[test]
    fn schedule_is_even_and_ends_at_budget() {
        assert_eq!(checkpoint_schedule(1000, 4), vec![250, 500, 750, 1000]);
        let s = checkpoint_schedule(1001, 100);
        assert_eq!(s.len(), 100);
        assert_eq!(*s.last().unwrap(), 1001);
        assert_eq!(checkpoint_schedule(3, 10), vec![1, 2, 3]);
    }

    #[test]
    fn evaluator_counts_and_refuses_past_budget() {
        let f = Sum(2);
        let mut ev = Evaluator::new(&f, 3).with_checkpoints(vec![2, 3]).with_trace();
        assert_eq!(ev.evaluate(&[1.0, 2.0]).unwrap().value(), 3.0);
        ev.evaluate(&[5.0, 5.0]).unwrap();
        ev.evaluate(&[0.0, 1.0]).unwrap();
        assert_eq!(ev.used(), 3);
        assert_eq!(ev.samples(), &[Fitness::new(3.0), Fitness::new(1.0)]);
        assert!(matches!(ev.evaluate(&[0.0, 0.0]), Err(Error::BudgetExhausted)));
        assert_eq!(ev.trace().unwrap().len(), 3);
    }

    #[test]
    fn evaluator_rejects_bad_points_without_counting() {
        let f = Sum(2);
        let mut ev = Evaluator::new(&f, 10);
        assert!(ev.evaluate(&[1.0]).is_err());
        assert!(ev.evaluate(&[f64::NAN, 0.0]).is_err());
        assert_eq!(ev.used(), 0);
    }
}
