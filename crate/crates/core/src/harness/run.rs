use serde::{Deserialize, Serialize};

use super::config::AlgorithmSpec;
use crate::error::{Error, Result};
use crate::hybrid::HybridOperator;
use crate::objective::{checkpoint_schedule, Bounds, Evaluator, Objective};
use crate::optimizers::OptimizerState;
use crate::seed::SeedHasher;
use crate::suite::ObjectiveFunction;
use crate::transforms::{wrap, TransformKind, TransformSpec};

/// Seed of one run: SHA-256 over the domain tag `invbench/run` followed by
/// `master_seed` (u64), the algorithm key (string), the function id (u32),
/// the transformation label (string), the dimension (u32) and the run index
/// (u32), in the encoding documented in [`crate::seed`].
///
/// The algorithm enters by its key (`shade`, not `hSHADE`), so an algorithm
/// and its hybrid variant share seeds and start from the same population.
pub fn derive_seed(master_seed: u64, algorithm: &str, function: u32, transform: TransformKind, dim: usize, run: u32) -> u64 {
    SeedHasher::new("invbench/run")
        .u64(master_seed)
        .str(algorithm)
        .u32(function)
        .str(transform.label())
        .u32(dim as u32)
        .u32(run)
        .finish()
}

/// Everything needed to execute one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub algorithm: AlgorithmSpec,
    pub function: u32,
    pub transform: TransformSpec,
    pub dim: usize,
    pub run: u32,
    pub seed: u64,
    pub budget: u64,
    pub agents: usize,
    pub checkpoints: usize,
    /// Seeds rotation transformations that do not carry their own seed.
    pub master_seed: u64,
}

/// Where the evaluations of a run went.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accounting {
    pub init_evals: u64,
    pub step_evals: u64,
    pub inject_evals: u64,
    pub generations: u64,
    /// Agents the hybrid operator replaces per generation (0 without it).
    pub replaced_per_injection: u64,
    /// Injections that evaluated all `replaced_per_injection` candidates.
    pub full_injections: u64,
    /// Injections cut short by the budget (at most one, at the end).
    pub truncated_injections: u64,
    /// Generations that evaluated fewer than `agents` candidates.
    pub truncated_generations: u64,
}

impl Accounting {
    pub fn total(&self) -> u64 {
        self.init_evals + self.step_evals + self.inject_evals
    }
}

/// Result of one run, identified by its key tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub hybrid: bool,
    pub function: u32,
    pub transform: TransformKind,
    pub dim: usize,
    pub run: u32,
    pub seed: u64,
    /// Best-so-far error (best value minus the transformed optimum value)
    /// at each checkpoint.
    pub trajectory: Vec<f64>,
    /// Best-so-far raw objective value at each checkpoint.
    pub values: Vec<f64>,
    pub final_error: f64,
    pub final_value: f64,
    pub evaluations_used: u64,
    /// The transformed optimum lies outside the search box.
    pub out_of_reach: bool,
    /// The objective returned a non-finite value; the run stopped there.
    pub failed: bool,
    pub accounting: Accounting,
}

impl RunRecord {
    /// Sort key: algorithm, hybrid flag, function, transformation, dim, run.
    pub fn key(&self) -> (&str, bool, u32, TransformKind, usize, u32) {
        (&self.algorithm, self.hybrid, self.function, self.transform, self.dim, self.run)
    }

    /// `|`-separated flag list for the CSV `flags` column.
    pub fn flags(&self) -> String {
        let mut f = Vec::new();
        if self.failed {
            f.push("failed");
        }
        if self.out_of_reach {
            f.push("out_of_reach");
        }
        f.join("|")
    }
}

pub fn execute_run(task: &Task, function: &ObjectiveFunction) -> Result<RunRecord> {
    check_target(task, function)?;
    run_on(task, function, Target::of(function), false).map(|(r, _)| r)
}

/// [`execute_run`] that also returns every evaluated point in order.
pub fn execute_run_traced(task: &Task, function: &ObjectiveFunction) -> Result<(RunRecord, Vec<Vec<f64>>)> {
    check_target(task, function)?;
    run_on(task, function, Target::of(function), true).map(|(r, t)| (r, t.unwrap_or_default()))
}

fn check_target(task: &Task, function: &ObjectiveFunction) -> Result<()> {
    if function.id != task.function || function.dim != task.dim {
        return Err(Error::invalid(format!(
            "task targets f{} at dim {}, got f{} at dim {}",
            task.function, task.dim, function.id, function.dim
        )));
    }
    Ok(())
}

/// Box and known optimum of the untransformed objective.
pub(crate) struct Target<'a> {
    pub bounds: Bounds,
    pub location: &'a [f64],
    pub value: f64,
}

impl<'a> Target<'a> {
    fn of(f: &'a ObjectiveFunction) -> Self {
        Target { bounds: f.bounds, location: f.optimum_location(), value: f.optimum_value() }
    }
}

pub(crate) fn run_on<F: Objective>(task: &Task, function: &F, target: Target<'_>, traced: bool) -> Result<(RunRecord, Option<Vec<Vec<f64>>>)> {
    let transformation = task.transform.resolve(task.dim, task.function, task.master_seed)?;
    let optimum = transformation.optimum(target.location, target.value, target.bounds);
    let objective = wrap(transformation, function)?;
    let schedule = checkpoint_schedule(task.budget, task.checkpoints);
    let mut evaluator = Evaluator::new(&objective, task.budget).with_checkpoints(schedule.clone());
    if traced {
        evaluator = evaluator.with_trace();
    }
    let algorithm = task.algorithm.id.build(&task.algorithm.overrides)?;
    let mut operator = match task.algorithm.hybrid.enabled {
        true => Some(HybridOperator::new(task.algorithm.hybrid, task.seed)?),
        false => None,
    };
    let mut acc = Accounting {
        replaced_per_injection: match &operator {
            Some(op) => op.config().replaced(task.agents)? as u64,
            None => 0,
        },
        ..Accounting::default()
    };

    #[derive(Clone, Copy)]
    enum Phase {
        Init,
        Step,
        Inject,
    }
    let mut phase = Phase::Init;
    let mut failed = false;
    let outcome = (|| -> Result<()> {
        let mut state = OptimizerState::init_with(algorithm, target.bounds, task.dim, task.agents, task.seed, &mut evaluator)?;
        acc.init_evals = evaluator.used();
        while evaluator.remaining() > 0 {
            let remaining = evaluator.remaining();
            phase = Phase::Step;
            let used = state.step(&mut evaluator, remaining)?;
            acc.step_evals += used;
            acc.generations += 1;
            if used < task.agents as u64 {
                acc.truncated_generations += 1;
            }
            if let Some(op) = operator.as_mut() {
                let remaining = evaluator.remaining();
                if remaining > 0 {
                    phase = Phase::Inject;
                    let report = op.inject(&mut state, &mut evaluator, remaining)?;
                    acc.inject_evals += report.evaluations;
                    if report.evaluations == acc.replaced_per_injection {
                        acc.full_injections += 1;
                    } else {
                        acc.truncated_injections += 1;
                    }
                }
            }
        }
        Ok(())
    })();
    match outcome {
        Ok(()) => {}
        Err(Error::NonFiniteObjective { .. }) => failed = true,
        Err(e) => return Err(e),
    }
    // evaluations of an interrupted phase
    let unattributed = evaluator.used() - acc.total();
    match phase {
        Phase::Init => acc.init_evals += unattributed,
        Phase::Step => acc.step_evals += unattributed,
        Phase::Inject => acc.inject_evals += unattributed,
    }

    let best = evaluator.best_value();
    let mut trajectory: Vec<f64> = evaluator.samples().iter().map(|s| s.diff(optimum.exact)).collect();
    let mut values: Vec<f64> = evaluator.samples().iter().map(|s| s.value()).collect();
    let (final_error, final_value) = if best.is_finite() { (best.diff(optimum.exact), best.value()) } else { (f64::NAN, f64::NAN) };
    // a failed run keeps its best-so-far for the checkpoints it never reached
    trajectory.resize(schedule.len(), final_error);
    values.resize(schedule.len(), final_value);
    let record = RunRecord {
        algorithm: task.algorithm.label(),
        hybrid: task.algorithm.hybrid.enabled,
        function: task.function,
        transform: task.transform.kind,
        dim: task.dim,
        run: task.run,
        seed: task.seed,
        trajectory,
        values,
        final_error,
        final_value,
        evaluations_used: evaluator.used(),
        out_of_reach: optimum.out_of_bounds,
        failed,
        accounting: acc,
    };
    let trace = evaluator.into_trace();
    Ok((record, trace))
}
