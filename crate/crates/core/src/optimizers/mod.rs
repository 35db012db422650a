//! Population-based optimizers advanced one generation at a time under an
//! evaluation budget.
//!
//! An optimizer is split in two parts. [`SearchState`] holds what every
//! population method shares (box, population, best-so-far, random stream)
//! and is what external operators such as the hybrid replacement operator
//! act on. The [`Algorithm`] object owns the method-specific adaptation
//! memory (SHADE's success history and archive, PSO's velocities and
//! personal bests) and is never touched from outside.
//!
//! All built-in algorithms select by comparing objective values and use only
//! differences of values otherwise. Values are held as [`Fitness`], whose
//! comparisons and differences are exact under a constant offset, so adding
//! a constant to the objective leaves the sequence of evaluated points
//! bitwise unchanged.

mod de;
mod pso;
mod random_search;
mod shade;

pub use de::{DeRand1Bin, DeSettings};
pub use pso::{Pso2011, PsoSettings};
pub use random_search::RandomSearch;
pub use shade::{Shade, ShadeSettings};

use std::any::Any;
use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitness::Fitness;
use crate::objective::{Bounds, Evaluator};
use crate::seed::rng_from_seed;

/// Population size used throughout the experiments.
pub const DEFAULT_AGENTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmId {
    RandomSearch,
    #[serde(rename = "de_rand_1_bin")]
    DeRand1Bin,
    Shade,
    #[serde(rename = "pso2011")]
    Pso2011,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 4] = [AlgorithmId::RandomSearch, AlgorithmId::DeRand1Bin, AlgorithmId::Shade, AlgorithmId::Pso2011];

    /// Short label used in reports (`h` is prefixed for hybrid variants).
    pub fn label(self) -> &'static str {
        match self {
            AlgorithmId::RandomSearch => "RS",
            AlgorithmId::DeRand1Bin => "DE",
            AlgorithmId::Shade => "SHADE",
            AlgorithmId::Pso2011 => "PSO",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            AlgorithmId::RandomSearch => "random_search",
            AlgorithmId::DeRand1Bin => "de_rand_1_bin",
            AlgorithmId::Shade => "shade",
            AlgorithmId::Pso2011 => "pso2011",
        }
    }

    /// Instantiates the algorithm, applying JSON parameter overrides
    /// (`null` or `{}` keeps the defaults).
    pub fn build(self, overrides: &serde_json::Value) -> Result<Box<dyn Algorithm>> {
        fn settings<T: serde::de::DeserializeOwned + Default>(v: &serde_json::Value) -> Result<T> {
            if v.is_null() {
                return Ok(T::default());
            }
            serde_json::from_value(v.clone()).map_err(|e| Error::config(format!("bad parameter override: {e}")))
        }
        Ok(match self {
            AlgorithmId::RandomSearch => {
                if !(overrides.is_null() || overrides.as_object().is_some_and(|o| o.is_empty())) {
                    return Err(Error::config("random_search takes no parameters"));
                }
                Box::new(RandomSearch)
            }
            AlgorithmId::DeRand1Bin => Box::new(DeRand1Bin::new(settings(overrides)?)?),
            AlgorithmId::Shade => Box::new(Shade::new(settings(overrides)?)?),
            AlgorithmId::Pso2011 => Box::new(Pso2011::new(settings(overrides)?)),
        })
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Positions and objective values of the current agents.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub positions: Vec<Vec<f64>>,
    pub fitness: Vec<Fitness>,
}

impl Population {
    pub fn agents(&self) -> usize {
        self.positions.len()
    }

    pub fn dim(&self) -> usize {
        self.positions.first().map_or(0, Vec::len)
    }

    /// Index of the smallest fitness (first on ties).
    pub fn argmin(&self) -> usize {
        let mut best = 0;
        for (i, &f) in self.fitness.iter().enumerate() {
            if f < self.fitness[best] {
                best = i;
            }
        }
        best
    }

    /// Indices sorted by ascending fitness, ties by index.
    pub fn order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.agents()).collect();
        idx.sort_by(|&a, &b| self.fitness[a].total_cmp(&self.fitness[b]).then(a.cmp(&b)));
        idx
    }
}

/// State shared by every population method.
#[derive(Debug, Clone)]
pub struct SearchState {
    pub bounds: Bounds,
    pub population: Population,
    pub rng: ChaCha8Rng,
    best_position: Vec<f64>,
    best_value: Fitness,
    generation: u64,
}

impl SearchState {
    /// Samples `agents` uniform points in `bounds` and evaluates them.
    fn initialize(bounds: Bounds, dim: usize, agents: usize, seed: u64, evaluator: &mut Evaluator<'_>) -> Result<Self> {
        let mut rng = rng_from_seed(seed);
        let mut positions = Vec::with_capacity(agents);
        for _ in 0..agents {
            positions.push((0..dim).map(|_| rng.random_range(bounds.lower..=bounds.upper)).collect::<Vec<f64>>());
        }
        let mut state = SearchState {
            bounds,
            population: Population { positions: Vec::new(), fitness: Vec::new() },
            rng,
            best_position: Vec::new(),
            best_value: Fitness::INFINITY,
            generation: 0,
        };
        let mut fitness = Vec::with_capacity(agents);
        for x in &positions {
            let f = evaluator.evaluate(x)?;
            state.observe(x, f);
            fitness.push(f);
        }
        state.population = Population { positions, fitness };
        Ok(state)
    }

    /// Offers an evaluated point to the best-so-far record; returns whether
    /// it became the new best (strictly smaller value).
    pub fn observe(&mut self, x: &[f64], value: Fitness) -> bool {
        if value < self.best_value {
            self.best_value = value;
            self.best_position.clear();
            self.best_position.extend_from_slice(x);
            true
        } else {
            false
        }
    }

    pub fn best(&self) -> (&[f64], Fitness) {
        (&self.best_position, self.best_value)
    }

    pub fn best_value(&self) -> Fitness {
        self.best_value
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn dim(&self) -> usize {
        self.population.dim()
    }

    pub fn agents(&self) -> usize {
        self.population.agents()
    }

    /// Clamps every coordinate of `x` into the box.
    pub fn clamp(&self, x: &mut [f64]) {
        for v in x {
            *v = self.bounds.clamp(*v);
        }
    }
}

/// A pluggable population method.
///
/// `generation` must evaluate at most `min(agents, remaining)` candidates
/// through `evaluator`, offer each evaluated point to
/// [`SearchState::observe`], and keep `population.fitness` coherent with
/// `population.positions`.
pub trait Algorithm: Send + fmt::Debug {
    fn name(&self) -> &str;

    /// Smallest population the update rule supports.
    fn min_agents(&self) -> usize {
        1
    }

    /// Called once after the initial population has been evaluated.
    fn initialize(&mut self, _state: &mut SearchState) {}

    /// Advances one generation; returns the evaluations consumed.
    fn generation(&mut self, state: &mut SearchState, evaluator: &mut Evaluator<'_>, remaining: u64) -> Result<u64>;

    fn as_any(&self) -> &dyn Any;
}

/// A running optimizer: shared search state plus the algorithm (and its
/// private memory).
#[derive(Debug)]
pub struct OptimizerState {
    search: SearchState,
    algorithm: Box<dyn Algorithm>,
}

impl OptimizerState {
    /// Initializes a built-in algorithm with default parameters.
    pub fn init(id: AlgorithmId, bounds: Bounds, dim: usize, agents: usize, seed: u64, evaluator: &mut Evaluator<'_>) -> Result<Self> {
        Self::init_with(id.build(&serde_json::Value::Null)?, bounds, dim, agents, seed, evaluator)
    }

    /// Initializes any [`Algorithm`]. Consumes `agents` evaluations.
    pub fn init_with(mut algorithm: Box<dyn Algorithm>, bounds: Bounds, dim: usize, agents: usize, seed: u64, evaluator: &mut Evaluator<'_>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::config("dimension must be at least 1"));
        }
        if dim != evaluator.dim() {
            return Err(Error::config(format!("optimizer dimension {dim} does not match objective dimension {}", evaluator.dim())));
        }
        if agents < algorithm.min_agents() {
            return Err(Error::config(format!("{} needs at least {} agents, got {agents}", algorithm.name(), algorithm.min_agents())));
        }
        if evaluator.remaining() < agents as u64 {
            return Err(Error::BudgetExhausted);
        }
        let mut search = SearchState::initialize(bounds, dim, agents, seed, evaluator)?;
        algorithm.initialize(&mut search);
        Ok(OptimizerState { search, algorithm })
    }

    /// Advances one generation, evaluating at most
    /// `min(agents, remaining_budget)` candidates.
    pub fn step(&mut self, evaluator: &mut Evaluator<'_>, remaining_budget: u64) -> Result<u64> {
        if remaining_budget == 0 {
            return Err(Error::BudgetExhausted);
        }
        let remaining = remaining_budget.min(evaluator.remaining());
        if remaining == 0 {
            return Err(Error::BudgetExhausted);
        }
        let used = self.algorithm.generation(&mut self.search, evaluator, remaining)?;
        self.search.generation += 1;
        Ok(used)
    }

    /// Best-so-far `(position, value)`.
    pub fn best(&self) -> (&[f64], Fitness) {
        self.search.best()
    }

    pub fn population(&self) -> &Population {
        &self.search.population
    }

    pub fn search(&self) -> &SearchState {
        &self.search
    }

    /// Mutable access to the shared state for population-level operators.
    pub fn search_mut(&mut self) -> &mut SearchState {
        &mut self.search
    }

    pub fn algorithm(&self) -> &dyn Algorithm {
        self.algorithm.as_ref()
    }
}

/// Draws `count` distinct indices from `0..n`, all different from the
/// `exclude` list.
pub(crate) fn distinct_indices(rng: &mut ChaCha8Rng, n: usize, count: usize, exclude: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(count);
    while out.len() < count {
        let r = rng.random_range(0..n);
        if !exclude.contains(&r) && !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// Binomial crossover of `mutant` into `target` followed by clamping.
pub(crate) fn binomial_crossover(rng: &mut ChaCha8Rng, target: &[f64], mutant: &[f64], cr: f64, bounds: Bounds) -> Vec<f64> {
    let dim = target.len();
    let forced = rng.random_range(0..dim);
    (0..dim)
        .map(|j| {
            let take = rng.random::<f64>() < cr || j == forced;
            bounds.clamp(if take { mutant[j] } else { target[j] })
        })
        .collect()
}

#[cfg(test)]
mod tests;
