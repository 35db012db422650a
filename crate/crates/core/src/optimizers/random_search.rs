use std::any::Any;

use rand::Rng;

use super::{Algorithm, SearchState};
use crate::error::Result;
use crate::objective::Evaluator;

/// Per-slot random search: every generation each agent samples a fresh
/// uniform point and keeps it when it is no worse.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomSearch;

impl Algorithm for RandomSearch {
    fn name(&self) -> &str {
        "random_search"
    }

    fn generation(&mut self, state: &mut SearchState, evaluator: &mut Evaluator<'_>, remaining: u64) -> Result<u64> {
        let trials = (state.agents() as u64).min(remaining) as usize;
        let dim = state.dim();
        let bounds = state.bounds;
        for i in 0..trials {
            let x: Vec<f64> = (0..dim).map(|_| state.rng.random_range(bounds.lower..=bounds.upper)).collect();
            let f = evaluator.evaluate(&x)?;
            state.observe(&x, f);
            if f <= state.population.fitness[i] {
                state.population.positions[i] = x;
                state.population.fitness[i] = f;
            }
        }
        Ok(trials as u64)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
