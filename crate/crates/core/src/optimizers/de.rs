use std::any::Any;

use serde::{Deserialize, Serialize};

use super::{binomial_crossover, distinct_indices, Algorithm, SearchState};
use crate::error::{Error, Result};
use crate::objective::Evaluator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeSettings {
    /// Differential weight.
    #[serde(rename = "F")]
    pub f: f64,
    /// Crossover rate.
    #[serde(rename = "CR")]
    pub cr: f64,
}

impl Default for DeSettings {
    fn default() -> Self {
        DeSettings { f: 0.5, cr: 0.9 }
    }
}

/// Canonical DE/rand/1/bin with synchronous greedy replacement.
#[derive(Debug, Clone)]
pub struct DeRand1Bin {
    settings: DeSettings,
}

impl DeRand1Bin {
    pub fn new(settings: DeSettings) -> Result<Self> {
        if !(settings.f > 0.0 && settings.f <= 2.0) || !(0.0..=1.0).contains(&settings.cr) {
            return Err(Error::config(format!("DE needs F in (0, 2] and CR in [0, 1], got {settings:?}")));
        }
        Ok(DeRand1Bin { settings })
    }
}

impl Algorithm for DeRand1Bin {
    fn name(&self) -> &str {
        "de_rand_1_bin"
    }

    fn min_agents(&self) -> usize {
        4
    }

    fn generation(&mut self, state: &mut SearchState, evaluator: &mut Evaluator<'_>, remaining: u64) -> Result<u64> {
        let n = state.agents();
        let trials = (n as u64).min(remaining) as usize;
        let mut accepted = Vec::new();
        for i in 0..trials {
            let r = distinct_indices(&mut state.rng, n, 3, &[i]);
            let pos = &state.population.positions;
            let mutant: Vec<f64> = (0..state.dim()).map(|j| pos[r[0]][j] + self.settings.f * (pos[r[1]][j] - pos[r[2]][j])).collect();
            let trial = binomial_crossover(&mut state.rng, &pos[i], &mutant, self.settings.cr, state.bounds);
            let f = evaluator.evaluate(&trial)?;
            state.observe(&trial, f);
            if f <= state.population.fitness[i] {
                accepted.push((i, trial, f));
            }
        }
        for (i, x, f) in accepted {
            state.population.positions[i] = x;
            state.population.fitness[i] = f;
        }
        Ok(trials as u64)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
