use std::any::Any;
use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{binomial_crossover, Algorithm, SearchState};
use crate::error::{Error, Result};
use crate::objective::Evaluator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShadeSettings {
    /// Number of success-history slots `H`.
    pub memory_size: usize,
    /// Fraction of the population eligible as p-best.
    pub p_best: f64,
    /// Archive capacity as a multiple of the population size.
    pub archive_rate: f64,
}

impl Default for ShadeSettings {
    fn default() -> Self {
        ShadeSettings { memory_size: 20, p_best: 0.11, archive_rate: 1.0 }
    }
}

/// Success-history based adaptive DE with current-to-pbest/1 mutation,
/// binomial crossover and an external archive of replaced parents.
#[derive(Debug, Clone)]
pub struct Shade {
    settings: ShadeSettings,
    memory_f: Vec<f64>,
    memory_cr: Vec<f64>,
    slot: usize,
    archive: Vec<Vec<f64>>,
    archive_capacity: usize,
}

struct Success {
    f: f64,
    cr: f64,
    improvement: f64,
}

impl Shade {
    pub fn new(settings: ShadeSettings) -> Result<Self> {
        if settings.memory_size == 0 || !(settings.p_best > 0.0 && settings.p_best <= 1.0) || !(settings.archive_rate >= 0.0) {
            return Err(Error::config(format!("invalid SHADE settings {settings:?}")));
        }
        Ok(Shade {
            settings,
            memory_f: vec![0.5; settings.memory_size],
            memory_cr: vec![0.5; settings.memory_size],
            slot: 0,
            archive: Vec::new(),
            archive_capacity: 0,
        })
    }

    /// Success-history scale factors `M_F`.
    pub fn memory_f(&self) -> &[f64] {
        &self.memory_f
    }

    /// Success-history crossover rates `M_CR`.
    pub fn memory_cr(&self) -> &[f64] {
        &self.memory_cr
    }

    pub fn archive(&self) -> &[Vec<f64>] {
        &self.archive
    }

    pub fn archive_capacity(&self) -> usize {
        self.archive_capacity
    }

    fn sample_f(&self, rng: &mut impl Rng, slot: usize) -> f64 {
        // Cauchy(M_F, 0.1), redrawn while non-positive, truncated at 1
        loop {
            let u: f64 = rng.random();
            let f = self.memory_f[slot] + 0.1 * (PI * (u - 0.5)).tan();
            if f > 0.0 {
                return f.min(1.0);
            }
        }
    }

    fn sample_cr(&self, rng: &mut impl Rng, slot: usize) -> f64 {
        let normal = Normal::new(self.memory_cr[slot], 0.1).expect("sigma is positive");
        normal.sample(rng).clamp(0.0, 1.0)
    }

    fn update_memory(&mut self, successes: &[Success]) {
        if successes.is_empty() {
            return;
        }
        let total: f64 = successes.iter().map(|s| s.improvement).sum();
        let (mut num_f, mut den_f, mut mean_cr) = (0.0, 0.0, 0.0);
        for s in successes {
            let w = if total > 0.0 { s.improvement / total } else { 1.0 / successes.len() as f64 };
            num_f += w * s.f * s.f;
            den_f += w * s.f;
            mean_cr += w * s.cr;
        }
        if den_f > 0.0 {
            self.memory_f[self.slot] = (num_f / den_f).clamp(f64::MIN_POSITIVE, 1.0);
        }
        self.memory_cr[self.slot] = mean_cr.clamp(0.0, 1.0);
        self.slot = (self.slot + 1) % self.settings.memory_size;
    }

    fn archive_parent(&mut self, rng: &mut impl Rng, parent: Vec<f64>) {
        if self.archive_capacity == 0 {
            return;
        }
        if self.archive.len() < self.archive_capacity {
            self.archive.push(parent);
        } else {
            let k = rng.random_range(0..self.archive.len());
            self.archive[k] = parent;
        }
    }
}

impl Algorithm for Shade {
    fn name(&self) -> &str {
        "shade"
    }

    fn min_agents(&self) -> usize {
        4
    }

    fn initialize(&mut self, state: &mut SearchState) {
        self.archive_capacity = (self.settings.archive_rate * state.agents() as f64).round() as usize;
    }

    fn generation(&mut self, state: &mut SearchState, evaluator: &mut Evaluator<'_>, remaining: u64) -> Result<u64> {
        let n = state.agents();
        let dim = state.dim();
        let trials = (n as u64).min(remaining) as usize;
        let order = state.population.order();
        let p_count = ((self.settings.p_best * n as f64).round() as usize).clamp(2, n);
        let pool = n + self.archive.len();

        let mut accepted = Vec::new();
        let mut successes = Vec::new();
        for i in 0..trials {
            let slot = state.rng.random_range(0..self.settings.memory_size);
            let cr = self.sample_cr(&mut state.rng, slot);
            let f = self.sample_f(&mut state.rng, slot);
            let pbest = order[state.rng.random_range(0..p_count)];
            let r1 = loop {
                let r = state.rng.random_range(0..n);
                if r != i {
                    break r;
                }
            };
            let r2 = loop {
                let r = state.rng.random_range(0..pool);
                if r != i && r != r1 {
                    break r;
                }
            };
            let pos = &state.population.positions;
            let x2 = if r2 < n { &pos[r2] } else { &self.archive[r2 - n] };
            let xi = &pos[i];
            let mutant: Vec<f64> = (0..dim).map(|j| xi[j] + f * (pos[pbest][j] - xi[j]) + f * (pos[r1][j] - x2[j])).collect();
            let trial = binomial_crossover(&mut state.rng, xi, &mutant, cr, state.bounds);
            let value = evaluator.evaluate(&trial)?;
            state.observe(&trial, value);
            let parent = state.population.fitness[i];
            if value < parent {
                successes.push(Success { f, cr, improvement: parent.diff(value) });
                accepted.push((i, trial, value, true));
            } else if value == parent {
                accepted.push((i, trial, value, false));
            }
        }
        for (i, x, value, improved) in accepted {
            if improved {
                let parent = std::mem::replace(&mut state.population.positions[i], x);
                self.archive_parent(&mut state.rng, parent);
            } else {
                state.population.positions[i] = x;
            }
            state.population.fitness[i] = value;
        }
        self.update_memory(&successes);
        Ok(trials as u64)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
