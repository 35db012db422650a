use std::any::Any;
use std::f64::consts::LN_2;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{Algorithm, SearchState};
use crate::error::Result;
use crate::objective::Evaluator;
use crate::fitness::Fitness;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoSettings {
    /// Inertia weight.
    pub w: f64,
    /// Cognitive and social acceleration (shared).
    pub c: f64,
}

impl Default for PsoSettings {
    fn default() -> Self {
        PsoSettings { w: 1.0 / (2.0 * LN_2), c: 0.5 + LN_2 }
    }
}

/// SPSO-2011-style swarm.
///
/// Each particle is informed by itself and its two neighbours on a ring laid
/// over a random permutation of the swarm; the permutation is redrawn after
/// every generation that fails to improve the best-so-far value. The new
/// position is drawn uniformly from the hypersphere centred at
/// `G = x + c (u1 (p - x) + u2 (l - x)) / 3` (or `x + c u1 (p - x) / 2` when
/// the particle is its own best informant) with radius `|G - x|`, where
/// `u1, u2 ~ U(0, 1)` are scalars drawn per particle. Scalar weights and the
/// spherical draw keep the update independent of the coordinate axes.
/// Coordinates leaving the box are clamped and their velocity component set
/// to zero.
#[derive(Debug, Clone)]
pub struct Pso2011 {
    settings: PsoSettings,
    velocity: Vec<Vec<f64>>,
    personal_best: Vec<Vec<f64>>,
    personal_value: Vec<Fitness>,
    ring: Vec<usize>,
    slot_on_ring: Vec<usize>,
}

impl Pso2011 {
    pub fn new(settings: PsoSettings) -> Self {
        Pso2011 { settings, velocity: Vec::new(), personal_best: Vec::new(), personal_value: Vec::new(), ring: Vec::new(), slot_on_ring: Vec::new() }
    }

    pub fn personal_best_values(&self) -> &[Fitness] {
        &self.personal_value
    }

    pub fn velocities(&self) -> &[Vec<f64>] {
        &self.velocity
    }

    fn reshuffle(&mut self, rng: &mut impl Rng) {
        self.ring.shuffle(rng);
        for (slot, &p) in self.ring.iter().enumerate() {
            self.slot_on_ring[p] = slot;
        }
    }

    /// Best informant of particle `i` (itself, then previous and next on the
    /// ring; first strictly smaller personal best wins).
    fn best_informant(&self, i: usize) -> usize {
        let n = self.ring.len();
        let slot = self.slot_on_ring[i];
        let prev = self.ring[(slot + n - 1) % n];
        let next = self.ring[(slot + 1) % n];
        let mut best = i;
        for j in [prev, next] {
            if self.personal_value[j] < self.personal_value[best] {
                best = j;
            }
        }
        best
    }
}

impl Algorithm for Pso2011 {
    fn name(&self) -> &str {
        "pso2011"
    }

    fn min_agents(&self) -> usize {
        3
    }

    fn initialize(&mut self, state: &mut SearchState) {
        let b = state.bounds;
        self.velocity = state
            .population
            .positions
            .iter()
            .map(|x| x.iter().map(|&xi| state.rng.random_range((b.lower - xi)..=(b.upper - xi))).collect())
            .collect();
        self.personal_best = state.population.positions.clone();
        self.personal_value = state.population.fitness.clone();
        self.ring = (0..state.agents()).collect();
        self.slot_on_ring = vec![0; state.agents()];
        self.reshuffle(&mut state.rng);
    }

    fn generation(&mut self, state: &mut SearchState, evaluator: &mut Evaluator<'_>, remaining: u64) -> Result<u64> {
        let n = state.agents();
        let dim = state.dim();
        let trials = (n as u64).min(remaining) as usize;
        let best_before = state.best_value();
        let PsoSettings { w, c } = self.settings;
        for i in 0..trials {
            let l = self.best_informant(i);
            let x = &state.population.positions[i];
            let p = &self.personal_best[i];
            let u1: f64 = state.rng.random();
            let centre: Vec<f64> = if l == i {
                (0..dim).map(|j| x[j] + c * u1 * (p[j] - x[j]) / 2.0).collect()
            } else {
                let u2: f64 = state.rng.random();
                let lp = &self.personal_best[l];
                (0..dim).map(|j| x[j] + c * (u1 * (p[j] - x[j]) + u2 * (lp[j] - x[j])) / 3.0).collect()
            };
            let radius = centre.iter().zip(x).map(|(g, xi)| (g - xi).powi(2)).sum::<f64>().sqrt();
            let direction: Vec<f64> = (0..dim).map(|_| state.rng.sample::<f64, _>(StandardNormal)).collect();
            let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
            let u: f64 = state.rng.random();
            let reach = if norm > 0.0 { radius * u.powf(1.0 / dim as f64) / norm } else { 0.0 };

            let mut next = vec![0.0; dim];
            let v = &mut self.velocity[i];
            for j in 0..dim {
                let target = centre[j] + reach * direction[j];
                v[j] = w * v[j] + (target - x[j]);
                let moved = x[j] + v[j];
                next[j] = state.bounds.clamp(moved);
                if next[j] != moved {
                    v[j] = 0.0;
                }
            }
            let value = evaluator.evaluate(&next)?;
            state.observe(&next, value);
            if value < self.personal_value[i] {
                self.personal_value[i] = value;
                self.personal_best[i].copy_from_slice(&next);
            }
            state.population.positions[i] = next;
            state.population.fitness[i] = value;
        }
        if !(state.best_value() < best_before) {
            self.reshuffle(&mut state.rng);
        }
        Ok(trials as u64)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
