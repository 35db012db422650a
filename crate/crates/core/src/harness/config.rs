use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid::HybridConfig;
use crate::optimizers::{AlgorithmId, DEFAULT_AGENTS};
use crate::suite::SUITE_SIZE;
use crate::transforms::TransformSpec;

/// One contender of the experiment: a base algorithm, optionally wrapped by
/// the hybrid operator, with parameter overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub id: AlgorithmId,
    /// `true`/`false` or a full operator configuration.
    #[serde(default, deserialize_with = "hybrid_or_flag")]
    pub hybrid: HybridConfig,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub overrides: serde_json::Value,
    /// Report label; defaults to the short name with an `h` prefix for
    /// hybrid variants (`SHADE`, `hSHADE`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl AlgorithmSpec {
    pub fn new(id: AlgorithmId, hybrid: bool) -> Self {
        let hybrid = if hybrid { HybridConfig::enabled() } else { HybridConfig::default() };
        AlgorithmSpec { id, hybrid, overrides: serde_json::Value::Null, label: None }
    }

    pub fn label(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None if self.hybrid.enabled => format!("h{}", self.id.label()),
            None => self.id.label().to_string(),
        }
    }
}

fn hybrid_or_flag<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<HybridConfig, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Form {
        Flag(bool),
        Full(HybridConfig),
    }
    Ok(match Form::deserialize(d)? {
        Form::Flag(true) => HybridConfig::enabled(),
        Form::Flag(false) => HybridConfig::default(),
        Form::Full(c) => c,
    })
}

fn default_agents() -> usize {
    DEFAULT_AGENTS
}

fn default_checkpoints() -> usize {
    100
}

/// Experiment grid as read from a JSON configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dims: Vec<usize>,
    pub budget_fes: u64,
    #[serde(default = "default_agents")]
    pub agents: usize,
    pub runs: u32,
    pub master_seed: u64,
    pub algorithms: Vec<AlgorithmSpec>,
    pub transformations: Vec<TransformSpec>,
    pub suite_seed: u64,
    #[serde(default = "default_checkpoints")]
    pub checkpoints: usize,
    /// Subset of suite function ids (all functions when absent).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<u32>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config: RunConfig = serde_json::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    /// Function ids covered by the grid, ascending.
    pub fn function_ids(&self) -> Vec<u32> {
        match &self.functions {
            Some(ids) => ids.iter().copied().collect::<BTreeSet<_>>().into_iter().collect(),
            None => (1..=SUITE_SIZE as u32).collect(),
        }
    }

    pub fn task_count(&self) -> usize {
        self.algorithms.len() * self.function_ids().len() * self.transformations.len() * self.dims.len() * self.runs as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.iter().any(|&d| d < 2) {
            return Err(Error::config("dims must be a non-empty list of dimensions >= 2"));
        }
        if self.dims.iter().collect::<BTreeSet<_>>().len() != self.dims.len() {
            return Err(Error::config("dims contains duplicates"));
        }
        if self.agents == 0 {
            return Err(Error::config("agents must be positive"));
        }
        if self.budget_fes < self.agents as u64 {
            return Err(Error::config(format!("budget_fes ({}) must be at least agents ({})", self.budget_fes, self.agents)));
        }
        if self.checkpoints < 2 {
            return Err(Error::config("checkpoints must be at least 2"));
        }
        if self.runs == 0 {
            return Err(Error::config("runs must be at least 1"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("no algorithms configured"));
        }
        let mut labels = BTreeSet::new();
        for a in &self.algorithms {
            let label = a.label();
            if label.is_empty() || !labels.insert(label.clone()) {
                return Err(Error::config(format!("algorithm label {label:?} is empty or duplicated")));
            }
            let algorithm = a.id.build(&a.overrides)?;
            if self.agents < algorithm.min_agents() {
                return Err(Error::config(format!("{label} needs at least {} agents", algorithm.min_agents())));
            }
            if a.hybrid.enabled {
                a.hybrid.replaced(self.agents)?;
            }
        }
        if self.transformations.is_empty() {
            return Err(Error::config("no transformations configured"));
        }
        let kinds: BTreeSet<_> = self.transformations.iter().map(|t| t.kind).collect();
        if kinds.len() != self.transformations.len() {
            return Err(Error::config("each transformation kind may appear only once"));
        }
        if let Some(ids) = &self.functions {
            if ids.is_empty() {
                return Err(Error::config("functions list is empty"));
            }
            if let Some(bad) = ids.iter().find(|&&i| i == 0 || i as usize > SUITE_SIZE) {
                return Err(Error::config(format!("function id {bad} is outside 1..={SUITE_SIZE}")));
            }
            if ids.iter().collect::<BTreeSet<_>>().len() != ids.len() {
                return Err(Error::config("functions contains duplicates"));
            }
        }
        Ok(())
    }
}
