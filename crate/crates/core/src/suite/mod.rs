//! Seeded suite of shifted and rotated test functions in four categories:
//! 3 unimodal, 7 basic multimodal, 10 hybrid and 9 composition functions.
//!
//! Every function has the form `g((x - shift) R) + bias` where `g` is a base
//! formula, a block-wise hybrid of base formulas, or a composition of three
//! offset base formulas. `g` has its global minimum 0 at the origin, so the
//! optimum of function `i` is at `shift` with value `bias = 100 i`.

mod base;

pub use base::BaseFunction;

use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{check_point, Bounds, Objective};
use crate::seed::{rng_from_seed, SeedHasher};
use crate::transforms::{random_rotation, Orthonormal};

/// Number of functions in a default suite.
pub const SUITE_SIZE: usize = 29;

/// Shift components are drawn from `[-SHIFT_RANGE, SHIFT_RANGE]`.
pub const SHIFT_RANGE: f64 = 80.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Unimodal,
    Multimodal,
    Hybrid,
    Composition,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Unimodal => "unimodal",
            Category::Multimodal => "multimodal",
            Category::Hybrid => "hybrid",
            Category::Composition => "composition",
        })
    }
}

/// One block of a hybrid function.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridBlock {
    pub base: BaseFunction,
    pub start: usize,
    pub len: usize,
}

/// One term of a composition function, positioned at `offset` in rotated
/// coordinates (the first component always sits at the origin).
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub base: BaseFunction,
    pub offset: Vec<f64>,
    pub sigma: f64,
    pub lambda: f64,
    pub bias: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Landscape {
    Base(BaseFunction),
    Hybrid(Vec<HybridBlock>),
    Composition(Vec<Component>),
}

impl Landscape {
    fn eval(&self, z: &[f64]) -> f64 {
        match self {
            Landscape::Base(b) => b.eval(z),
            Landscape::Hybrid(blocks) => blocks.iter().map(|b| b.base.eval(&z[b.start..b.start + b.len])).sum(),
            Landscape::Composition(parts) => composition_value(parts, z),
        }
    }

    /// Short formula description used in the manifest.
    pub fn describe(&self) -> String {
        match self {
            Landscape::Base(b) => b.name().to_string(),
            Landscape::Hybrid(blocks) => {
                let names: Vec<_> = blocks.iter().map(|b| b.base.name()).collect();
                format!("hybrid({})", names.join("+"))
            }
            Landscape::Composition(parts) => {
                let names: Vec<_> = parts.iter().map(|c| c.base.name()).collect();
                format!("composition({})", names.join("+"))
            }
        }
    }
}

/// Inverse-distance Gaussian weights: `w_i = exp(-d^2 / (2 n sigma^2)) / d`,
/// normalized to sum 1. A component at distance exactly 0 takes all weight,
/// which makes the value at the first component's centre exactly its bias.
fn composition_value(parts: &[Component], z: &[f64]) -> f64 {
    let n = z.len() as f64;
    let mut weights = Vec::with_capacity(parts.len());
    let mut values = Vec::with_capacity(parts.len());
    let mut local = vec![0.0; z.len()];
    let mut exact = None;
    for (i, c) in parts.iter().enumerate() {
        for ((l, zi), oi) in local.iter_mut().zip(z).zip(&c.offset) {
            *l = zi - oi;
        }
        let d2: f64 = local.iter().map(|v| v * v).sum();
        values.push(c.lambda * c.base.eval(&local) + c.bias);
        if d2 == 0.0 {
            exact.get_or_insert(i);
            weights.push(0.0);
        } else {
            weights.push((-d2 / (2.0 * n * c.sigma * c.sigma)).exp() / d2.sqrt());
        }
    }
    if let Some(i) = exact {
        return values[i];
    }
    let total: f64 = weights.iter().sum();
    if total == 0.0 || !total.is_finite() {
        return values.iter().sum::<f64>() / values.len() as f64;
    }
    weights.iter().zip(&values).map(|(w, v)| w / total * v).sum()
}

/// A bounded test function of the suite.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveFunction {
    pub id: u32,
    pub category: Category,
    pub dim: usize,
    pub bounds: Bounds,
    pub shift: Vec<f64>,
    pub rotation: Orthonormal,
    pub bias: f64,
    pub landscape: Landscape,
}

impl ObjectiveFunction {
    /// Builds a function from explicit parts (used for tests and custom suites).
    pub fn new(id: u32, category: Category, landscape: Landscape, shift: Vec<f64>, rotation: Orthonormal, bias: f64) -> Result<Self> {
        let dim = shift.len();
        if rotation.dim() != dim {
            return Err(Error::invalid(format!("rotation is {}x{0}, shift has {dim} entries", rotation.dim())));
        }
        Ok(ObjectiveFunction { id, category, dim, bounds: Bounds::STANDARD, shift, rotation, bias, landscape })
    }

    /// Unshifted, unrotated, zero-bias function over a single base formula.
    pub fn plain(base: BaseFunction, dim: usize) -> Self {
        ObjectiveFunction {
            id: 0,
            category: Category::Unimodal,
            dim,
            bounds: Bounds::STANDARD,
            shift: vec![0.0; dim],
            rotation: Orthonormal::identity(dim),
            bias: 0.0,
            landscape: Landscape::Base(base),
        }
    }

    /// Checked evaluation.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        check_point(x, self.dim)?;
        Ok(self.value(x))
    }

    /// Known optimum value (the bias).
    pub fn optimum_value(&self) -> f64 {
        self.bias
    }

    pub fn optimum_location(&self) -> &[f64] {
        &self.shift
    }

    pub fn name(&self) -> String {
        self.landscape.describe()
    }
}

impl Objective for ObjectiveFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        let centred: Vec<f64> = x.iter().zip(&self.shift).map(|(v, s)| v - s).collect();
        let z = self.rotation.apply(&centred);
        self.landscape.eval(&z) + self.bias
    }
}

/// A generated suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub seed: u64,
    pub dim: usize,
    pub functions: Vec<ObjectiveFunction>,
}

impl Suite {
    pub fn get(&self, id: u32) -> Option<&ObjectiveFunction> {
        self.functions.iter().find(|f| f.id == id)
    }

    pub fn category_counts(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for f in &self.functions {
            c[f.category as usize] += 1;
        }
        c
    }

    pub fn manifest(&self) -> SuiteManifest {
        SuiteManifest {
            seed: self.seed,
            dim: self.dim,
            functions: self
                .functions
                .iter()
                .map(|f| ManifestEntry { id: f.id, category: f.category, base: f.name(), bias: f.bias, seed: self.seed })
                .collect(),
        }
    }

    pub fn write_manifest(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.manifest()).expect("manifest serializes");
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }
}

/// JSON manifest of a suite. Shifts and rotations are not serialized; they
/// are reproduced from `(seed, dim)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteManifest {
    pub seed: u64,
    pub dim: usize,
    pub functions: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: u32,
    pub category: Category,
    pub base: String,
    pub bias: f64,
    pub seed: u64,
}

use BaseFunction::*;

const HYBRIDS: [(&[BaseFunction], &[f64]); 10] = [
    (&[Zakharov, Rosenbrock, Rastrigin], &[0.2, 0.4, 0.4]),
    (&[BentCigar, Schwefel], &[0.3, 0.7]),
    (&[BentCigar, Rosenbrock, Levy], &[0.3, 0.3, 0.4]),
    (&[Sphere, Ackley, WeierstrassLite], &[0.2, 0.2, 0.6]),
    (&[BentCigar, Rastrigin], &[0.5, 0.5]),
    (&[Schwefel, Rastrigin, Levy], &[0.2, 0.4, 0.4]),
    (&[Ackley, Griewank], &[0.4, 0.6]),
    (&[Zakharov, Schwefel, Ackley], &[0.3, 0.3, 0.4]),
    (&[Griewank, WeierstrassLite, Rosenbrock], &[0.2, 0.3, 0.5]),
    (&[Levy, Sphere], &[0.5, 0.5]),
];

const COMPOSITIONS: [[BaseFunction; 3]; 9] = [
    [Rosenbrock, BentCigar, Rastrigin],
    [Rastrigin, Griewank, Schwefel],
    [Rosenbrock, Ackley, Schwefel],
    [Ackley, Levy, Griewank],
    [Rastrigin, Levy, Sphere],
    [Schwefel, WeierstrassLite, Rosenbrock],
    [Griewank, Ackley, Zakharov],
    [Levy, Rastrigin, BentCigar],
    [WeierstrassLite, Sphere, Schwefel],
];

const COMPOSITION_SIGMA: [f64; 3] = [10.0, 20.0, 30.0];
const COMPOSITION_BIAS: [f64; 3] = [0.0, 100.0, 200.0];

fn lambda_for(base: BaseFunction) -> f64 {
    match base {
        BentCigar | Zakharov => 1e-6,
        _ => 1.0,
    }
}

/// Splits `dim` coordinates into contiguous blocks following `proportions`.
/// When `dim` is smaller than the number of blocks, only the first `dim`
/// blocks are kept. Every block has at least one coordinate.
fn block_sizes(dim: usize, proportions: &[f64]) -> Vec<usize> {
    let k = proportions.len().min(dim);
    let total: f64 = proportions[..k].iter().sum();
    let mut sizes = Vec::with_capacity(k);
    let mut used = 0;
    for (i, p) in proportions[..k - 1].iter().enumerate() {
        let left_for_rest = k - i - 1;
        let s = ((p / total) * dim as f64).round() as usize;
        let s = s.clamp(1, dim - used - left_for_rest);
        sizes.push(s);
        used += s;
    }
    sizes.push(dim - used);
    sizes
}

fn function_seed(seed: u64, dim: usize, id: u32, purpose: &str) -> u64 {
    SeedHasher::new("invbench/suite").u64(seed).u32(dim as u32).u32(id).str(purpose).finish()
}

fn uniform_vector(seed: u64, dim: usize) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    (0..dim).map(|_| rng.random_range(-SHIFT_RANGE..=SHIFT_RANGE)).collect()
}

/// Deterministic suite of 29 functions for `(seed, dim)`.
pub fn make_suite(seed: u64, dim: usize) -> Result<Suite> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    let mut plan: Vec<(Category, Landscape)> = Vec::with_capacity(SUITE_SIZE);
    plan.extend(BaseFunction::UNIMODAL.iter().map(|&b| (Category::Unimodal, Landscape::Base(b))));
    plan.extend(BaseFunction::MULTIMODAL.iter().map(|&b| (Category::Multimodal, Landscape::Base(b))));
    for (bases, props) in HYBRIDS {
        let sizes = block_sizes(dim, props);
        let mut start = 0;
        let blocks = sizes
            .iter()
            .zip(bases)
            .map(|(&len, &base)| {
                let b = HybridBlock { base, start, len };
                start += len;
                b
            })
            .collect();
        plan.push((Category::Hybrid, Landscape::Hybrid(blocks)));
    }
    // composition offsets are filled in below once the rotation is known
    for bases in COMPOSITIONS {
        let parts = bases
            .iter()
            .enumerate()
            .map(|(i, &base)| Component {
                base,
                offset: Vec::new(),
                sigma: COMPOSITION_SIGMA[i],
                lambda: lambda_for(base),
                bias: COMPOSITION_BIAS[i],
            })
            .collect();
        plan.push((Category::Composition, Landscape::Composition(parts)));
    }

    let functions = plan
        .into_iter()
        .enumerate()
        .map(|(i, (category, mut landscape))| {
            let id = i as u32 + 1;
            let shift = uniform_vector(function_seed(seed, dim, id, "shift"), dim);
            let rotation = random_rotation(function_seed(seed, dim, id, "rotation"), dim)?;
            if let Landscape::Composition(parts) = &mut landscape {
                for (k, part) in parts.iter_mut().enumerate() {
                    if k == 0 {
                        part.offset = vec![0.0; dim];
                    } else {
                        let centre = uniform_vector(function_seed(seed, dim, id, &format!("component-{k}")), dim);
                        let rel: Vec<f64> = centre.iter().zip(&shift).map(|(c, s)| c - s).collect();
                        part.offset = rotation.apply(&rel);
                    }
                }
            }
            ObjectiveFunction::new(id, category, landscape, shift, rotation, 100.0 * id as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Suite { seed, dim, functions })
}
