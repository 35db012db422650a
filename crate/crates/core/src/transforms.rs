//! Objective-space transformations: translation `f(x + a)`, scaling
//! `f(alpha x)`, rotation `f(x M)` and vertical shift `f(x) + c`, each a
//! wrapper over any [`Objective`]. Points are row vectors, so `x M` means
//! `(x M)_j = sum_i x_i M_ij`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitness::Fitness;
use crate::objective::{Bounds, Objective};
use crate::seed::{rng_from_seed, SeedHasher};

/// Tolerance on `max |M^T M - I|` for a matrix to count as orthonormal.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Square orthonormal matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Orthonormal {
    dim: usize,
    data: Vec<f64>,
}

impl Orthonormal {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Orthonormal { dim, data }
    }

    /// Wraps a row-major matrix after checking `max |M^T M - I| < 1e-10`.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::invalid(format!("expected {} entries for a {dim}x{dim} matrix, got {}", dim * dim, data.len())));
        }
        let m = Orthonormal { dim, data };
        let err = m.orthonormality_error();
        if !(err < ORTHONORMAL_TOL) {
            return Err(Error::invalid(format!("matrix is not orthonormal (max |M^T M - I| = {err:e})")));
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    /// `x M` for a row vector `x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.apply_into(x, &mut out);
        out
    }

    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (i, &xi) in x.iter().enumerate() {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            for (o, &m) in out.iter_mut().zip(row) {
                *o += xi * m;
            }
        }
    }

    /// `x M^T` for a row vector `x`.
    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| {
                let row = &self.data[i * self.dim..(i + 1) * self.dim];
                row.iter().zip(x).map(|(m, v)| m * v).sum()
            })
            .collect()
    }

    /// `max_ij |(M^T M - I)_ij|`.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|r| self.get(r, i) * self.get(r, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Haar-distributed orthonormal matrix, deterministic in `(seed, dim)`.
///
/// A standard Gaussian matrix is QR-factorized and each column of `Q` is
/// multiplied by the sign of the matching diagonal entry of `R`. The
/// one-dimensional case returns `[[1.0]]`.
pub fn random_rotation(seed: u64, dim: usize) -> Result<Orthonormal> {
    if dim == 0 {
        return Err(Error::invalid("rotation dimension must be at least 1"));
    }
    if dim == 1 {
        return Ok(Orthonormal::identity(1));
    }
    let mut rng = rng_from_seed(SeedHasher::new("invbench/rotation").u64(seed).u32(dim as u32).finish());
    let mut entries = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        entries.push(rng.sample::<f64, _>(StandardNormal));
    }
    let gaussian = DMatrix::from_row_slice(dim, dim, &entries);
    let qr = gaussian.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    let mut data = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            data.push(q[(i, j)]);
        }
    }
    Ok(Orthonormal { dim, data })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    Baseline,
    Translate,
    Scale,
    Rotate,
    #[serde(rename = "vshift")]
    VShift,
}

impl TransformKind {
    pub fn label(self) -> &'static str {
        match self {
            TransformKind::Baseline => "baseline",
            TransformKind::Translate => "translate",
            TransformKind::Scale => "scale",
            TransformKind::Rotate => "rotate",
            TransformKind::VShift => "vshift",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(TransformKind::Baseline),
            "translate" => Ok(TransformKind::Translate),
            "scale" => Ok(TransformKind::Scale),
            "rotate" => Ok(TransformKind::Rotate),
            "vshift" => Ok(TransformKind::VShift),
            other => Err(Error::invalid(format!("unknown transformation kind {other:?}"))),
        }
    }
}

/// A concrete transformation for one dimension.
#[derive(Debug, Clone, PartialEq)]
pub enum Transformation {
    Baseline,
    Translate { offset: Vec<f64> },
    Scale { alpha: f64 },
    Rotate { matrix: Orthonormal },
    VShift { c: f64 },
}

impl Transformation {
    /// Translation by the uniform vector `(a, ..., a)`.
    pub fn translate_uniform(a: f64, dim: usize) -> Self {
        Transformation::Translate { offset: vec![a; dim] }
    }

    pub fn kind(&self) -> TransformKind {
        match self {
            Transformation::Baseline => TransformKind::Baseline,
            Transformation::Translate { .. } => TransformKind::Translate,
            Transformation::Scale { .. } => TransformKind::Scale,
            Transformation::Rotate { .. } => TransformKind::Rotate,
            Transformation::VShift { .. } => TransformKind::VShift,
        }
    }

    /// Dimension the transformation is tied to, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Transformation::Translate { offset } => Some(offset.len()),
            Transformation::Rotate { matrix } => Some(matrix.dim()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Transformation::Scale { alpha } if *alpha == 0.0 || !alpha.is_finite() => {
                Err(Error::invalid(format!("scale factor must be finite and non-zero, got {alpha}")))
            }
            Transformation::Rotate { matrix } => {
                let err = matrix.orthonormality_error();
                if err < ORTHONORMAL_TOL {
                    Ok(())
                } else {
                    Err(Error::invalid(format!("rotation is not orthonormal (max |M^T M - I| = {err:e})")))
                }
            }
            Transformation::Translate { offset } if offset.iter().any(|v| !v.is_finite()) => {
                Err(Error::invalid("translation offset must be finite"))
            }
            Transformation::VShift { c } if !c.is_finite() => Err(Error::invalid("vertical shift must be finite")),
            _ => Ok(()),
        }
    }

    /// Maps a point of the transformed problem to the point fed to the
    /// wrapped objective.
    pub fn map_input(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Transformation::Translate { offset } => x.iter().zip(offset).map(|(v, a)| v + a).collect(),
            Transformation::Scale { alpha } => x.iter().map(|v| alpha * v).collect(),
            Transformation::Rotate { matrix } => matrix.apply(x),
            Transformation::Baseline | Transformation::VShift { .. } => x.to_vec(),
        }
    }

    /// Location and value of the optimum of `g` given the optimum
    /// `(location, value)` of the wrapped `f`, with a flag set when the new
    /// location leaves `bounds`.
    pub fn optimum(&self, location: &[f64], value: f64, bounds: Bounds) -> TransformedOptimum {
        let base = Fitness::new(value);
        let (location, exact) = match self {
            Transformation::Baseline => (location.to_vec(), base),
            Transformation::Translate { offset } => (location.iter().zip(offset).map(|(v, a)| v - a).collect(), base),
            Transformation::Scale { alpha } => (location.iter().map(|v| v / alpha).collect(), base),
            Transformation::Rotate { matrix } => (matrix.apply_transpose(location), base),
            Transformation::VShift { c } => (location.to_vec(), base.offset(*c)),
        };
        let out_of_bounds = !bounds.contains(&location);
        TransformedOptimum { location, value: exact.value(), exact, out_of_bounds }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformedOptimum {
    pub location: Vec<f64>,
    pub value: f64,
    /// `value` without rounding, for computing errors against [`Fitness`]
    /// values of the transformed objective.
    pub exact: Fitness,
    /// The optimum lies outside the search box and cannot be reached.
    pub out_of_bounds: bool,
}

/// `t` applied to `f`.
pub fn wrap<F: Objective>(t: Transformation, f: F) -> Result<Transformed<F>> {
    t.validate()?;
    if let Some(d) = t.dim() {
        if d != f.dim() {
            return Err(Error::invalid(format!("transformation has dimension {d}, objective has {}", f.dim())));
        }
    }
    Ok(Transformed { transformation: t, inner: f })
}

/// Objective produced by [`wrap`].
#[derive(Debug, Clone)]
pub struct Transformed<F> {
    transformation: Transformation,
    inner: F,
}

impl<F: Objective> Transformed<F> {
    pub fn transformation(&self) -> &Transformation {
        &self.transformation
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<F: Objective> Objective for Transformed<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        match &self.transformation {
            Transformation::Baseline => self.inner.value(x),
            Transformation::VShift { c } => self.inner.value(x) + c,
            t => self.inner.value(&t.map_input(x)),
        }
    }

    fn fitness(&self, x: &[f64]) -> Fitness {
        match &self.transformation {
            Transformation::Baseline => self.inner.fitness(x),
            Transformation::VShift { c } => self.inner.fitness(x).offset(*c),
            t => self.inner.fitness(&t.map_input(x)),
        }
    }
}

/// Transformation as written in configuration files:
/// `{"kind": "translate", "a": 8, "alpha": 5, "c": 6, "rotation_seed": 42}`.
/// Parameters irrelevant to `kind` are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub kind: TransformKind,
    #[serde(default = "default_translation")]
    pub a: f64,
    #[serde(default = "default_scale")]
    pub alpha: f64,
    #[serde(default = "default_vshift")]
    pub c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation_seed: Option<u64>,
}

fn default_translation() -> f64 {
    8.0
}

fn default_scale() -> f64 {
    5.0
}

fn default_vshift() -> f64 {
    6.0
}

impl TransformSpec {
    pub fn new(kind: TransformKind) -> Self {
        TransformSpec { kind, a: default_translation(), alpha: default_scale(), c: default_vshift(), rotation_seed: None }
    }

    pub fn baseline() -> Self {
        Self::new(TransformKind::Baseline)
    }

    pub fn label(&self) -> &'static str {
        self.kind.label()
    }

    /// Builds the transformation for one function and dimension. Rotation
    /// matrices are seeded from `rotation_seed` (or `master_seed` when
    /// absent) together with the function id and dimension.
    pub fn resolve(&self, dim: usize, function_id: u32, master_seed: u64) -> Result<Transformation> {
        let t = match self.kind {
            TransformKind::Baseline => Transformation::Baseline,
            TransformKind::Translate => Transformation::translate_uniform(self.a, dim),
            TransformKind::Scale => Transformation::Scale { alpha: self.alpha },
            TransformKind::VShift => Transformation::VShift { c: self.c },
            TransformKind::Rotate => {
                let base = self.rotation_seed.unwrap_or(master_seed);
                let seed = SeedHasher::new("invbench/transform-rotation").u64(base).u32(function_id).u32(dim as u32).finish();
                Transformation::Rotate { matrix: random_rotation(seed, dim)? }
            }
        };
        t.validate()?;
        Ok(t)
    }
}
