//! Base formulas of the suite. Every formula is written in centred
//! coordinates: its global minimum is 0 and sits at `z = 0`. Formulas that
//! are defined on a smaller natural domain rescale `z` first, so a shift in
//! `[-80, 80]` and the `[-100, 100]` box give a landscape of sensible size.

use std::f64::consts::{E, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseFunction {
    Sphere,
    BentCigar,
    Zakharov,
    Rastrigin,
    Ackley,
    Griewank,
    Levy,
    Schwefel,
    Rosenbrock,
    WeierstrassLite,
}

impl BaseFunction {
    pub const UNIMODAL: [BaseFunction; 3] = [BaseFunction::BentCigar, BaseFunction::Sphere, BaseFunction::Zakharov];

    pub const MULTIMODAL: [BaseFunction; 7] = [
        BaseFunction::Rosenbrock,
        BaseFunction::Rastrigin,
        BaseFunction::Schwefel,
        BaseFunction::Levy,
        BaseFunction::Ackley,
        BaseFunction::Griewank,
        BaseFunction::WeierstrassLite,
    ];

    pub const ALL: [BaseFunction; 10] = [
        BaseFunction::Sphere,
        BaseFunction::BentCigar,
        BaseFunction::Zakharov,
        BaseFunction::Rastrigin,
        BaseFunction::Ackley,
        BaseFunction::Griewank,
        BaseFunction::Levy,
        BaseFunction::Schwefel,
        BaseFunction::Rosenbrock,
        BaseFunction::WeierstrassLite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseFunction::Sphere => "sphere",
            BaseFunction::BentCigar => "bent-cigar",
            BaseFunction::Zakharov => "zakharov",
            BaseFunction::Rastrigin => "rastrigin",
            BaseFunction::Ackley => "ackley",
            BaseFunction::Griewank => "griewank",
            BaseFunction::Levy => "levy",
            BaseFunction::Schwefel => "schwefel",
            BaseFunction::Rosenbrock => "rosenbrock",
            BaseFunction::WeierstrassLite => "weierstrass-lite",
        }
    }

    /// True when the formula is invariant under permutation of coordinates.
    pub fn is_symmetric(self) -> bool {
        !matches!(self, BaseFunction::BentCigar | BaseFunction::Rosenbrock | BaseFunction::Zakharov | BaseFunction::Levy | BaseFunction::Griewank)
    }

    pub fn eval(self, z: &[f64]) -> f64 {
        match self {
            BaseFunction::Sphere => sphere(z),
            BaseFunction::BentCigar => bent_cigar(z),
            BaseFunction::Zakharov => zakharov(z),
            BaseFunction::Rastrigin => rastrigin(z),
            BaseFunction::Ackley => ackley(z),
            BaseFunction::Griewank => griewank(z),
            BaseFunction::Levy => levy(z),
            BaseFunction::Schwefel => schwefel(z),
            BaseFunction::Rosenbrock => rosenbrock(z),
            BaseFunction::WeierstrassLite => weierstrass_lite(z),
        }
    }
}

impl fmt::Display for BaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn sphere(z: &[f64]) -> f64 {
    z.iter().map(|v| v * v).sum()
}

pub fn bent_cigar(z: &[f64]) -> f64 {
    match z.split_first() {
        Some((first, rest)) => first * first + 1e6 * sphere(rest),
        None => 0.0,
    }
}

pub fn zakharov(z: &[f64]) -> f64 {
    let sq = sphere(z);
    let lin: f64 = z.iter().enumerate().map(|(i, v)| 0.5 * (i + 1) as f64 * v).sum();
    let lin2 = lin * lin;
    sq + lin2 + lin2 * lin2
}

/// Rastrigin on `z * 5.12 / 100`.
pub fn rastrigin(z: &[f64]) -> f64 {
    z.iter()
        .map(|v| {
            let y = v * 0.0512;
            y * y - 10.0 * (2.0 * PI * y).cos() + 10.0
        })
        .sum()
}

pub fn ackley(z: &[f64]) -> f64 {
    let n = z.len() as f64;
    let sq = sphere(z) / n;
    let cs: f64 = z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    let v = -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E;
    // the constant terms cancel to within a few ulps at the optimum
    v.max(0.0)
}

/// Griewank on `z * 600 / 100`.
pub fn griewank(z: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut prod = 1.0;
    for (i, v) in z.iter().enumerate() {
        let y = v * 6.0;
        sum += y * y;
        prod *= (y / ((i + 1) as f64).sqrt()).cos();
    }
    sum / 4000.0 - prod + 1.0
}

/// Levy with its optimum moved from `1` to `0`.
pub fn levy(z: &[f64]) -> f64 {
    let n = z.len();
    if n == 0 {
        return 0.0;
    }
    let w: Vec<f64> = z.iter().map(|v| 1.0 + v / 4.0).collect();
    let head = (PI * w[0]).sin().powi(2);
    let mid: f64 = w[..n - 1]
        .iter()
        .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
        .sum();
    let last = w[n - 1];
    let tail = (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
    head + mid + tail
}

const SCHWEFEL_PEAK: f64 = 4.209_687_462_275_036e2;

fn schwefel_term(y: f64, n: usize) -> f64 {
    if y.abs() <= 500.0 {
        y * y.abs().sqrt().sin()
    } else if y > 500.0 {
        let m = 500.0 - y % 500.0;
        m * m.abs().sqrt().sin() - (y - 500.0).powi(2) / (10_000.0 * n as f64)
    } else {
        let m = y.abs() % 500.0 - 500.0;
        m * m.abs().sqrt().sin() - (y + 500.0).powi(2) / (10_000.0 * n as f64)
    }
}

/// Modified Schwefel on `z * 1000 / 100`, measured against the value of the
/// peak term so the optimum is exactly 0.
pub fn schwefel(z: &[f64]) -> f64 {
    let n = z.len();
    let peak = schwefel_term(SCHWEFEL_PEAK, n);
    z.iter().map(|v| peak - schwefel_term(v * 10.0 + SCHWEFEL_PEAK, n)).sum()
}

/// Textbook Rosenbrock, minimum 0 at `(1, ..., 1)`.
pub fn rosenbrock_natural(x: &[f64]) -> f64 {
    x.windows(2).map(|p| 100.0 * (p[0] * p[0] - p[1]).powi(2) + (p[0] - 1.0).powi(2)).sum()
}

/// Rosenbrock on `z * 2.048 / 100 + 1`.
pub fn rosenbrock(z: &[f64]) -> f64 {
    let x: Vec<f64> = z.iter().map(|v| v * 0.02048 + 1.0).collect();
    rosenbrock_natural(&x)
}

const WEIERSTRASS_TERMS: usize = 8;

/// Truncated Weierstrass (a = 0.5, b = 3, 8 terms) on `z * 0.5 / 100`.
pub fn weierstrass_lite(z: &[f64]) -> f64 {
    let mut total = 0.0;
    for v in z {
        let y = v * 0.005;
        let mut ak = 1.0;
        let mut bk = 1.0;
        for _ in 0..WEIERSTRASS_TERMS {
            let freq = 2.0 * PI * bk;
            total += ak * ((freq * (y + 0.5)).cos() - (freq * 0.5).cos());
            ak *= 0.5;
            bk *= 3.0;
        }
    }
    total
}
