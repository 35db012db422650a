//! Objective values carried exactly enough for shift invariance.
//!
//! A [`Fitness`] is the unevaluated sum `hi + lo` of two doubles with
//! `hi = fl(hi + lo)`. Plain objective values have `lo = 0`; adding a
//! constant with [`Fitness::offset`] is exact (two-sum), and
//! [`Fitness::diff`] returns the correctly rounded difference of the exact
//! values. Consequently `(a + c).diff(b + c)` is bitwise `a - b` for plain
//! doubles `a`, `b`, `c`, and ordering is unaffected by the offset.

use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Fitness {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

impl Fitness {
    pub const INFINITY: Fitness = Fitness { hi: f64::INFINITY, lo: 0.0 };

    pub fn new(value: f64) -> Self {
        Fitness { hi: value, lo: 0.0 }
    }

    /// Correctly rounded value.
    pub fn value(self) -> f64 {
        self.hi
    }

    /// Rounding residual (`exact - value`).
    pub fn residual(self) -> f64 {
        self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    /// `self + c`, exact when `self` is a plain double.
    pub fn offset(self, c: f64) -> Self {
        if !(self.hi.is_finite() && c.is_finite()) {
            return Fitness::new(self.hi + c);
        }
        let (s, e) = two_sum(self.hi, c);
        let (hi, lo) = two_sum(s, e + self.lo);
        Fitness { hi, lo }
    }

    /// Correctly rounded `self - other`.
    pub fn diff(self, other: Fitness) -> f64 {
        if !(self.is_finite() && other.is_finite()) {
            return self.hi - other.hi;
        }
        fsum(&[self.hi, -other.hi, self.lo, -other.lo])
    }

    /// Total order consistent with the exact values.
    pub fn total_cmp(&self, other: &Fitness) -> Ordering {
        self.hi.total_cmp(&other.hi).then(self.lo.total_cmp(&other.lo))
    }
}

impl From<f64> for Fitness {
    fn from(v: f64) -> Self {
        Fitness::new(v)
    }
}

impl fmt::Display for Fitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.hi, f)
    }
}

/// Correctly rounded sum of finite doubles (Shewchuk partials with
/// half-way correction).
pub fn fsum(values: &[f64]) -> f64 {
    let mut partials: Vec<f64> = Vec::with_capacity(values.len());
    for &v in values {
        let mut x = v;
        let mut kept = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        partials.truncate(kept);
        partials.push(x);
    }
    let mut n = partials.len();
    if n == 0 {
        return 0.0;
    }
    n -= 1;
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        let x = hi;
        n -= 1;
        let y = partials[n];
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            break;
        }
    }
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        let yr = x - hi;
        if y == yr {
            hi = x;
        }
    }
    hi
}
