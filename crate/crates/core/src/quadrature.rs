//! Refinable quadrature on finite domains.
//!
//! Level `L` applies a 5-point Gauss-Legendre rule on `2^L` equal panels.
//! Refinement stops at the first level whose value differs from the previous
//! level by less than the tolerance.

use crate::error::{Error, Result};

const NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

pub const DEFAULT_MAX_LEVEL: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Refinement level at which the tolerance was met.
    pub level: usize,
    /// Integrand evaluations used at that level.
    pub evaluations: usize,
}

/// Number of sample points used at `level`.
pub fn points_at_level(level: usize) -> usize {
    NODES.len() << level
}

fn composite(f: &impl Fn(f64) -> f64, a: f64, b: f64, level: usize) -> f64 {
    let panels = 1usize << level;
    let h = (b - a) / panels as f64;
    let half = 0.5 * h;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let mut s = 0.0;
        for (x, w) in NODES.iter().zip(WEIGHTS.iter()) {
            s += w * f(mid + half * x);
        }
        total += s * half;
    }
    total
}

pub fn refinable_quadrature(
    f: impl Fn(f64) -> f64,
    domain: (f64, f64),
    tolerance: f64,
) -> Result<QuadratureResult> {
    refinable_quadrature_with(f, domain, tolerance, DEFAULT_MAX_LEVEL)
}

pub fn refinable_quadrature_with(
    f: impl Fn(f64) -> f64,
    domain: (f64, f64),
    tolerance: f64,
    max_level: usize,
) -> Result<QuadratureResult> {
    let (a, b) = domain;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::Domain(format!(
            "invalid integration domain [{a}, {b}]"
        )));
    }
    if !(tolerance > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    if max_level == 0 {
        return Err(Error::Domain("max level must be at least 1".into()));
    }
    let mut previous = composite(&f, a, b, 0);
    let mut last = previous;
    for level in 1..=max_level {
        if level > 1 {
            previous = last;
        }
        last = composite(&f, a, b, level);
        if !last.is_finite() {
            break;
        }
        if (last - previous).abs() < tolerance {
            return Ok(QuadratureResult {
                value: last,
                level,
                evaluations: points_at_level(level),
            });
        }
    }
    Err(Error::Convergence {
        levels: max_level,
        previous,
        last,
    })
}
