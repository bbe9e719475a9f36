//! Sampled fields and Cesàro-averaged inner products.
//!
//! The Cesàro value is the mean of window-normalized partial integrals of
//! `f* . g` over the sub-windows `W, W/2, ..., W/2^(levels-1)` anchored at the
//! grid start. Oscillatory cross terms decay like `1 / (dk * W)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phasor::{ComplexAmplitude, PolarizationPhasor};

/// Uniform z-grid starting at `start` with `len` points spaced `spacing`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub spacing: f64,
    pub len: usize,
}

impl Grid {
    pub fn new(start: f64, spacing: f64, len: usize) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) || !start.is_finite() {
            return Err(Error::Domain(format!("invalid grid spacing {spacing}")));
        }
        if len < 2 {
            return Err(Error::Domain("grid needs at least two points".into()));
        }
        Ok(Self {
            start,
            spacing,
            len,
        })
    }

    /// Grid covering `[start, start + span]` with `per_unit` intervals per unit length.
    pub fn covering(start: f64, span: f64, per_unit: f64) -> Result<Self> {
        let intervals = (span * per_unit).ceil().max(1.0) as usize;
        Self::new(start, span / intervals as f64, intervals + 1)
    }

    pub fn span(&self) -> f64 {
        self.spacing * (self.len - 1) as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.start + self.spacing * j as f64
    }

    fn matches(&self, other: &Self) -> bool {
        let tol = 1e-12 * self.spacing.abs().max(other.spacing.abs());
        self.len == other.len
            && (self.spacing - other.spacing).abs() <= tol
            && (self.start - other.start).abs() <= tol.max(1e-12 * self.start.abs())
    }
}

/// Vector phasor field sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: Grid,
    values: Vec<PolarizationPhasor>,
}

impl SampledField {
    pub fn new(grid: Grid, values: Vec<PolarizationPhasor>) -> Result<Self> {
        if values.len() != grid.len {
            return Err(Error::Shape(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> PolarizationPhasor) -> Self {
        let values = (0..grid.len).map(|j| f(grid.point(j))).collect();
        Self { grid, values }
    }

    /// `amplitude * exp(i k z)` on the grid.
    pub fn plane_wave(grid: Grid, wavenumber: f64, amplitude: PolarizationPhasor) -> Self {
        Self::from_fn(grid, |z| {
            amplitude.scale(Complex64::from_polar(1.0, wavenumber * z))
        })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::from_fn(grid, |_| PolarizationPhasor::default())
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[PolarizationPhasor] {
        &self.values
    }

    /// `a * self + b * other` on a shared grid.
    pub fn combine(&self, a: ComplexAmplitude, other: &Self, b: ComplexAmplitude) -> Result<Self> {
        if !self.grid.matches(&other.grid) {
            return Err(Error::Shape("fields sampled on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x.scale(a).add(&y.scale(b)))
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CesaroConfig {
    /// Number of geometrically shrinking sub-windows averaged.
    pub levels: usize,
}

impl Default for CesaroConfig {
    fn default() -> Self {
        Self { levels: 3 }
    }
}

/// Cesàro inner product `<f|g>` over `[start, start + window]`.
pub fn cesaro_inner_product(
    f: &SampledField,
    g: &SampledField,
    window: f64,
) -> Result<ComplexAmplitude> {
    cesaro_inner_product_with(f, g, window, CesaroConfig::default())
}

pub fn cesaro_inner_product_with(
    f: &SampledField,
    g: &SampledField,
    window: f64,
    config: CesaroConfig,
) -> Result<ComplexAmplitude> {
    if !f.grid.matches(&g.grid) {
        return Err(Error::Shape("fields sampled on different grids".into()));
    }
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::Domain(format!(
            "window must be positive, got {window}"
        )));
    }
    if config.levels == 0 {
        return Err(Error::Domain(
            "Cesàro average needs at least one level".into(),
        ));
    }
    let grid = f.grid;
    if grid.span() < window * (1.0 - 1e-9) {
        return Err(Error::Shape(format!(
            "grid spans {} but the window is {window}",
            grid.span()
        )));
    }

    let intervals: Vec<usize> = (0..config.levels)
        .map(|m| (window / (grid.spacing * (1u64 << m) as f64)).round() as usize)
        .collect();
    if intervals.contains(&0) {
        return Err(Error::Shape(format!(
            "grid spacing {} too coarse for {} Cesàro levels",
            grid.spacing, config.levels
        )));
    }
    let outer = intervals[0].min(grid.len - 1);

    // Running trapezoid integral, sampled where each sub-window ends.
    let mut partial = vec![Complex64::new(0.0, 0.0); config.levels];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prev = f.values[0].dot(&g.values[0]);
    for j in 1..=outer {
        let cur = f.values[j].dot(&g.values[j]);
        acc += 0.5 * (prev + cur) * grid.spacing;
        prev = cur;
        for (m, &n) in intervals.iter().enumerate() {
            if n == j {
                partial[m] = acc / (n as f64 * grid.spacing);
            }
        }
    }
    let sum: Complex64 = partial.iter().sum();
    Ok(sum / config.levels as f64)
}
