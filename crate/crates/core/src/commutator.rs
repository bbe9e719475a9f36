//! Common commutator scale of independent conjugate pairs.
//!
//! Pairs are built from truncated ladder operators, where `[a, a†]` equals the
//! identity except in the last diagonal entry. On the leading `(N-1)` block,
//! `u v - v u = K I` and `K` must come out the same for every pair built with
//! the same action scale, however the pair is stretched or shifted.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phasor::ComplexAmplitude;

pub type Operator = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugatePair {
    pub u: Operator,
    pub v: Operator,
}

/// Truncated annihilation operator.
pub fn annihilation(dim: usize) -> Operator {
    let mut a = Operator::zeros(dim, dim);
    for j in 1..dim {
        a[(j - 1, j)] = Complex64::new((j as f64).sqrt(), 0.0);
    }
    a
}

impl ConjugatePair {
    /// `u = s sqrt(h/2) (a + a†)`, `v = (i/s) sqrt(h/2) (a† - a)` in `dim` levels.
    pub fn ladder(dim: usize, action_scale: f64, stretch: f64) -> Result<Self> {
        if dim < 3 {
            return Err(Error::Domain(format!(
                "dimension must be at least 3, got {dim}"
            )));
        }
        if !(action_scale > 0.0 && stretch != 0.0 && stretch.is_finite()) {
            return Err(Error::Domain(
                "action scale must be positive and stretch nonzero".into(),
            ));
        }
        let a = annihilation(dim);
        let ad = a.adjoint();
        let c = (0.5 * action_scale).sqrt();
        let u = (&a + &ad) * Complex64::new(stretch * c, 0.0);
        let v = (&ad - &a) * Complex64::new(0.0, c / stretch);
        Ok(Self { u, v })
    }

    /// Scale `u` by `factor` and `v` by `1/factor`.
    pub fn rescaled(&self, factor: f64) -> Self {
        Self {
            u: &self.u * Complex64::new(factor, 0.0),
            v: &self.v * Complex64::new(1.0 / factor, 0.0),
        }
    }

    /// Add multiples of the identity to both members.
    pub fn shifted(&self, du: f64, dv: f64) -> Self {
        let n = self.u.nrows();
        let id = Operator::identity(n, n);
        Self {
            u: &self.u + &id * Complex64::new(du, 0.0),
            v: &self.v + &id * Complex64::new(dv, 0.0),
        }
    }

    pub fn commutator(&self) -> Operator {
        &self.u * &self.v - &self.v * &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorCheck {
    pub k1: ComplexAmplitude,
    pub k2: ComplexAmplitude,
    /// `|K1 - K2| / |K1|`.
    pub agreement: f64,
    /// Largest `|C_ij - K δ_ij|` over both leading blocks.
    pub block_residual: f64,
}

fn leading_scale(c: &Operator) -> (ComplexAmplitude, f64) {
    let m = c.nrows() - 1;
    let k = (0..m).map(|j| c[(j, j)]).sum::<Complex64>() / m as f64;
    let mut residual: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            let target = if i == j { k } else { Complex64::new(0.0, 0.0) };
            residual = residual.max((c[(i, j)] - target).norm());
        }
    }
    (k, residual)
}

pub fn compare_pairs(first: &ConjugatePair, second: &ConjugatePair) -> Result<CommutatorCheck> {
    if first.dim() != second.dim() {
        return Err(Error::Shape(
            "pairs act on spaces of different dimension".into(),
        ));
    }
    let (k1, r1) = leading_scale(&first.commutator());
    let (k2, r2) = leading_scale(&second.commutator());
    Ok(CommutatorCheck {
        k1,
        k2,
        agreement: (k1 - k2).norm() / k1.norm(),
        block_residual: r1.max(r2),
    })
}

/// Two differently stretched and shifted pairs sharing `action_scale`.
pub fn commutator_scale_check(dim: usize, action_scale: f64) -> Result<CommutatorCheck> {
    let first = ConjugatePair::ladder(dim, action_scale, 1.0)?;
    let second = ConjugatePair::ladder(dim, action_scale, 2.75)?.shifted(0.4, -1.3);
    compare_pairs(&first, &second)
}
