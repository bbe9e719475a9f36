//! Hamilton-Jacobi plane-wave checks on a one-dimensional grid.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Minimum number of grid points for the central-difference fields.
pub const MIN_POINTS: usize = 5;

/// Points with a correspondence ratio below this are flagged classical.
pub const CLASSICAL_THRESHOLD: f64 = 0.01 * TAU;

fn check_grid(q: &[f64]) -> Result<f64> {
    if q.len() < 2 {
        return Err(Error::GridTooSmall {
            points: q.len(),
            required: MIN_POINTS,
        });
    }
    if q.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("grid must be finite".into()));
    }
    let dq = (q[q.len() - 1] - q[0]) / (q.len() - 1) as f64;
    if !(dq > 0.0) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    let tol = (1e-12 * dq).max(4.0 * f64::EPSILON * q[0].abs().max(q[q.len() - 1].abs()));
    for (i, &x) in q.iter().enumerate() {
        if (x - (q[0] + i as f64 * dq)).abs() > tol || (i > 0 && !(x > q[i - 1])) {
            return Err(Error::Domain(format!(
                "grid spacing not uniform at index {i}"
            )));
        }
    }
    Ok(dq)
}

/// Uniform grid of `n` points spanning `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let dq = (hi - lo) / (n.max(2) - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + i as f64 * dq })
        .collect()
}

/// `S(q, t) = W(q) - E t` sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalFunctionGrid {
    q: Vec<f64>,
    w: Vec<f64>,
    energy: f64,
    time: f64,
    s: Vec<f64>,
    spacing: f64,
}

impl PrincipalFunctionGrid {
    pub fn new(q: Vec<f64>, w: Vec<f64>, energy: f64, time: f64) -> Result<Self> {
        let spacing = check_grid(&q)?;
        if w.len() != q.len() {
            return Err(Error::Shape(format!(
                "{} W values for {} grid points",
                w.len(),
                q.len()
            )));
        }
        if !energy.is_finite() || !time.is_finite() || w.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("W, E and t must be finite".into()));
        }
        let s = w.iter().map(|&wi| wi - energy * time).collect();
        Ok(Self {
            q,
            w,
            energy,
            time,
            s,
            spacing,
        })
    }

    /// Same characteristic function at another time.
    pub fn at_time(&self, time: f64) -> Self {
        let s = self.w.iter().map(|&wi| wi - self.energy * time).collect();
        Self {
            time,
            s,
            ..self.clone()
        }
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// `∂S/∂t`, constant because `W` carries no time dependence.
    pub fn time_derivative(&self) -> f64 {
        -self.energy
    }

    /// First position where `S` crosses `level`, linearly interpolated.
    pub fn level_crossing(&self, level: f64) -> Option<f64> {
        self.q.windows(2).zip(self.s.windows(2)).find_map(|(q, s)| {
            let (a, b) = (s[0] - level, s[1] - level);
            if a == 0.0 {
                Some(q[0])
            } else if a * b < 0.0 {
                Some(q[0] + (q[1] - q[0]) * a / (a - b))
            } else {
                None
            }
        })
    }

    fn gradient(&self, i: usize) -> f64 {
        (self.s[i + 1] - self.s[i - 1]) / (2.0 * self.spacing)
    }

    fn laplacian(&self, i: usize) -> f64 {
        (self.s[i + 1] - 2.0 * self.s[i] + self.s[i - 1]) / (self.spacing * self.spacing)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MechanicalSystem {
    mass: f64,
    potential: Vec<f64>,
    hbar: f64,
}

impl MechanicalSystem {
    pub fn new(mass: f64, potential: Vec<f64>, hbar: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Domain(format!("mass must be positive, got {mass}")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
        }
        if let Some(i) = potential.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("potential not finite at index {i}")));
        }
        Ok(Self {
            mass,
            potential,
            hbar,
        })
    }

    pub fn free(mass: f64, points: usize, hbar: f64) -> Result<Self> {
        Self::new(mass, vec![0.0; points], hbar)
    }

    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        Self::new(self.mass, self.potential.clone(), hbar)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

/// Free particle: `W = p q`, `E = p² / 2m`.
pub fn free_particle_s(p: f64, mass: f64, q: Vec<f64>, time: f64) -> Result<PrincipalFunctionGrid> {
    if !p.is_finite() {
        return Err(Error::Domain("momentum must be finite".into()));
    }
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::Domain(format!("mass must be positive, got {mass}")));
    }
    let w = q.iter().map(|&x| p * x).collect();
    PrincipalFunctionGrid::new(q, w, p * p / (2.0 * mass), time)
}

/// Speed `E / p` of a constant-`S` surface; `None` at rest.
pub fn wavefront_speed(p: f64, mass: f64) -> Option<f64> {
    (p != 0.0).then(|| p * p / (2.0 * mass) / p)
}

/// `W = -(2m(E - α q))^{3/2} / (3 m α)` for `V = α q`, so that `W' = √(2m(E - V))`.
pub fn linear_potential(
    mass: f64,
    alpha: f64,
    energy: f64,
    q: Vec<f64>,
    time: f64,
    hbar: f64,
) -> Result<(PrincipalFunctionGrid, MechanicalSystem)> {
    if !alpha.is_finite() {
        return Err(Error::Domain("slope must be finite".into()));
    }
    let potential: Vec<f64> = q.iter().map(|&x| alpha * x).collect();
    if let Some(i) = potential.iter().position(|&v| !(energy - v > 0.0)) {
        return Err(Error::TurningPoint { index: i, q: q[i] });
    }
    let system = MechanicalSystem::new(mass, potential, hbar)?;
    let w = q
        .iter()
        .map(|&x| {
            let p = linear_momentum(mass, alpha, energy, x);
            if alpha == 0.0 {
                p * x
            } else {
                -p * p * p / (3.0 * mass * alpha)
            }
        })
        .collect();
    Ok((PrincipalFunctionGrid::new(q, w, energy, time)?, system))
}

/// `p(q) = √(2m(E - α q))`.
pub fn linear_momentum(mass: f64, alpha: f64, energy: f64, q: f64) -> f64 {
    (2.0 * mass * (energy - alpha * q)).sqrt()
}

/// Both sides of the substituted wave equation on the interior grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HjResidual {
    pub q: Vec<f64>,
    /// `(∇S)² / 2m + V + ∂S/∂t`
    pub lhs: Vec<f64>,
    /// `(iħ / 2m) ∇²S`
    pub rhs: Vec<Complex64>,
    pub max_discrepancy: f64,
}

pub fn hjs_residual(s: &PrincipalFunctionGrid, sys: &MechanicalSystem) -> Result<HjResidual> {
    let n = s.len();
    if n < MIN_POINTS {
        return Err(Error::GridTooSmall {
            points: n,
            required: MIN_POINTS,
        });
    }
    if sys.potential.len() != n {
        return Err(Error::Shape(format!(
            "{} potential values for {n} grid points",
            sys.potential.len()
        )));
    }
    let two_m = 2.0 * sys.mass;
    let mut out = HjResidual {
        q: Vec::with_capacity(n - 2),
        lhs: Vec::with_capacity(n - 2),
        rhs: Vec::with_capacity(n - 2),
        max_discrepancy: 0.0,
    };
    for i in 1..n - 1 {
        let g = s.gradient(i);
        let lhs = g * g / two_m + sys.potential[i] + s.time_derivative();
        let rhs = Complex64::new(0.0, sys.hbar * s.laplacian(i) / two_m);
        out.max_discrepancy = out
            .max_discrepancy
            .max((Complex64::new(lhs, 0.0) - rhs).norm());
        out.q.push(s.q[i]);
        out.lhs.push(lhs);
        out.rhs.push(rhs);
    }
    Ok(out)
}

/// [`hjs_residual`] at `points`, after checking that halving the spacing moves
/// no shared interior value of either field by more than `tol`.
pub fn hjs_residual_checked<F>(build: F, points: usize, tol: f64) -> Result<HjResidual>
where
    F: Fn(usize) -> Result<(PrincipalFunctionGrid, MechanicalSystem)>,
{
    let (s, sys) = build(points)?;
    let coarse = hjs_residual(&s, &sys)?;
    let (s2, sys2) = build(2 * points - 1)?;
    let fine = hjs_residual(&s2, &sys2)?;
    let mut change: f64 = 0.0;
    for j in 0..coarse.q.len() {
        let k = 2 * j + 1;
        change = change
            .max((coarse.lhs[j] - fine.lhs[k]).abs())
            .max((coarse.rhs[j] - fine.rhs[k]).norm());
    }
    if change > tol {
        return Err(Error::GridTooCoarse {
            change,
            tolerance: tol,
        });
    }
    Ok(coarse)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BcpField {
    pub q: Vec<f64>,
    /// `|(λ/p) dp/dq|` with `λ = 2πħ/p`.
    pub ratio: Vec<f64>,
    pub classical: Vec<bool>,
}

pub fn bcp_ratio(s: &PrincipalFunctionGrid, sys: &MechanicalSystem) -> Result<BcpField> {
    let n = s.len();
    if n < MIN_POINTS {
        return Err(Error::GridTooSmall {
            points: n,
            required: MIN_POINTS,
        });
    }
    let p: Vec<f64> = (1..n - 1).map(|i| s.gradient(i)).collect();
    let scale = p.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(j) = p
        .iter()
        .position(|x| x.abs() <= 1e-10 * scale || scale == 0.0)
    {
        return Err(Error::TurningPoint {
            index: j + 1,
            q: s.q[j + 1],
        });
    }
    let mut out = BcpField {
        q: Vec::with_capacity(n - 2),
        ratio: Vec::with_capacity(n - 2),
        classical: Vec::with_capacity(n - 2),
    };
    for (j, &pj) in p.iter().enumerate() {
        let i = j + 1;
        let r = (TAU * sys.hbar * s.laplacian(i) / (pj * pj)).abs();
        out.q.push(s.q[i]);
        out.ratio.push(r);
        out.classical.push(r < CLASSICAL_THRESHOLD);
    }
    Ok(out)
}
