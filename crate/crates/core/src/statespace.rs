//! Linear state-space evolution.
//!
//! Covers the order-n scalar-coefficient evolution `Σ a_k d^k ψ/dt^k = φ(t)`
//! (characteristic roots through the companion matrix, fixed-step RK4 in
//! first-order form), Schrödinger propagation with the exact one-step
//! propagator, and the action of the Pauli matrix `σ_y` on a traveling
//! two-component field.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phasor::{reduce_half_turn, PolarizationPhasor};

pub type Forcing = Arc<dyn Fn(f64) -> StateVector + Send + Sync>;

/// `Σ_{k=0}^{n} a_k d^k ψ/dt^k = φ(t)`.
#[derive(Clone)]
pub struct EvolutionSpec {
    coefficients: Vec<Complex64>,
    forcing: Option<Forcing>,
}

impl std::fmt::Debug for EvolutionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EvolutionSpec")
            .field("coefficients", &self.coefficients)
            .field("forced", &self.forcing.is_some())
            .finish()
    }
}

impl EvolutionSpec {
    /// Coefficients in ascending derivative order, `a_0` first.
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::Domain("order must be at least 1".into()));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("coefficients must be finite".into()));
        }
        if coefficients.last().is_some_and(|c| c.norm() == 0.0) {
            return Err(Error::DegenerateOrder);
        }
        Ok(Self {
            coefficients,
            forcing: None,
        })
    }

    pub fn real(coefficients: &[f64]) -> Result<Self> {
        Self::new(
            coefficients
                .iter()
                .map(|&c| Complex64::new(c, 0.0))
                .collect(),
        )
    }

    pub fn with_forcing(mut self, forcing: Forcing) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(pub DVector<Complex64>);

impl StateVector {
    pub fn new(components: Vec<Complex64>) -> Self {
        Self(DVector::from_vec(components))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DVector::zeros(dim))
    }

    pub fn scalar(v: Complex64) -> Self {
        Self::new(vec![v])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn components(&self) -> &[Complex64] {
        self.0.as_slice()
    }
}

/// Evaluate `Σ a_k s^k` by Horner's rule.
pub fn polynomial_value(coefficients: &[Complex64], s: Complex64) -> Complex64 {
    coefficients
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * s + a)
}

/// Unevaluated sum `hi + lo` carrying about twice the precision of `f64`.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    fn two_sum(a: f64, b: f64) -> Self {
        let hi = a + b;
        let bb = hi - a;
        Self {
            hi,
            lo: (a - (hi - bb)) + (b - bb),
        }
    }

    fn add(self, other: Self) -> Self {
        let s = Self::two_sum(self.hi, other.hi);
        let t = s.lo + self.lo + other.lo;
        Self::two_sum(s.hi, t)
    }

    fn add_f64(self, b: f64) -> Self {
        let s = Self::two_sum(self.hi, b);
        Self::two_sum(s.hi, s.lo + self.lo)
    }

    fn mul_f64(self, b: f64) -> Self {
        let hi = self.hi * b;
        let lo = self.hi.mul_add(b, -hi) + self.lo * b;
        Self::two_sum(hi, lo)
    }

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

/// [`polynomial_value`] with double-double accumulation, for residuals near
/// the rounding floor of plain evaluation.
pub fn polynomial_value_accurate(coefficients: &[Complex64], s: Complex64) -> Complex64 {
    let (mut re, mut im) = (DoubleDouble::ZERO, DoubleDouble::ZERO);
    for a in coefficients.iter().rev() {
        let next_re = re.mul_f64(s.re).add(im.mul_f64(s.im).neg()).add_f64(a.re);
        let next_im = re.mul_f64(s.im).add(im.mul_f64(s.re)).add_f64(a.im);
        re = next_re;
        im = next_im;
    }
    Complex64::new(re.hi + re.lo, im.hi + im.lo)
}

fn polynomial_derivative(coefficients: &[Complex64], s: Complex64) -> Complex64 {
    coefficients
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, &a)| {
            acc * s + a * k as f64
        })
}

/// Companion matrix of the monic polynomial `p(s) / a_n`.
pub fn companion_matrix(coefficients: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let n = coefficients.len().saturating_sub(1);
    if n == 0 {
        return Err(Error::Domain("order must be at least 1".into()));
    }
    let lead = coefficients[n];
    if lead.norm() == 0.0 {
        return Err(Error::DegenerateOrder);
    }
    let mut c = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        c[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        c[(i, n - 1)] = -coefficients[i] / lead;
    }
    Ok(c)
}

/// All `n` roots of the characteristic polynomial, with multiplicity.
///
/// Eigenvalues of the companion matrix, each refined by Newton steps on the
/// original polynomial while the residual keeps shrinking.
pub fn characteristic_roots(spec: &EvolutionSpec) -> Result<Vec<Complex64>> {
    roots_of(&spec.coefficients)
}

pub fn roots_of(coefficients: &[Complex64]) -> Result<Vec<Complex64>> {
    let c = companion_matrix(coefficients)?;
    let n = c.nrows();
    if n == 1 {
        return Ok(vec![c[(0, 0)]]);
    }
    let eig = c
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Degenerate("Schur form did not triangularize".into()))?;
    Ok(eig
        .iter()
        .map(|&s| {
            let mut best = s;
            let mut best_res = polynomial_value_accurate(coefficients, s).norm();
            let mut cur = s;
            for _ in 0..8 {
                let d = polynomial_derivative(coefficients, cur);
                if d.norm() == 0.0 {
                    break;
                }
                cur -= polynomial_value_accurate(coefficients, cur) / d;
                let res = polynomial_value_accurate(coefficients, cur).norm();
                if !(res < best_res) {
                    break;
                }
                best = cur;
                best_res = res;
            }
            best
        })
        .collect())
}

/// Residual bound used for accepted roots: `|p(s)| < 1e-8 max |a_k|`.
pub fn root_residual_ok(coefficients: &[Complex64], s: Complex64) -> bool {
    let scale = coefficients.iter().map(|a| a.norm()).fold(0.0, f64::max);
    polynomial_value_accurate(coefficients, s).norm() < 1e-8 * scale
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
}

/// RK4 on `|step| * max |root|` beyond this is rejected.
pub const RK4_STABILITY_LIMIT: f64 = 2.5;

/// Integrate from `t = 0` to `t_end` with steps no longer than `step`.
///
/// `initial[k]` holds `d^k ψ/dt^k` at `t = 0` for `k < n`.
pub fn evolve_linear(
    spec: &EvolutionSpec,
    initial: &[StateVector],
    t_end: f64,
    step: f64,
) -> Result<Trajectory> {
    let n = spec.order();
    if initial.len() != n {
        return Err(Error::Shape(format!(
            "order {n} needs {n} initial derivatives, got {}",
            initial.len()
        )));
    }
    let dim = initial[0].dim();
    if initial.iter().any(|v| v.dim() != dim) {
        return Err(Error::Shape(
            "initial derivatives differ in dimension".into(),
        ));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::Domain(format!(
            "end time must be non-negative, got {t_end}"
        )));
    }
    let radius = roots_of(&spec.coefficients)?
        .iter()
        .map(|r| r.norm())
        .fold(0.0, f64::max);
    if step * radius > RK4_STABILITY_LIMIT {
        return Err(Error::Unstable {
            step,
            spectral_radius: radius,
        });
    }

    let lead = spec.coefficients[n];
    let lower = &spec.coefficients[..n];
    let rhs = |t: f64, y: &[DVector<Complex64>]| -> Vec<DVector<Complex64>> {
        let mut top = match &spec.forcing {
            Some(f) => f(t).0,
            None => DVector::zeros(dim),
        };
        for (a, yk) in lower.iter().zip(y) {
            top -= yk * *a;
        }
        let mut out: Vec<DVector<Complex64>> = y[1..].to_vec();
        out.push(top / lead);
        out
    };
    let axpy =
        |y: &[DVector<Complex64>], k: &[DVector<Complex64>], h: f64| -> Vec<DVector<Complex64>> {
            y.iter()
                .zip(k)
                .map(|(a, b)| a + b * Complex64::new(h, 0.0))
                .collect()
        };

    let steps = if t_end == 0.0 {
        0
    } else {
        (t_end / step).ceil() as usize
    };
    let h = if steps == 0 {
        0.0
    } else {
        t_end / steps as f64
    };
    let mut y: Vec<DVector<Complex64>> = initial.iter().map(|v| v.0.clone()).collect();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(StateVector(y[0].clone()));
    for i in 0..steps {
        let t = i as f64 * h;
        let k1 = rhs(t, &y);
        let k2 = rhs(t + 0.5 * h, &axpy(&y, &k1, 0.5 * h));
        let k3 = rhs(t + 0.5 * h, &axpy(&y, &k2, 0.5 * h));
        let k4 = rhs(t + h, &axpy(&y, &k3, h));
        let sixth = Complex64::new(h / 6.0, 0.0);
        let two = Complex64::new(2.0, 0.0);
        for j in 0..n {
            let incr = (&k1[j] + &k2[j] * two + &k3[j] * two + &k4[j]) * sixth;
            y[j] += incr;
        }
        times.push((i + 1) as f64 * h);
        states.push(StateVector(y[0].clone()));
    }
    Ok(Trajectory { times, states })
}

/// Hermitian evolution operator with its time scale `ħ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianOperator {
    matrix: DMatrix<Complex64>,
    hbar: f64,
}

impl HamiltonianOperator {
    pub fn new(matrix: DMatrix<Complex64>, hbar: f64) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::Shape(
                "Hamiltonian must be a non-empty square matrix".into(),
            ));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
        }
        let scale = matrix.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let skew = (&matrix - matrix.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if skew > 1e-12 * scale {
            return Err(Error::NotHermitian(skew));
        }
        let matrix = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(Self { matrix, hbar })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn expectation(&self, psi: &StateVector) -> f64 {
        psi.0.dotc(&(&self.matrix * &psi.0)).re
    }

    /// `exp(-i H dt / ħ)` from the eigendecomposition of `H`.
    pub fn propagator(&self, dt: f64) -> DMatrix<Complex64> {
        let eig = self.matrix.clone().symmetric_eigen();
        let phases = DVector::from_iterator(
            self.dim(),
            eig.eigenvalues
                .iter()
                .map(|&e| Complex64::from_polar(1.0, -e * dt / self.hbar)),
        );
        let v = &eig.eigenvectors;
        let u = v * DMatrix::from_diagonal(&phases) * v.adjoint();
        // one Newton-Schulz step toward the nearest unitary matrix
        let defect = DMatrix::<Complex64>::identity(self.dim(), self.dim())
            * Complex64::new(3.0, 0.0)
            - u.adjoint() * &u;
        &u * defect * Complex64::new(0.5, 0.0)
    }
}

/// Apply the one-step propagator `steps` times.
pub fn schrodinger_propagate(
    h: &HamiltonianOperator,
    psi0: &StateVector,
    dt: f64,
    steps: usize,
) -> Result<StateVector> {
    Ok(schrodinger_trajectory(h, psi0, dt, steps, steps.max(1))?
        .states
        .pop()
        .expect("trajectory keeps the final state"))
}

/// Like [`schrodinger_propagate`], recording every `record_every` steps and the end state.
pub fn schrodinger_trajectory(
    h: &HamiltonianOperator,
    psi0: &StateVector,
    dt: f64,
    steps: usize,
    record_every: usize,
) -> Result<Trajectory> {
    if psi0.dim() != h.dim() {
        return Err(Error::Shape(format!(
            "state of dimension {} for a {}-level Hamiltonian",
            psi0.dim(),
            h.dim()
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!(
            "time step must be positive, got {dt}"
        )));
    }
    let every = record_every.max(1);
    let u = h.propagator(dt);
    let mut psi = psi0.0.clone();
    let mut times = vec![0.0];
    let mut states = vec![psi0.clone()];
    for s in 1..=steps {
        psi = &u * psi;
        if s % every == 0 || s == steps {
            times.push(s as f64 * dt);
            states.push(StateVector(psi.clone()));
        }
    }
    Ok(Trajectory { times, states })
}

/// `σ_y = ((0, -i), (i, 0))`.
pub fn pauli_y() -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [[z, -i], [i, z]]
}

pub fn apply_2x2(m: &[[Complex64; 2]; 2], psi: [Complex64; 2]) -> [Complex64; 2] {
    [
        m[0][0] * psi[0] + m[0][1] * psi[1],
        m[1][0] * psi[0] + m[1][1] * psi[1],
    ]
}

/// Relative tolerance below which a polarization orientation is undefined.
pub const ORIENTATION_TOL: f64 = 1e-9;

/// Local polarization axis of `psi e^{i(kz - ωt)}` at each grid point, in `[0, π)`.
pub fn direction_field(
    psi: [Complex64; 2],
    grid: &[f64],
    k: f64,
    omega: f64,
    t: f64,
) -> Vec<Option<f64>> {
    grid.iter()
        .map(|&z| {
            let phase = Complex64::from_polar(1.0, k * z - omega * t);
            PolarizationPhasor::new(psi[0] * phase, psi[1] * phase).orientation(ORIENTATION_TOL)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VortexPoint {
    pub z: f64,
    /// Instantaneous direction of the physical field, `None` where it vanishes.
    pub field_angle: Option<f64>,
    pub direction: Option<f64>,
    pub rotated_direction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VortexField {
    pub points: Vec<VortexPoint>,
    /// Points where both orientations are defined.
    pub defined_points: usize,
    /// Largest deviation of `rotated - original` from `π/2` (mod `π`) over defined points.
    pub max_rotation_error: f64,
}

impl VortexField {
    pub fn rotation_holds(&self, tol: f64) -> bool {
        self.max_rotation_error <= tol
    }
}

/// Orientation field of `ψ` and of `σ_y ψ` along the grid.
pub fn spin_vortex_field(
    grid: &[f64],
    k: f64,
    omega: f64,
    t: f64,
    psi: [Complex64; 2],
) -> Result<VortexField> {
    if grid.is_empty() {
        return Err(Error::Domain("grid must be nonempty".into()));
    }
    let rotated = apply_2x2(&pauli_y(), psi);
    let before = direction_field(psi, grid, k, omega, t);
    let after = direction_field(rotated, grid, k, omega, t);
    let mut defined = 0;
    let mut max_err: f64 = 0.0;
    let points = grid
        .iter()
        .zip(before.iter().zip(after.iter()))
        .map(|(&z, (&d, &r))| {
            if let (Some(d), Some(r)) = (d, r) {
                defined += 1;
                let diff = reduce_half_turn(r - d - FRAC_PI_2);
                max_err = max_err.max(diff.min(std::f64::consts::PI - diff));
            }
            let phase = Complex64::from_polar(1.0, k * z - omega * t);
            let (ex, ey) = ((psi[0] * phase).re, (psi[1] * phase).re);
            let field_angle = (ex.hypot(ey) > 0.0).then(|| ey.atan2(ex));
            VortexPoint {
                z,
                field_angle,
                direction: d,
                rotated_direction: r,
            }
        })
        .collect();
    Ok(VortexField {
        points,
        defined_points: defined,
        max_rotation_error: max_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        v
    }

    #[test]
    fn accurate_evaluation_sees_below_rounding() {
        // (s - 1)^2 = s^2 - 2s + 1 at s = 1 + 2^-30: exact value 2^-60
        let coeffs = [c(1.0), c(-2.0), c(1.0)];
        let s = c(1.0 + 2f64.powi(-30));
        assert_eq!(polynomial_value_accurate(&coeffs, s), c(2f64.powi(-60)));
    }

    #[test]
    fn harmonic_roots() {
        let w = 3.0;
        let roots = sorted(
            characteristic_roots(&EvolutionSpec::real(&[w * w, 0.0, 1.0]).unwrap()).unwrap(),
        );
        assert!((roots[0] - Complex64::new(0.0, -w)).norm() < 1e-12);
        assert!((roots[1] - Complex64::new(0.0, w)).norm() < 1e-12);
    }

    #[test]
    fn quadratic_formula_roots() {
        let roots =
            sorted(characteristic_roots(&EvolutionSpec::real(&[2.0, 3.0, 1.0]).unwrap()).unwrap());
        // (-3 ± sqrt(9 - 8)) / 2
        assert!((roots[0] - c(-2.0)).norm() < 1e-12);
        assert!((roots[1] - c(-1.0)).norm() < 1e-12);
    }

    #[test]
    fn first_order_constant_root() {
        let roots = characteristic_roots(&EvolutionSpec::real(&[0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(roots, vec![c(0.0)]);
    }

    #[test]
    fn zero_leading_coefficient() {
        assert_eq!(
            EvolutionSpec::real(&[1.0, 2.0, 0.0]).unwrap_err(),
            Error::DegenerateOrder
        );
        assert!(EvolutionSpec::real(&[1.0]).is_err());
    }

    #[test]
    fn repeated_roots_are_counted() {
        // (s + 1)^3
        let roots =
            characteristic_roots(&EvolutionSpec::real(&[1.0, 3.0, 3.0, 1.0]).unwrap()).unwrap();
        assert_eq!(roots.len(), 3);
        for r in roots {
            assert!((r - c(-1.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn cosine_solution() {
        let spec = EvolutionSpec::real(&[1.0, 0.0, 1.0]).unwrap();
        let traj = evolve_linear(
            &spec,
            &[StateVector::scalar(c(1.0)), StateVector::scalar(c(0.0))],
            PI,
            1e-3,
        )
        .unwrap();
        let last = traj.states.last().unwrap().0[0];
        assert!((*traj.times.last().unwrap() - PI).abs() < 1e-12);
        assert!((last - c(-1.0)).norm() < 1e-6);
    }

    #[test]
    fn exponential_decay() {
        let spec = EvolutionSpec::real(&[1.0, 1.0]).unwrap();
        let traj = evolve_linear(&spec, &[StateVector::scalar(c(1.0))], 1.0, 1e-3).unwrap();
        assert!((traj.states.last().unwrap().0[0] - c((-1.0f64).exp())).norm() < 1e-8);
    }

    #[test]
    fn zero_data_stays_zero() {
        let spec = EvolutionSpec::real(&[2.0, 0.5, 1.0]).unwrap();
        let traj = evolve_linear(
            &spec,
            &[StateVector::zeros(3), StateVector::zeros(3)],
            2.0,
            0.01,
        )
        .unwrap();
        assert!(traj.states.iter().all(|s| s.norm() == 0.0));
    }

    #[test]
    fn forced_response() {
        // ψ' + ψ = 1, ψ(0) = 0  =>  ψ = 1 - e^{-t}
        let spec = EvolutionSpec::real(&[1.0, 1.0])
            .unwrap()
            .with_forcing(Arc::new(|_| StateVector::scalar(Complex64::new(1.0, 0.0))));
        let traj = evolve_linear(&spec, &[StateVector::scalar(c(0.0))], 2.0, 1e-3).unwrap();
        assert!((traj.states.last().unwrap().0[0] - c(1.0 - (-2.0f64).exp())).norm() < 1e-9);
    }

    #[test]
    fn oversized_step_is_rejected() {
        let spec = EvolutionSpec::real(&[100.0, 0.0, 1.0]).unwrap();
        let r = evolve_linear(
            &spec,
            &[StateVector::scalar(c(1.0)), StateVector::scalar(c(0.0))],
            1.0,
            0.5,
        );
        assert!(matches!(r, Err(Error::Unstable { .. })));
    }

    #[test]
    fn initial_data_shape_checked() {
        let spec = EvolutionSpec::real(&[1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            evolve_linear(&spec, &[StateVector::scalar(c(1.0))], 1.0, 0.01),
            Err(Error::Shape(_))
        ));
    }

    fn diag(e: &[f64]) -> DMatrix<Complex64> {
        DMatrix::from_diagonal(&DVector::from_iterator(e.len(), e.iter().map(|&x| c(x))))
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let h = HamiltonianOperator::new(DMatrix::zeros(3, 3), 1.0).unwrap();
        let psi = StateVector::new(vec![c(0.3), Complex64::new(0.1, 0.4), c(-0.2)]);
        let out = schrodinger_propagate(&h, &psi, 0.1, 50).unwrap();
        assert!((out.0 - psi.0).norm() < 1e-15);
    }

    #[test]
    fn diagonal_phases() {
        let (e1, e2, hbar, dt, steps) = (0.7, -1.9, 0.5, 0.01, 300);
        let h = HamiltonianOperator::new(diag(&[e1, e2]), hbar).unwrap();
        let psi = StateVector::new(vec![c(0.6), c(0.8)]);
        let out = schrodinger_propagate(&h, &psi, dt, steps).unwrap();
        let t = dt * steps as f64;
        assert!((out.0[0] - Complex64::from_polar(0.6, -e1 * t / hbar)).norm() < 1e-12);
        assert!((out.0[1] - Complex64::from_polar(0.8, -e2 * t / hbar)).norm() < 1e-12);
    }

    #[test]
    fn rabi_flip() {
        let (hbar, w) = (1.3, 2.0);
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = c(hbar * w / 2.0);
        m[(1, 0)] = c(hbar * w / 2.0);
        let h = HamiltonianOperator::new(m, hbar).unwrap();
        let steps = 1000;
        let out = schrodinger_propagate(
            &h,
            &StateVector::new(vec![c(1.0), c(0.0)]),
            PI / w / steps as f64,
            steps,
        )
        .unwrap();
        assert!(out.0[0].norm() < 1e-9);
        assert!((out.0[1].norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0);
        assert!(matches!(
            HamiltonianOperator::new(m, 1.0),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn dimension_mismatch() {
        let h = HamiltonianOperator::new(diag(&[1.0, 2.0]), 1.0).unwrap();
        assert!(matches!(
            schrodinger_propagate(&h, &StateVector::zeros(3), 0.1, 1),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn pauli_rotates_linear_field() {
        let grid: Vec<f64> = (0..200).map(|j| j as f64 * 0.05).collect();
        let f = spin_vortex_field(&grid, 2.0, 1.0, 0.3, [c(1.0), c(0.0)]).unwrap();
        assert_eq!(f.defined_points, grid.len());
        assert!(f.rotation_holds(1e-12));
        for p in &f.points {
            assert!(p.direction.unwrap().abs() < 1e-12);
            assert!((p.rotated_direction.unwrap() - FRAC_PI_2).abs() < 1e-12);
        }
    }

    #[test]
    fn pauli_squared_is_identity_on_directions() {
        let grid: Vec<f64> = (0..50).map(|j| j as f64 * 0.1).collect();
        let psi = [Complex64::new(0.8, 0.1), Complex64::new(0.3, -0.4)];
        let twice = apply_2x2(&pauli_y(), apply_2x2(&pauli_y(), psi));
        let a = direction_field(psi, &grid, 1.5, 0.7, 0.2);
        let b = direction_field(twice, &grid, 1.5, 0.7, 0.2);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x.unwrap() - y.unwrap()).abs() < 1e-12);
        }
        let f = spin_vortex_field(&grid, 1.5, 0.7, 0.2, psi).unwrap();
        assert!(f.rotation_holds(1e-9));
    }

    #[test]
    fn zero_field_directions_are_flagged() {
        let f = spin_vortex_field(&[0.0, 1.0], 1.0, 1.0, 0.0, [c(0.0), c(0.0)]).unwrap();
        assert_eq!(f.defined_points, 0);
        assert!(f
            .points
            .iter()
            .all(|p| p.direction.is_none() && p.field_angle.is_none()));
        assert!(spin_vortex_field(&[], 1.0, 1.0, 0.0, [c(1.0), c(0.0)]).is_err());
    }
}
