//! Complex phasors and traveling plane waves.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// In-phase/quadrature content of one field component.
pub type ComplexAmplitude = Complex64;

pub const ZERO: ComplexAmplitude = Complex64::new(0.0, 0.0);
pub const ONE: ComplexAmplitude = Complex64::new(1.0, 0.0);
pub const I: ComplexAmplitude = Complex64::new(0.0, 1.0);

/// Transverse field phasor `(E_x, E_y)` of a wave traveling along z.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PolarizationPhasor {
    pub ex: ComplexAmplitude,
    pub ey: ComplexAmplitude,
}

impl PolarizationPhasor {
    pub const fn new(ex: ComplexAmplitude, ey: ComplexAmplitude) -> Self {
        Self { ex, ey }
    }

    /// Unit phasor; fails for the zero vector.
    pub fn normalized(ex: ComplexAmplitude, ey: ComplexAmplitude) -> Result<Self> {
        let p = Self::new(ex, ey);
        let n = p.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Degenerate(format!(
                "cannot normalize phasor with norm {n}"
            )));
        }
        Ok(p.scale(ONE / n))
    }

    /// Linear polarization along angle `theta` from the x axis.
    pub fn linear(theta: f64) -> Self {
        Self::new(
            Complex64::new(theta.cos(), 0.0),
            Complex64::new(theta.sin(), 0.0),
        )
    }

    pub fn norm_sqr(&self) -> f64 {
        self.ex.norm_sqr() + self.ey.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian product `<self|other>`, conjugate-linear in `self`.
    pub fn dot(&self, other: &Self) -> ComplexAmplitude {
        self.ex.conj() * other.ex + self.ey.conj() * other.ey
    }

    pub fn scale(&self, factor: ComplexAmplitude) -> Self {
        Self::new(self.ex * factor, self.ey * factor)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.ex + other.ex, self.ey + other.ey)
    }

    /// Orientation of the polarization ellipse's major axis, in `[0, pi)`.
    ///
    /// Invariant under a global phase. `None` when the orientation is
    /// undefined (zero field or circular polarization), judged against `tol`
    /// relative to the intensity.
    pub fn orientation(&self, tol: f64) -> Option<f64> {
        let intensity = self.norm_sqr();
        if intensity <= f64::MIN_POSITIVE {
            return None;
        }
        let s1 = self.ex.norm_sqr() - self.ey.norm_sqr();
        let s2 = 2.0 * (self.ex.conj() * self.ey).re;
        if s1.hypot(s2) <= tol * intensity {
            return None;
        }
        Some(reduce_half_turn(0.5 * s2.atan2(s1)))
    }
}

/// Reduce an angle to `[0, 2 pi)`.
pub fn reduce_turn(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduce an axis angle to `[0, pi)`.
pub fn reduce_half_turn(angle: f64) -> f64 {
    let half = std::f64::consts::PI;
    let r = angle.rem_euclid(half);
    if r >= half {
        0.0
    } else {
        r
    }
}

/// Propagation speed in natural units.
pub const DEFAULT_SPEED: f64 = 1.0;

/// A monochromatic plane wave `Re[amplitude * exp(i(kz - wt + alpha))]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TravelingMode {
    wavenumber: f64,
    angular_frequency: f64,
    phase_offset: f64,
    amplitude: PolarizationPhasor,
}

impl TravelingMode {
    pub fn new(wavenumber: f64, phase_offset: f64, amplitude: PolarizationPhasor) -> Result<Self> {
        Self::with_speed(wavenumber, phase_offset, amplitude, DEFAULT_SPEED)
    }

    pub fn with_speed(
        wavenumber: f64,
        phase_offset: f64,
        amplitude: PolarizationPhasor,
        speed: f64,
    ) -> Result<Self> {
        if !(wavenumber > 0.0 && wavenumber.is_finite()) {
            return Err(Error::Domain(format!(
                "wavenumber must be positive, got {wavenumber}"
            )));
        }
        if !(speed > 0.0 && speed.is_finite()) {
            return Err(Error::Domain(format!(
                "propagation speed must be positive, got {speed}"
            )));
        }
        if !phase_offset.is_finite() {
            return Err(Error::Domain("phase offset must be finite".into()));
        }
        Ok(Self {
            wavenumber,
            angular_frequency: speed * wavenumber,
            phase_offset: reduce_turn(phase_offset),
            amplitude,
        })
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    pub fn angular_frequency(&self) -> f64 {
        self.angular_frequency
    }

    pub fn phase_offset(&self) -> f64 {
        self.phase_offset
    }

    pub fn amplitude(&self) -> PolarizationPhasor {
        self.amplitude
    }

    pub fn wavelength(&self) -> f64 {
        TAU / self.wavenumber
    }

    pub fn phase(&self, z: f64, t: f64) -> f64 {
        self.wavenumber * z - self.angular_frequency * t + self.phase_offset
    }

    /// Complex field at `(z, t)`.
    pub fn phasor_at(&self, z: f64, t: f64) -> PolarizationPhasor {
        self.amplitude
            .scale(Complex64::from_polar(1.0, self.phase(z, t)))
    }

    /// Physical (real) transverse field at `(z, t)`.
    pub fn real_field(&self, z: f64, t: f64) -> [f64; 2] {
        let p = self.phasor_at(z, t);
        [p.ex.re, p.ey.re]
    }
}

/// How plane-wave overlaps are evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OverlapMode {
    /// Infinite-window limit: 1 for equal wavenumbers, 0 otherwise.
    Symbolic,
    /// Average over `[0, window]`.
    Numeric { window: f64 },
}

/// Normalized overlap of `exp(i k1 z)` against `exp(i k2 z)`.
///
/// In numeric mode this is the window average of `exp(i (k1 - k2) z)`,
/// evaluated in closed form; its modulus is bounded by `2 / (|k1 - k2| window)`.
pub fn plane_wave_overlap(k1: f64, k2: f64, mode: OverlapMode) -> Result<ComplexAmplitude> {
    match mode {
        OverlapMode::Symbolic => Ok(if k1 == k2 { ONE } else { ZERO }),
        OverlapMode::Numeric { window } => {
            if !(window > 0.0 && window.is_finite()) {
                return Err(Error::Domain(format!(
                    "window must be positive, got {window}"
                )));
            }
            let x = (k1 - k2) * window;
            if x == 0.0 {
                return Ok(ONE);
            }
            // (e^{ix} - 1) / (ix) without cancellation near x = 0
            let half = 0.5 * x;
            let s = half.sin();
            Ok(Complex64::new(x.sin() / x, 2.0 * s * s / x))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn symbolic_overlap_identity_and_orthogonality() {
        let k = 2.7;
        assert_eq!(
            plane_wave_overlap(k, k, OverlapMode::Symbolic).unwrap(),
            ONE
        );
        assert_eq!(
            plane_wave_overlap(k, 2.0 * k, OverlapMode::Symbolic).unwrap(),
            ZERO
        );
    }

    #[test]
    fn numeric_overlap_matches_direct_quadrature() {
        // midpoint rule on a fine grid as the independent route
        let (k1, k2, w) = (1.0_f64, 1.5_f64, 1.0e4_f64);
        let n = 2_000_000;
        let h = w / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let z = (j as f64 + 0.5) * h;
            acc += Complex64::from_polar(1.0, (k1 - k2) * z);
        }
        let direct = acc * h / w;
        let closed = plane_wave_overlap(k1, k2, OverlapMode::Numeric { window: w }).unwrap();
        assert!((direct - closed).norm() < 1e-9, "{direct} vs {closed}");
        assert!(closed.norm() < 1e-3);
    }

    #[test]
    fn numeric_overlap_rejects_bad_window() {
        assert!(matches!(
            plane_wave_overlap(1.0, 1.0, OverlapMode::Numeric { window: 0.0 }),
            Err(Error::Domain(_))
        ));
        assert!(plane_wave_overlap(1.0, 1.0, OverlapMode::Numeric { window: -3.0 }).is_err());
    }

    #[test]
    fn numeric_overlap_tiny_detuning_is_near_one() {
        let v = plane_wave_overlap(1.0, 1.0 + 1e-14, OverlapMode::Numeric { window: 1.0 }).unwrap();
        assert!((v - ONE).norm() < 1e-13);
    }

    #[test]
    fn normalized_phasor_has_unit_norm() {
        let p = PolarizationPhasor::normalized(Complex64::new(3.0, 1.0), Complex64::new(-2.0, 0.5))
            .unwrap();
        assert!((p.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(PolarizationPhasor::normalized(ZERO, ZERO).is_err());
    }

    #[test]
    fn traveling_mode_invariants() {
        let amp = PolarizationPhasor::new(ONE, ZERO);
        let m = TravelingMode::with_speed(2.0, 7.0 * PI + 0.25, amp, 3.0).unwrap();
        assert_eq!(m.angular_frequency(), 6.0);
        assert!((m.phase_offset() - (PI + 0.25)).abs() < 1e-12);
        assert!((0.0..TAU).contains(&m.phase_offset()));
        assert!(TravelingMode::new(0.0, 0.0, amp).is_err());
        assert!(TravelingMode::new(-1.0, 0.0, amp).is_err());
    }

    #[test]
    fn real_field_reproduces_cos_sin_form() {
        // E_x cos(phase) + E_y sin(phase) corresponds to phasor (E_x, -i E_y)
        let (ex, ey) = (0.7, 1.3);
        let m = TravelingMode::new(
            1.7,
            0.3,
            PolarizationPhasor::new(Complex64::new(ex, 0.0), Complex64::new(0.0, -ey)),
        )
        .unwrap();
        for &(z, t) in &[(0.0, 0.0), (1.2, 0.4), (-3.0, 2.5)] {
            let ph = 1.7 * z - 1.7 * t + 0.3;
            let f = m.real_field(z, t);
            assert!((f[0] - ex * ph.cos()).abs() < 1e-12);
            assert!((f[1] - ey * ph.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn orientation_of_linear_and_circular() {
        let p = PolarizationPhasor::linear(0.4);
        assert!((p.orientation(1e-9).unwrap() - 0.4).abs() < 1e-12);
        let c = PolarizationPhasor::new(
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, FRAC_1_SQRT_2),
        );
        assert!(c.orientation(1e-9).is_none());
        assert!(PolarizationPhasor::default().orientation(1e-9).is_none());
    }

    fn complex() -> impl Strategy<Value = Complex64> {
        (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b)| Complex64::new(a, b))
    }

    proptest! {
        #[test]
        fn multiplication_associative_commutative(a in complex(), b in complex(), c in complex()) {
            let scale = a.norm() * b.norm() * c.norm() + 1e-300;
            prop_assert!(((a * b) * c - a * (b * c)).norm() <= 1e-12 * scale);
            prop_assert!((a * b - b * a).norm() <= 1e-12 * (a.norm() * b.norm() + 1e-300));
        }

        #[test]
        fn modulus_finite_non_negative(a in complex()) {
            prop_assert!(a.norm().is_finite() && a.norm() >= 0.0);
        }

        #[test]
        fn numeric_overlap_decay_bound(k1 in 0.1..10.0f64, k2 in 0.1..10.0f64, w in 1.0..1e5f64) {
            prop_assume!((k1 - k2).abs() > 1e-6);
            let v = plane_wave_overlap(k1, k2, OverlapMode::Numeric { window: w }).unwrap();
            prop_assert!(v.norm() <= 2.0 / ((k1 - k2).abs() * w) + 1e-12);
            prop_assert!(v.norm() <= 1.0 + 1e-12);
        }
    }
}
