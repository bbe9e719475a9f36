//! Classical-wave coincidence amplitudes for circularly polarized photon pairs.
//!
//! Each photon is a traveling circular phasor `E (x ± i y)/sqrt(2) e^{ikz}`;
//! a detector is a unit linear analyzer phasor `(cos θ, sin θ) e^{ikz}`. The
//! pair amplitude is the sum over the two product terms of the state of the
//! per-detector overlaps, each of which is a plane-wave inner product along z.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cesaro::{cesaro_inner_product, Grid, SampledField};
use crate::error::{Error, Result};
use crate::phasor::{
    plane_wave_overlap, reduce_half_turn, ComplexAmplitude, OverlapMode, PolarizationPhasor, ONE,
    ZERO,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Handedness {
    Right,
    Left,
}

/// Circular polarization ket in its classical phasor form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircularKet {
    pub handedness: Handedness,
}

impl CircularKet {
    pub const RIGHT: Self = Self {
        handedness: Handedness::Right,
    };
    pub const LEFT: Self = Self {
        handedness: Handedness::Left,
    };

    /// `(x + i y)/sqrt(2)` for right, `(x - i y)/sqrt(2)` for left.
    pub fn phasor(&self) -> PolarizationPhasor {
        let s = FRAC_1_SQRT_2;
        match self.handedness {
            Handedness::Right => {
                PolarizationPhasor::new(Complex64::new(s, 0.0), Complex64::new(0.0, s))
            }
            Handedness::Left => {
                PolarizationPhasor::new(Complex64::new(s, 0.0), Complex64::new(0.0, -s))
            }
        }
    }

    pub fn flipped(&self) -> Self {
        match self.handedness {
            Handedness::Right => Self::LEFT,
            Handedness::Left => Self::RIGHT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Plus => 1.0,
            Parity::Minus => -1.0,
        }
    }
}

/// `|r1 r2> ± |l1 l2>` with per-photon field amplitude `field_scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonPairState {
    parity: Parity,
    field_scale: f64,
}

impl PhotonPairState {
    pub fn new(parity: Parity, field_scale: f64) -> Result<Self> {
        if !(field_scale > 0.0 && field_scale.is_finite()) {
            return Err(Error::Domain(format!(
                "field scale must be positive, got {field_scale}"
            )));
        }
        Ok(Self {
            parity,
            field_scale,
        })
    }

    pub fn plus(field_scale: f64) -> Result<Self> {
        Self::new(Parity::Plus, field_scale)
    }

    pub fn minus(field_scale: f64) -> Result<Self> {
        Self::new(Parity::Minus, field_scale)
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn field_scale(&self) -> f64 {
        self.field_scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Detector {
    One,
    Two,
}

/// Linear analyzer at one detector; the angle is an axis, kept in `[0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyzerSetting {
    detector: Detector,
    angle: f64,
    position: f64,
}

impl AnalyzerSetting {
    pub fn new(detector: Detector, angle: f64, position: f64) -> Result<Self> {
        if !angle.is_finite() || !position.is_finite() {
            return Err(Error::Domain(
                "analyzer angle and position must be finite".into(),
            ));
        }
        Ok(Self {
            detector,
            angle: reduce_half_turn(angle),
            position,
        })
    }

    /// Analyzer at the origin.
    pub fn at(detector: Detector, angle: f64) -> Result<Self> {
        Self::new(detector, angle, 0.0)
    }

    pub fn detector(&self) -> Detector {
        self.detector
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn position(&self) -> f64 {
        self.position
    }

    /// The complementary outcome channel of the same analyzer.
    pub fn orthogonal(&self) -> Self {
        Self {
            angle: reduce_half_turn(self.angle + FRAC_PI_2),
            ..*self
        }
    }

    fn bra(&self) -> PolarizationPhasor {
        PolarizationPhasor::linear(self.angle)
    }
}

/// Sign convention at detector 2.
///
/// `Sum` keeps the emitted handedness at both detectors and gives
/// `E = cos 2(θ1 + θ2)` for ψ⁺. `Difference` reads detector 2 in the mirrored
/// handedness frame, giving `cos 2(θ1 - θ2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Convention {
    #[default]
    Sum,
    Difference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericWindow {
    pub wavenumber: f64,
    /// Window length in wavelengths.
    pub wavelengths: f64,
    pub samples_per_wavelength: usize,
}

impl Default for NumericWindow {
    fn default() -> Self {
        Self {
            wavenumber: 2.0 * PI,
            wavelengths: 1.0e4,
            samples_per_wavelength: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum AmplitudeMode {
    #[default]
    Symbolic,
    Numeric(NumericWindow),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EprConfig {
    pub mode: AmplitudeMode,
    pub convention: Convention,
}

/// A two-photon field written as a sum of product terms.
#[derive(Debug, Clone, PartialEq)]
pub struct PairField {
    terms: Vec<(ComplexAmplitude, PolarizationPhasor, PolarizationPhasor)>,
}

impl PairField {
    pub fn from_state(pair: &PhotonPairState, convention: Convention) -> Self {
        let e = Complex64::new(pair.field_scale, 0.0);
        let at_two = |k: CircularKet| match convention {
            Convention::Sum => k,
            Convention::Difference => k.flipped(),
        };
        let term = |k: CircularKet| (k.phasor().scale(e), at_two(k).phasor().scale(e));
        let (r1, r2) = term(CircularKet::RIGHT);
        let (l1, l2) = term(CircularKet::LEFT);
        Self {
            terms: vec![
                (ONE, r1, r2),
                (Complex64::new(pair.parity.sign(), 0.0), l1, l2),
            ],
        }
    }

    pub fn new(terms: Vec<(ComplexAmplitude, PolarizationPhasor, PolarizationPhasor)>) -> Self {
        Self { terms }
    }

    /// Multiply both photons' kets by `phase` (a unit complex factor each).
    pub fn with_ket_phase(&self, phase: ComplexAmplitude) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(c, a, b)| (*c, a.scale(phase), b.scale(phase)))
                .collect(),
        }
    }

    /// Amplitude `<a1 a2 | field>`.
    pub fn amplitude(
        &self,
        a1: &AnalyzerSetting,
        a2: &AnalyzerSetting,
        mode: &AmplitudeMode,
    ) -> Result<ComplexAmplitude> {
        if a1.detector == a2.detector {
            return Err(Error::Usage("both outcomes name the same detector".into()));
        }
        let (d1, d2) = if a1.detector == Detector::One {
            (a1, a2)
        } else {
            (a2, a1)
        };
        let mut total = ZERO;
        for (coeff, ket1, ket2) in &self.terms {
            let o1 = detector_overlap(d1, ket1, mode)?;
            let o2 = detector_overlap(d2, ket2, mode)?;
            total += coeff * o1 * o2;
        }
        Ok(total)
    }
}

fn detector_overlap(
    analyzer: &AnalyzerSetting,
    ket: &PolarizationPhasor,
    mode: &AmplitudeMode,
) -> Result<ComplexAmplitude> {
    match mode {
        AmplitudeMode::Symbolic => {
            // detector and photon share the wavenumber
            let k = 1.0;
            Ok(analyzer.bra().dot(ket) * plane_wave_overlap(k, k, OverlapMode::Symbolic)?)
        }
        AmplitudeMode::Numeric(w) => {
            if !(w.wavenumber > 0.0 && w.wavelengths > 0.0 && w.samples_per_wavelength >= 2) {
                return Err(Error::Domain("invalid numeric window configuration".into()));
            }
            let wavelength = 2.0 * PI / w.wavenumber;
            let window = w.wavelengths * wavelength;
            let grid = Grid::covering(
                analyzer.position,
                window,
                w.samples_per_wavelength as f64 / wavelength,
            )?;
            let bra = SampledField::plane_wave(grid, w.wavenumber, analyzer.bra());
            let field = SampledField::plane_wave(grid, w.wavenumber, *ket);
            cesaro_inner_product(&bra, &field, window)
        }
    }
}

/// Coincidence amplitude `<θ1 θ2 | ψ±>`.
pub fn pair_amplitude(
    outcome1: &AnalyzerSetting,
    outcome2: &AnalyzerSetting,
    pair: &PhotonPairState,
    config: &EprConfig,
) -> Result<ComplexAmplitude> {
    PairField::from_state(pair, config.convention).amplitude(outcome1, outcome2, &config.mode)
}

/// Amplitudes and probabilities of the four joint outcomes of two analyzers.
///
/// Index order is `[xx, xy, yx, yy]`, where `x` is the outcome parallel to
/// the analyzer axis and `y` the orthogonal one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeTable {
    pub amplitudes: [ComplexAmplitude; 4],
    pub probabilities: [f64; 4],
}

impl OutcomeTable {
    pub fn correlation(&self) -> f64 {
        let p = &self.probabilities;
        (p[0] + p[3]) - (p[1] + p[2])
    }

    /// Detector-1 distribution `[P(x), P(y)]` summed over detector 2.
    pub fn marginal_one(&self) -> [f64; 2] {
        let p = &self.probabilities;
        [p[0] + p[1], p[2] + p[3]]
    }

    pub fn marginal_two(&self) -> [f64; 2] {
        let p = &self.probabilities;
        [p[0] + p[2], p[1] + p[3]]
    }
}

pub fn outcome_table_for(
    field: &PairField,
    a1: &AnalyzerSetting,
    a2: &AnalyzerSetting,
    mode: &AmplitudeMode,
) -> Result<OutcomeTable> {
    let settings = [
        (*a1, *a2),
        (*a1, a2.orthogonal()),
        (a1.orthogonal(), *a2),
        (a1.orthogonal(), a2.orthogonal()),
    ];
    let mut amplitudes = [ZERO; 4];
    for (slot, (s1, s2)) in amplitudes.iter_mut().zip(settings.iter()) {
        *slot = field.amplitude(s1, s2, mode)?;
    }
    let total: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if !(total > 0.0) {
        return Err(Error::Degenerate(
            "all four outcome amplitudes vanish".into(),
        ));
    }
    let mut probabilities = [0.0; 4];
    for (p, a) in probabilities.iter_mut().zip(amplitudes.iter()) {
        *p = a.norm_sqr() / total;
    }
    Ok(OutcomeTable {
        amplitudes,
        probabilities,
    })
}

pub fn outcome_table(
    theta1: f64,
    theta2: f64,
    pair: &PhotonPairState,
    config: &EprConfig,
) -> Result<OutcomeTable> {
    let a1 = AnalyzerSetting::at(Detector::One, theta1)?;
    let a2 = AnalyzerSetting::at(Detector::Two, theta2)?;
    outcome_table_for(
        &PairField::from_state(pair, config.convention),
        &a1,
        &a2,
        &config.mode,
    )
}

/// Joint probability of `(outcome1, outcome2)`, normalized over the four
/// outcomes of the two analyzers.
pub fn coincidence_probability(
    outcome1: &AnalyzerSetting,
    outcome2: &AnalyzerSetting,
    pair: &PhotonPairState,
    config: &EprConfig,
) -> Result<f64> {
    let field = PairField::from_state(pair, config.convention);
    let table = outcome_table_for(&field, outcome1, outcome2, &config.mode)?;
    Ok(table.probabilities[0])
}

/// `P(same) - P(different)` for analyzers at `theta1`, `theta2`.
pub fn correlation_e(
    theta1: f64,
    theta2: f64,
    pair: &PhotonPairState,
    config: &EprConfig,
) -> Result<f64> {
    Ok(outcome_table(theta1, theta2, pair, config)?.correlation())
}

/// `E(a,b) - E(a,b') + E(a',b) + E(a',b')` for an arbitrary correlation function.
pub fn chsh_combination(
    correlation: impl Fn(f64, f64) -> f64,
    a: f64,
    a_prime: f64,
    b: f64,
    b_prime: f64,
) -> f64 {
    correlation(a, b) - correlation(a, b_prime)
        + correlation(a_prime, b)
        + correlation(a_prime, b_prime)
}

pub fn chsh_s(
    a: f64,
    a_prime: f64,
    b: f64,
    b_prime: f64,
    pair: &PhotonPairState,
    config: &EprConfig,
) -> Result<f64> {
    let mut out = [0.0; 4];
    for (slot, (x, y)) in
        out.iter_mut()
            .zip([(a, b), (a, b_prime), (a_prime, b), (a_prime, b_prime)])
    {
        *slot = correlation_e(x, y, pair, config)?;
    }
    Ok(out[0] - out[1] + out[2] + out[3])
}

/// Angles `(a, a', b, b')` maximizing `S` for ψ⁺ under `convention`.
pub fn optimal_chsh_angles(convention: Convention) -> [f64; 4] {
    match convention {
        Convention::Sum => [0.0, FRAC_PI_4, -FRAC_PI_8, -3.0 * FRAC_PI_8],
        Convention::Difference => [0.0, FRAC_PI_4, FRAC_PI_8, 3.0 * FRAC_PI_8],
    }
}

/// The x/y amplitude table `[<x1 y2|ψ>, <x1 x2|ψ>]`.
pub fn xy_amplitudes(pair: &PhotonPairState, config: &EprConfig) -> Result<[ComplexAmplitude; 2]> {
    let x1 = AnalyzerSetting::at(Detector::One, 0.0)?;
    let x2 = AnalyzerSetting::at(Detector::Two, 0.0)?;
    let y2 = AnalyzerSetting::at(Detector::Two, FRAC_PI_2)?;
    Ok([
        pair_amplitude(&x1, &y2, pair, config)?,
        pair_amplitude(&x1, &x2, pair, config)?,
    ])
}
