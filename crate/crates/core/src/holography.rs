//! One-bit holographic source localization on a line.
//!
//! A detection at `z_d` of a wave emitted at `z_s` yields one bit: the parity
//! of the half-wavelength interval, counted from the source, that contains
//! the detector. Inverting a bit gives a periodic alias set of half-wave
//! intervals; bits from several frequency channels and detectors are
//! intersected to localize the source.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phasor::DEFAULT_SPEED;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyChannel {
    index: u32,
    wavenumber: f64,
    angular_frequency: f64,
}

impl FrequencyChannel {
    pub fn new(index: u32, wavenumber: f64) -> Result<Self> {
        Self::with_speed(index, wavenumber, DEFAULT_SPEED)
    }

    pub fn with_speed(index: u32, wavenumber: f64, speed: f64) -> Result<Self> {
        if index == 0 {
            return Err(Error::Domain("channel index starts at 1".into()));
        }
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
        Ok(Self {
            index,
            wavenumber,
            angular_frequency: speed * wavenumber,
        })
    }

    /// Channel at harmonic `multiple` of a base wavelength; the index is the multiple.
    pub fn harmonic(multiple: u32, base_wavelength: f64) -> Result<Self> {
        if !(base_wavelength > 0.0 && base_wavelength.is_finite()) {
            return Err(Error::Domain(format!(
                "wavelength must be positive, got {base_wavelength}"
            )));
        }
        Self::new(multiple, 2.0 * PI * multiple as f64 / base_wavelength)
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    pub fn angular_frequency(&self) -> f64 {
        self.angular_frequency
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.wavenumber
    }

    fn half_wavelength(&self) -> f64 {
        PI / self.wavenumber
    }
}

/// Even half-wave interval (reported as a `y` detection) or odd (`x`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BitParity {
    Even,
    Odd,
}

impl BitParity {
    pub fn from_index(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Self::Even
        } else {
            Self::Odd
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Self::Even => 0,
            Self::Odd => 1,
        }
    }

    pub fn from_u8(p: u8) -> Result<Self> {
        match p {
            0 => Ok(Self::Even),
            1 => Ok(Self::Odd),
            other => Err(Error::Domain(format!(
                "parity bit must be 0 or 1, got {other}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionBit {
    pub detector: f64,
    pub channel: u32,
    pub parity: BitParity,
}

/// Closed-interval view of a half-open alias interval `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(Error::Domain(format!(
                "empty or unbounded domain [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn contains(&self, z: f64, eps: f64) -> bool {
        z >= self.lo - eps && z <= self.hi + eps
    }
}

/// Disjoint sorted intervals inside a finite domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AliasSet {
    intervals: Vec<Interval>,
    domain: Interval,
    eps: f64,
}

impl AliasSet {
    pub fn full(domain: Interval, eps: f64) -> Self {
        Self {
            intervals: vec![domain],
            domain,
            eps,
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::len).sum()
    }

    /// Membership with the boundary tolerance used to build the set.
    pub fn contains(&self, z: f64) -> bool {
        let idx = self.intervals.partition_point(|iv| iv.hi + self.eps < z);
        self.intervals
            .get(idx)
            .is_some_and(|iv| iv.contains(z, self.eps))
    }

    /// Pieces of the intersection shorter than the tolerance are dropped.
    pub fn intersect(&self, other: &Self) -> Self {
        let eps = self.eps.max(other.eps);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let a = self.intervals[i];
            let b = other.intervals[j];
            let lo = a.lo.max(b.lo);
            let hi = a.hi.min(b.hi);
            if hi - lo > eps {
                out.push(Interval { lo, hi });
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self {
            intervals: out,
            domain: self.domain,
            eps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoloConfig {
    /// Boundary tolerance in units of the shortest wavelength in play.
    pub boundary_eps: f64,
}

impl Default for HoloConfig {
    fn default() -> Self {
        Self { boundary_eps: 1e-9 }
    }
}

/// Parity bit recorded at `z_detector` for a source at `z_source`.
pub fn forward_bit(
    z_source: f64,
    z_detector: f64,
    channel: &FrequencyChannel,
    alpha: f64,
) -> DetectionBit {
    let phase = channel.wavenumber * (z_detector - z_source) + alpha;
    let n = (phase / PI).floor() as i64;
    DetectionBit {
        detector: z_detector,
        channel: channel.index,
        parity: BitParity::from_index(n),
    }
}

/// Bits seen by every detector on every channel.
pub fn observe(
    z_source: f64,
    detectors: &[f64],
    channels: &[FrequencyChannel],
    alpha: f64,
) -> Vec<DetectionBit> {
    channels
        .iter()
        .flat_map(|ch| {
            detectors
                .iter()
                .map(move |&zd| forward_bit(z_source, zd, ch, alpha))
        })
        .collect()
}

/// All source positions in `domain` that reproduce `bit`.
pub fn alias_intervals(
    bit: &DetectionBit,
    channel: &FrequencyChannel,
    alpha: f64,
    domain: (f64, f64),
) -> Result<AliasSet> {
    alias_intervals_with(bit, channel, alpha, domain, &HoloConfig::default())
}

pub fn alias_intervals_with(
    bit: &DetectionBit,
    channel: &FrequencyChannel,
    alpha: f64,
    domain: (f64, f64),
    config: &HoloConfig,
) -> Result<AliasSet> {
    let domain = Interval::new(domain.0, domain.1)?;
    if bit.channel != channel.index {
        return Err(Error::Usage(format!(
            "bit for channel {} inverted with channel {}",
            bit.channel, channel.index
        )));
    }
    let eps = config.boundary_eps * channel.wavelength();
    Ok(alias_set(bit, channel, alpha, domain, eps))
}

fn alias_set(
    bit: &DetectionBit,
    channel: &FrequencyChannel,
    alpha: f64,
    domain: Interval,
    eps: f64,
) -> AliasSet {
    let half = channel.half_wavelength();
    let k = channel.wavenumber;
    let zd = bit.detector;
    let shift = alpha / k;
    // Interval m (source side): (zd + shift - (m+1) half, zd + shift - m half]
    let m_lo = (((zd - domain.hi) * k + alpha) / PI).floor() as i64 - 1;
    let m_hi = (((zd - domain.lo) * k + alpha) / PI).ceil() as i64 + 1;
    let wanted = bit.parity.as_u8() as i64;
    let mut intervals = Vec::new();
    for m in (m_lo..=m_hi).rev() {
        if m.rem_euclid(2) != wanted {
            continue;
        }
        let hi = zd + shift - m as f64 * half;
        let lo = hi - half;
        let lo = lo.max(domain.lo);
        let hi = hi.min(domain.hi);
        if hi - lo > eps {
            intervals.push(Interval { lo, hi });
        }
    }
    AliasSet {
        intervals,
        domain,
        eps,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Localization {
    pub aliases: AliasSet,
    /// Smallest half-wavelength among the channels used.
    pub granularity: f64,
}

/// Intersection of the alias sets of all `bits`.
pub fn localize(
    bits: &[DetectionBit],
    channels: &[FrequencyChannel],
    alpha: f64,
    domain: (f64, f64),
) -> Result<Localization> {
    localize_with(bits, channels, alpha, domain, &HoloConfig::default())
}

pub fn localize_with(
    bits: &[DetectionBit],
    channels: &[FrequencyChannel],
    alpha: f64,
    domain: (f64, f64),
    config: &HoloConfig,
) -> Result<Localization> {
    let domain = Interval::new(domain.0, domain.1)?;
    if channels.is_empty() {
        return Err(Error::Usage(
            "at least one frequency channel is required".into(),
        ));
    }
    let min_wavelength = channels
        .iter()
        .map(FrequencyChannel::wavelength)
        .fold(f64::INFINITY, f64::min);
    let eps = config.boundary_eps * min_wavelength;
    let mut acc = AliasSet::full(domain, eps);
    for bit in bits {
        let channel = channels
            .iter()
            .find(|c| c.index == bit.channel)
            .ok_or_else(|| {
                Error::Usage(format!("bit references unknown channel {}", bit.channel))
            })?;
        acc = acc.intersect(&alias_set(bit, channel, alpha, domain, eps));
        if acc.is_empty() {
            return Err(Error::InconsistentBits);
        }
    }
    let granularity = bits
        .iter()
        .filter_map(|b| channels.iter().find(|c| c.index == b.channel))
        .map(FrequencyChannel::half_wavelength)
        .fold(f64::INFINITY, f64::min);
    Ok(Localization {
        aliases: acc,
        granularity: if granularity.is_finite() {
            granularity
        } else {
            domain.len()
        },
    })
}

/// True when the bits share at least one source position in `domain`.
pub fn bits_consistent(
    bits: &[DetectionBit],
    channels: &[FrequencyChannel],
    alpha: f64,
    domain: (f64, f64),
) -> Result<bool> {
    match localize(bits, channels, alpha, domain) {
        Ok(_) => Ok(true),
        Err(Error::InconsistentBits) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Source and detector layout used to measure alias density.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceGeometry {
    pub source: f64,
    pub detectors: Vec<f64>,
    pub alpha: f64,
}

impl ReferenceGeometry {
    /// Source at the domain midpoint, one detector at the lower edge, zero phase.
    pub fn for_domain(domain: (f64, f64)) -> Self {
        Self {
            source: 0.5 * (domain.0 + domain.1),
            detectors: vec![domain.0],
            alpha: 0.0,
        }
    }
}

/// Fraction of the domain still compatible with the reference observation.
pub fn alias_density(channels: &[FrequencyChannel], domain: (f64, f64)) -> Result<f64> {
    alias_density_with(channels, domain, &ReferenceGeometry::for_domain(domain))
}

pub fn alias_density_with(
    channels: &[FrequencyChannel],
    domain: (f64, f64),
    reference: &ReferenceGeometry,
) -> Result<f64> {
    let bits = observe(
        reference.source,
        &reference.detectors,
        channels,
        reference.alpha,
    );
    let loc = localize(&bits, channels, reference.alpha, domain)?;
    Ok(loc.aliases.measure() / (domain.1 - domain.0))
}

/// Density after the first `1..=channels.len()` channels.
pub fn density_by_channel_count(
    channels: &[FrequencyChannel],
    domain: (f64, f64),
) -> Result<Vec<(usize, f64)>> {
    (1..=channels.len())
        .map(|n| Ok((n, alias_density(&channels[..n], domain)?)))
        .collect()
}
