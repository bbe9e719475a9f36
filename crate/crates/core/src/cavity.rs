//! Thermalization of harmonic mode families by wall jitter.
//!
//! A family with base frequency `f` has members `f, 2f, 3f, ...`; at most one
//! member is energized, so the family state is a single occupancy `n` with
//! energy `n h f`. Wall jitter changes the antinode count by one, modelled as
//! a symmetric `n -> n ± 1` Metropolis proposal against the Boltzmann weight
//! `exp(-n h f / k_B T)`.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::rng::Stream;

/// Planck constant, J s (exact SI value).
pub const PLANCK_H: f64 = 6.626_070_15e-34;
/// Boltzmann constant, J/K (exact SI value).
pub const BOLTZMANN_K: f64 = 1.380_649e-23;

/// Reduced energies above this are treated as frozen out.
pub const OVERFLOW_RATIO: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalBath {
    temperature: f64,
    boltzmann_k: f64,
    planck_h: f64,
}

impl ThermalBath {
    pub fn new(temperature: f64, boltzmann_k: f64, planck_h: f64) -> Result<Self> {
        for (name, v) in [
            ("temperature", temperature),
            ("boltzmann_k", boltzmann_k),
            ("planck_h", planck_h),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            temperature,
            boltzmann_k,
            planck_h,
        })
    }

    /// Bath in SI units.
    pub fn si(temperature: f64) -> Result<Self> {
        Self::new(temperature, BOLTZMANN_K, PLANCK_H)
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn boltzmann_k(&self) -> f64 {
        self.boltzmann_k
    }

    pub fn planck_h(&self) -> f64 {
        self.planck_h
    }

    pub fn thermal_energy(&self) -> f64 {
        self.boltzmann_k * self.temperature
    }

    /// `h f / k_B T`.
    pub fn reduced_energy(&self, frequency: f64) -> f64 {
        self.planck_h * frequency / self.thermal_energy()
    }

    /// Frequency at which `h f / k_B T` equals `ratio`.
    pub fn frequency_for_ratio(&self, ratio: f64) -> f64 {
        ratio * self.thermal_energy() / self.planck_h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeFamily {
    base_frequency: f64,
    occupancy: u64,
    lobe_energy: f64,
}

impl ModeFamily {
    pub fn new(base_frequency: f64, planck_h: f64) -> Result<Self> {
        if !(base_frequency > 0.0 && base_frequency.is_finite()) {
            return Err(Error::Domain(format!(
                "frequency must be positive, got {base_frequency}"
            )));
        }
        if !(planck_h > 0.0) {
            return Err(Error::Domain("Planck constant must be positive".into()));
        }
        Ok(Self {
            base_frequency,
            occupancy: 0,
            lobe_energy: planck_h * base_frequency,
        })
    }

    pub fn in_bath(base_frequency: f64, bath: &ThermalBath) -> Result<Self> {
        Self::new(base_frequency, bath.planck_h)
    }

    pub fn with_occupancy(mut self, n: u64) -> Self {
        self.occupancy = n;
        self
    }

    pub fn base_frequency(&self) -> f64 {
        self.base_frequency
    }

    pub fn occupancy(&self) -> u64 {
        self.occupancy
    }

    pub fn lobe_energy(&self) -> f64 {
        self.lobe_energy
    }

    /// Frequency of harmonic member `m`.
    pub fn member_frequency(&self, m: u64) -> f64 {
        m as f64 * self.base_frequency
    }

    pub fn energy_of(&self, n: u64) -> f64 {
        n as f64 * self.lobe_energy
    }

    pub fn energy(&self) -> f64 {
        self.energy_of(self.occupancy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JitterStep {
    pub family: ModeFamily,
    pub proposal: Move,
    pub accepted: bool,
}

/// Metropolis acceptance probability for `from -> to`; zero for negative targets.
pub fn acceptance_probability(
    family: &ModeFamily,
    bath: &ThermalBath,
    from: u64,
    proposal: Move,
) -> f64 {
    match proposal {
        Move::Down if from == 0 => 0.0,
        Move::Down => 1.0,
        Move::Up => (-family.lobe_energy / bath.thermal_energy()).exp(),
    }
}

pub fn jitter_step(family: &ModeFamily, bath: &ThermalBath, rng: &mut Stream) -> ModeFamily {
    jitter_step_traced(
        family,
        (-family.lobe_energy / bath.thermal_energy()).exp(),
        rng,
    )
    .family
}

fn jitter_step_traced(family: &ModeFamily, up_prob: f64, rng: &mut Stream) -> JitterStep {
    let n = family.occupancy;
    if rng.coin() {
        let accepted = rng.uniform() < up_prob;
        JitterStep {
            family: if accepted {
                family.with_occupancy(n + 1)
            } else {
                *family
            },
            proposal: Move::Up,
            accepted,
        }
    } else {
        let accepted = n > 0;
        JitterStep {
            family: if accepted {
                family.with_occupancy(n - 1)
            } else {
                *family
            },
            proposal: Move::Down,
            accepted,
        }
    }
}

/// Adjacent-level transition check: the per-visit rate of `n -> n+1`
/// divided by that of `n+1 -> n`, which detailed balance fixes at
/// `exp(-h f / k_B T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowRatio {
    pub level: u64,
    pub ratio: f64,
    pub sigma: f64,
    pub expected: f64,
}

impl FlowRatio {
    pub fn deviation_sigmas(&self) -> f64 {
        (self.ratio - self.expected).abs() / self.sigma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareFit {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub samples: u64,
    /// Stride between the samples entering the test.
    pub thinning: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStatistics {
    /// Post-burn-in samples.
    pub steps: u64,
    pub histogram: Vec<u64>,
    /// Plain average of the sampled occupancies.
    pub sample_mean_occupancy: f64,
    /// Average of `E[n_{t+1} | n_t]` over the chain, a lower-variance
    /// estimator of the same stationary mean.
    pub mean_occupancy: f64,
    pub mean_energy: f64,
    /// Batch-means standard error of `mean_energy`.
    pub std_error: f64,
    pub acceptance_rate: f64,
    /// Integrated autocorrelation time of the occupancy, from batch means.
    pub autocorrelation_time: f64,
    visits: Vec<u64>,
    up_moves: Vec<u64>,
    down_moves: Vec<u64>,
    thinned: Vec<Vec<u64>>,
    lobe_energy: f64,
    reduced_energy: f64,
    final_family: ModeFamily,
}

const THINNING_LEVELS: usize = 16;
const BATCHES: u64 = 100;

impl ChainStatistics {
    pub fn final_family(&self) -> ModeFamily {
        self.final_family
    }

    /// Flow ratios for every level with at least `min_moves` moves each way.
    pub fn flow_ratios(&self, min_moves: u64) -> Vec<FlowRatio> {
        let expected = (-self.reduced_energy).exp();
        let mut out = Vec::new();
        for n in 0..self.up_moves.len() {
            let up = self.up_moves[n];
            let down = self.down_moves.get(n + 1).copied().unwrap_or(0);
            if up < min_moves || down < min_moves {
                continue;
            }
            let r_up = up as f64 / self.visits[n] as f64;
            let r_down = down as f64 / self.visits[n + 1] as f64;
            let ratio = r_up / r_down;
            let rel_var = (1.0 - r_up) / up as f64 + (1.0 - r_down) / down as f64;
            out.push(FlowRatio {
                level: n as u64,
                ratio,
                sigma: ratio * rel_var.sqrt(),
                expected,
            });
        }
        out
    }

    /// Pearson test of the occupancy histogram against `(1 - q) q^n`.
    ///
    /// Samples are thinned by the smallest power of two at least twice the
    /// autocorrelation time so that the entries are close to independent.
    /// Levels with fewer than five expected counts are pooled into the tail.
    pub fn chi_square_geometric(&self) -> ChiSquareFit {
        let want = (2.0 * self.autocorrelation_time).ceil().max(1.0) as u64;
        let level = (want.next_power_of_two().trailing_zeros() as usize).min(THINNING_LEVELS - 1);
        let hist = &self.thinned[level];
        let total: u64 = hist.iter().sum();
        let q = (-self.reduced_energy).exp();
        let mut statistic = 0.0;
        let mut bins = 0usize;
        let mut seen = 0u64;
        let mut mass = 0.0;
        let nf = total as f64;
        let mut n = 0usize;
        loop {
            let p = (1.0 - q) * q.powi(n as i32);
            let tail = 1.0 - mass - p;
            if nf * p < 5.0 || nf * tail < 5.0 {
                break;
            }
            let obs = hist.get(n).copied().unwrap_or(0) as f64;
            statistic += (obs - nf * p).powi(2) / (nf * p);
            seen += obs as u64;
            mass += p;
            bins += 1;
            n += 1;
        }
        let tail_p = 1.0 - mass;
        let tail_obs = (total - seen) as f64;
        if tail_p > 0.0 {
            statistic += (tail_obs - nf * tail_p).powi(2) / (nf * tail_p);
        }
        bins += 1;
        let dof = bins.saturating_sub(1);
        let p_value = if dof == 0 {
            1.0
        } else {
            1.0 - ChiSquared::new(dof as f64)
                .expect("positive dof")
                .cdf(statistic)
        };
        ChiSquareFit {
            statistic,
            dof,
            p_value,
            samples: total,
            thinning: 1 << level,
        }
    }
}

/// Run `steps` jitter steps, discarding the first `burn_in`.
pub fn equilibrate(
    family: &ModeFamily,
    bath: &ThermalBath,
    steps: u64,
    burn_in: u64,
    rng: &mut Stream,
) -> Result<ChainStatistics> {
    if steps <= burn_in {
        return Err(Error::Usage(format!(
            "no samples after burn-in ({steps} steps, {burn_in} burn-in)"
        )));
    }
    let samples = steps - burn_in;
    let x = family.lobe_energy / bath.thermal_energy();
    let up_prob = (-x).exp();
    let mut state = *family;
    for _ in 0..burn_in {
        state = jitter_step_traced(&state, up_prob, rng).family;
    }

    let batch_len = (samples / BATCHES).max(1);
    let mut batch_sums: Vec<f64> = Vec::with_capacity(BATCHES as usize + 1);
    let mut cond_batch_sums: Vec<f64> = Vec::with_capacity(BATCHES as usize + 1);
    let mut batch_acc = 0.0;
    let mut cond_acc = 0.0;
    let mut cond_sum = 0.0f64;
    let mut batch_fill = 0u64;

    let mut histogram: Vec<u64> = Vec::new();
    let mut visits: Vec<u64> = Vec::new();
    let mut up_moves: Vec<u64> = Vec::new();
    let mut down_moves: Vec<u64> = Vec::new();
    let mut thinned: Vec<Vec<u64>> = vec![Vec::new(); THINNING_LEVELS];
    let mut accepted = 0u64;
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;

    fn bump(v: &mut Vec<u64>, i: usize) {
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] += 1;
    }

    for t in 0..samples {
        let from = state.occupancy as usize;
        bump(&mut visits, from);
        let cond = from as f64 + 0.5 * up_prob - if from > 0 { 0.5 } else { 0.0 };
        cond_sum += cond;
        cond_acc += cond;
        let step = jitter_step_traced(&state, up_prob, rng);
        if step.accepted {
            accepted += 1;
            match step.proposal {
                Move::Up => bump(&mut up_moves, from),
                Move::Down => bump(&mut down_moves, from),
            }
        }
        state = step.family;
        let n = state.occupancy as usize;
        bump(&mut histogram, n);
        for (level, h) in thinned.iter_mut().enumerate() {
            if t & ((1u64 << level) - 1) != 0 {
                break;
            }
            bump(h, n);
        }
        let v = n as f64;
        sum += v;
        sum_sq += v * v;
        batch_acc += v;
        batch_fill += 1;
        if batch_fill == batch_len {
            batch_sums.push(batch_acc);
            cond_batch_sums.push(cond_acc);
            batch_acc = 0.0;
            cond_acc = 0.0;
            batch_fill = 0;
        }
    }

    let nf = samples as f64;
    let mean = sum / nf;
    let cond_mean = cond_sum / nf;
    let var = (sum_sq / nf - mean * mean).max(0.0);
    let batch_var = |sums: &[f64]| {
        let b = sums.len() as f64;
        let means: Vec<f64> = sums.iter().map(|s| s / batch_len as f64).collect();
        let m = means.iter().sum::<f64>() / b;
        means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (b - 1.0)
    };
    let (std_error_n, tau) = if batch_sums.len() >= 2 {
        let bvar = batch_var(&batch_sums);
        let tau = if var > 0.0 {
            (batch_len as f64 * bvar / var).max(1.0)
        } else {
            1.0
        };
        (
            (batch_var(&cond_batch_sums) / cond_batch_sums.len() as f64).sqrt(),
            tau,
        )
    } else {
        ((var / nf).sqrt(), 1.0)
    };

    let levels = histogram.len().max(visits.len()) + 1;
    visits.resize(levels, 0);
    up_moves.resize(levels, 0);
    down_moves.resize(levels, 0);

    Ok(ChainStatistics {
        steps: samples,
        histogram,
        sample_mean_occupancy: mean,
        mean_occupancy: cond_mean,
        mean_energy: cond_mean * family.lobe_energy,
        std_error: std_error_n * family.lobe_energy,
        acceptance_rate: accepted as f64 / nf,
        autocorrelation_time: tau,
        visits,
        up_moves,
        down_moves,
        thinned,
        lobe_energy: family.lobe_energy,
        reduced_energy: x,
        final_family: state,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanckValue {
    pub energy: f64,
    /// Set when `h f / k_B T` exceeds the overflow bound and the energy was flushed to zero.
    pub underflow: bool,
}

/// Mean family energy `h f / (exp(h f / k_B T) - 1)`.
pub fn planck_expectation(frequency: f64, bath: &ThermalBath) -> Result<PlanckValue> {
    if !(frequency > 0.0 && frequency.is_finite()) {
        return Err(Error::Domain(format!(
            "frequency must be positive, got {frequency}"
        )));
    }
    let x = bath.reduced_energy(frequency);
    if x > OVERFLOW_RATIO {
        return Ok(PlanckValue {
            energy: 0.0,
            underflow: true,
        });
    }
    let hf = bath.planck_h * frequency;
    Ok(PlanckValue {
        energy: hf / x.exp_m1(),
        underflow: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub frequency: f64,
    pub temperature: f64,
    pub mc_mean_energy: f64,
    pub mc_std_error: f64,
    pub closed_form: f64,
    pub rel_error: f64,
    pub acceptance_rate: f64,
    pub steps: u64,
    /// Label of the chain's random stream.
    pub stream: u64,
}

pub const SWEEP_ENGINE: &str = "cavity";

/// One independent chain per frequency; chain `i` draws from stream
/// `(master_seed, "cavity", i)`. Chains run concurrently; rows keep input order.
pub fn spectrum_sweep(
    frequencies: &[f64],
    bath: &ThermalBath,
    steps: u64,
    burn_in: u64,
    master_seed: u64,
) -> Result<Vec<SweepRow>> {
    if let Some(f) = frequencies.iter().find(|f| !(**f > 0.0 && f.is_finite())) {
        return Err(Error::Domain(format!(
            "frequency must be positive, got {f}"
        )));
    }
    if steps <= burn_in {
        return Err(Error::Usage(format!(
            "no samples after burn-in ({steps} steps, {burn_in} burn-in)"
        )));
    }
    let results: Vec<Result<(ChainStatistics, f64)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = frequencies
            .iter()
            .enumerate()
            .map(|(i, &f)| {
                scope.spawn(move || {
                    let mut rng = Stream::derive(master_seed, SWEEP_ENGINE, i as u64);
                    let family = ModeFamily::in_bath(f, bath)?;
                    let stats = equilibrate(&family, bath, steps, burn_in, &mut rng)?;
                    let exact = planck_expectation(f, bath)?.energy;
                    Ok((stats, exact))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("chain thread panicked"))
            .collect()
    });
    results
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let (stats, exact) = r?;
            Ok(SweepRow {
                frequency: frequencies[i],
                temperature: bath.temperature,
                mc_mean_energy: stats.mean_energy,
                mc_std_error: stats.std_error,
                closed_form: exact,
                rel_error: (stats.mean_energy - exact).abs() / exact,
                acceptance_rate: stats.acceptance_rate,
                steps: stats.steps,
                stream: crate::rng::stream_label(master_seed, SWEEP_ENGINE, i as u64),
            })
        })
        .collect()
}
