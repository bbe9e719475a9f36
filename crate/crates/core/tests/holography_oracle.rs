use std::f64::consts::PI;

use phasorlab_core::holography::{
    alias_intervals, density_by_channel_count, forward_bit, localize, observe, FrequencyChannel,
};
use phasorlab_core::rng::Stream;

fn channels(multiples: &[u32], base: f64) -> Vec<FrequencyChannel> {
    multiples
        .iter()
        .map(|&m| FrequencyChannel::harmonic(m, base).unwrap())
        .collect()
}

#[test]
fn random_trials_always_contain_the_source() {
    let mut rng = Stream::derive(11, "holo-test", 0);
    let domain = (-20.0, 20.0);
    for _ in 0..300 {
        let z = domain.0 + (domain.1 - domain.0) * rng.uniform();
        let alpha = 2.0 * PI * rng.uniform();
        let detectors: Vec<f64> = (0..1 + (rng.next_u64() % 3) as usize)
            .map(|_| 30.0 * rng.uniform() - 15.0)
            .collect();
        let count = 1 + (rng.next_u64() % 4) as u32;
        let chans = channels(&(1..=count).map(|m| m * 2 + 1).collect::<Vec<_>>(), 1.3);
        let bits = observe(z, &detectors, &chans, alpha);
        let loc = localize(&bits, &chans, alpha, domain).unwrap();
        assert!(loc.aliases.contains(z), "source {z} lost");
    }
}

#[test]
fn interval_sets_agree_with_dense_forward_scan() {
    let mut rng = Stream::derive(12, "holo-test", 0);
    let domain = (0.0, 6.0);
    for _ in 0..40 {
        let chan = FrequencyChannel::harmonic(1 + (rng.next_u64() % 5) as u32, 1.0).unwrap();
        let alpha = 2.0 * PI * rng.uniform();
        let zd = 10.0 * rng.uniform() - 5.0;
        let bit = forward_bit(6.0 * rng.uniform(), zd, &chan, alpha);
        let set = alias_intervals(&bit, &chan, alpha, domain).unwrap();
        let step = chan.wavelength() / 1000.0;
        let n = ((domain.1 - domain.0) / step) as usize;
        let mut hits = 0usize;
        for j in 0..n {
            let z = domain.0 + (j as f64 + 0.5) * step;
            let same = forward_bit(z, zd, &chan, alpha).parity == bit.parity;
            assert_eq!(same, set.contains(z), "z = {z}");
            hits += same as usize;
        }
        assert!(
            (hits as f64 * step - set.measure()).abs() <= 2.0 * step * set.intervals().len() as f64
        );
    }
}

#[test]
fn density_is_half_then_non_increasing() {
    let chans = channels(&[3, 5, 7, 11, 13], 2.0);
    let dens = density_by_channel_count(&chans, (0.0, 40.0)).unwrap();
    assert!((dens[0].1 - 0.5).abs() < 1e-12);
    for w in dens.windows(2) {
        assert!(w[1].1 <= w[0].1 + 1e-12);
    }
}
