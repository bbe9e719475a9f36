use phasorlab_core::cavity::{
    equilibrate, planck_expectation, spectrum_sweep, ModeFamily, ThermalBath,
};
use phasorlab_core::commutator::{commutator_scale_check, compare_pairs, ConjugatePair};
use phasorlab_core::rng::Stream;

fn unit_bath() -> ThermalBath {
    ThermalBath::new(1.0, 1.0, 1.0).unwrap()
}

#[test]
fn independent_chains_agree_within_combined_error() {
    let bath = unit_bath();
    let fam = ModeFamily::in_bath(1.0, &bath).unwrap();
    let a = equilibrate(
        &fam,
        &bath,
        300_000,
        5_000,
        &mut Stream::derive(1, "cavity", 0),
    )
    .unwrap();
    let b = equilibrate(
        &fam,
        &bath,
        300_000,
        5_000,
        &mut Stream::derive(2, "cavity", 0),
    )
    .unwrap();
    let sigma = a.std_error.hypot(b.std_error);
    assert!((a.mean_energy - b.mean_energy).abs() < 3.0 * sigma);
    assert_ne!(a.histogram, b.histogram);
}

#[test]
fn sweep_is_reproducible_and_order_preserving() {
    let bath = unit_bath();
    let freqs = [2.0, 0.5, 1.0];
    let a = spectrum_sweep(&freqs, &bath, 50_000, 1_000, 9).unwrap();
    let b = spectrum_sweep(&freqs, &bath, 50_000, 1_000, 9).unwrap();
    assert_eq!(a, b);
    for (row, f) in a.iter().zip(freqs) {
        assert_eq!(row.frequency, f);
        assert_eq!(
            row.closed_form,
            planck_expectation(f, &bath).unwrap().energy
        );
    }
}

#[test]
fn histogram_mass_equals_samples() {
    let bath = unit_bath();
    let fam = ModeFamily::in_bath(0.8, &bath).unwrap();
    let s = equilibrate(
        &fam,
        &bath,
        20_000,
        2_000,
        &mut Stream::derive(3, "cavity", 0),
    )
    .unwrap();
    assert_eq!(s.histogram.iter().sum::<u64>(), 18_000);
}

#[test]
fn si_bath_planck_scale() {
    let bath = ThermalBath::si(300.0).unwrap();
    let f = bath.frequency_for_ratio(1.0);
    let v = planck_expectation(f, &bath).unwrap();
    assert!((v.energy / bath.thermal_energy() - 1.0 / (std::f64::consts::E - 1.0)).abs() < 1e-12);
}

#[test]
#[ignore = "about 2e8 steps; run with --ignored"]
fn equipartition_limit() {
    let bath = unit_bath();
    let fam = ModeFamily::in_bath(0.01, &bath).unwrap();
    let s = equilibrate(
        &fam,
        &bath,
        200_000_000,
        1_000_000,
        &mut Stream::derive(1, "cavity", 0),
    )
    .unwrap();
    assert!((s.mean_energy - 1.0).abs() < 0.03);
}

#[test]
fn commutator_scale_is_shared() {
    let check = commutator_scale_check(16, 6.626_070_15e-34).unwrap();
    assert!(check.agreement < 1e-12);
    let p = ConjugatePair::ladder(8, 2.0, 1.0).unwrap();
    let q = p.rescaled(3.0);
    assert!(compare_pairs(&p, &q).unwrap().agreement < 1e-12);
}
