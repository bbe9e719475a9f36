use std::io::Write;
use std::process::Command;

use phasorlab_cli::{run, schema, RunConfig};
use phasorlab_core::holography::{forward_bit, localize, FrequencyChannel};
use proptest::prelude::*;
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["phasorlab"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    (
        header,
        lines
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect(),
    )
}

#[test]
fn xy_outcome_has_zero_probability() {
    let (code, out, _) = invoke(&["epr", "--theta1", "0", "--theta2", "90", "--parity", "plus"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let p_xx: f64 = rows[0][col("p_xx")].parse().unwrap();
    assert!(p_xx < 1e-30);
    let e: f64 = rows[0][col("correlation")].parse().unwrap();
    assert!((e + 1.0).abs() < 1e-15);
}

#[test]
fn epr_rows_are_the_cartesian_product_in_order() {
    let (_, out, _) = invoke(&["epr", "--theta1", "0,10", "--theta2", "5,15,25"]);
    let (_, rows) = csv_rows(&out);
    let pairs: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap()))
        .collect();
    assert_eq!(
        pairs,
        vec![
            (0.0, 5.0),
            (0.0, 15.0),
            (0.0, 25.0),
            (10.0, 5.0),
            (10.0, 15.0),
            (10.0, 25.0)
        ]
    );
}

#[test]
fn cavity_row_has_nine_columns() {
    let (code, out, _) = invoke(&[
        "cavity",
        "--hf-over-kt",
        "1",
        "--steps",
        "20000",
        "--burn-in",
        "100",
    ]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(
        header,
        [
            "f",
            "T",
            "mc_mean_energy",
            "mc_std_error",
            "closed_form",
            "rel_error",
            "acceptance_rate",
            "steps",
            "seed"
        ]
    );
    assert_eq!(rows[0].len(), 9);
    assert_eq!(rows[0][7], "19900");
}

#[test]
fn cavity_seed_changes_output_and_repeats_exactly() {
    let a = invoke(&[
        "cavity",
        "--hf-over-kt",
        "1",
        "--steps",
        "1000000",
        "--seed",
        "42",
    ]);
    let b = invoke(&[
        "cavity",
        "--hf-over-kt",
        "1",
        "--steps",
        "1000000",
        "--seed",
        "42",
    ]);
    let c = invoke(&[
        "cavity",
        "--hf-over-kt",
        "1",
        "--steps",
        "1000000",
        "--seed",
        "43",
    ]);
    assert_eq!(a, b);
    assert_ne!(a.1, c.1);
}

#[test]
fn json_and_csv_agree() {
    let cases: [&[&str]; 4] = [
        &["epr", "--theta1", "0,17,33.3", "--theta2", "12,80"],
        &["cavity", "--hf-over-kt", "0.5,2", "--steps", "30000"],
        &["hj", "--system", "linear", "--points", "41"],
        &[
            "evolve",
            "--system",
            "schrodinger",
            "--hamiltonian",
            "0,1;1,0",
            "--hamiltonian-im",
            "0,0.5;-0.5,0",
            "--psi0",
            "0.6,0.8",
            "--dt",
            "0.1",
            "--steps",
            "20",
        ],
    ];
    for args in cases {
        let (_, csv, _) = invoke(args);
        let mut json_args = args.to_vec();
        json_args.extend_from_slice(&["--format", "json"]);
        let (code, json, _) = invoke(&json_args);
        assert_eq!(code, 0);
        let (header, rows) = csv_rows(&csv);
        let parsed: Value = serde_json::from_str(&json).unwrap();
        let objects = parsed.as_array().unwrap();
        assert_eq!(objects.len(), rows.len());
        for (row, obj) in rows.iter().zip(objects) {
            for (name, cell) in header.iter().zip(row) {
                let a: f64 = cell.parse().unwrap();
                let b = obj[name].as_f64().unwrap();
                assert!(
                    (a - b).abs() <= 1e-15 * a.abs().max(b.abs()),
                    "{name}: {a} vs {b}"
                );
            }
        }
    }
}

#[test]
fn config_file_with_flag_override() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# pair scan\ntheta1 = 0\ntheta2 = 90\nparity = minus").unwrap();
    let path = file.path().to_str().unwrap();
    let (_, from_file, _) = invoke(&["epr", "--config", path]);
    let (_, direct, _) = invoke(&[
        "epr", "--theta1", "0", "--theta2", "90", "--parity", "minus",
    ]);
    assert_eq!(from_file, direct);
    let (_, overridden, _) = invoke(&["epr", "--config", path, "--parity", "plus"]);
    let (_, plus, _) = invoke(&["epr", "--theta1", "0", "--theta2", "90"]);
    assert_eq!(overridden, plus);
}

#[test]
fn usage_errors_exit_two_and_name_the_key() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "temprature = 4").unwrap();
    let (code, _, err) = invoke(&["cavity", "--config", file.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("temprature"));
    for (args, key) in [
        (
            &["cavity", "--hf-over-kt", "1", "--steps", "ten"][..],
            "steps",
        ),
        (
            &[
                "cavity",
                "--hf-over-kt",
                "1",
                "--steps",
                "10",
                "--burn-in",
                "10",
            ][..],
            "steps",
        ),
        (&["epr", "--convention", "sideways"][..], "convention"),
        (&["holo", "--harmonics", "1"][..], "source"),
        (&["holo", "--harmonics", "1", "--bits", "2:0:1"][..], "bits"),
        (
            &["evolve", "--coefficients", "1,1", "--t-end", "1"][..],
            "initial",
        ),
        (
            &["evolve", "--system", "schrodinger", "--t-end", "1"][..],
            "t-end",
        ),
    ] {
        let (code, _, err) = invoke(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(err.contains(key), "{args:?}: {err}");
    }
    assert_eq!(invoke(&["nonsense"]).0, 2);
    assert_eq!(invoke(&["cavity", "--unknown", "1"]).0, 2);
}

#[test]
fn contradictory_bits_exit_one() {
    let harmonics = [1u32, 3, 5, 7];
    let ch: Vec<_> = harmonics
        .iter()
        .map(|&m| FrequencyChannel::harmonic(m, 1.0).unwrap())
        .collect();
    let domain = (-5.0, 5.0);
    let mut bits: Vec<(u32, _)> = Vec::new();
    for (m, c) in harmonics.iter().zip(&ch) {
        for det in [0.0, 1.1] {
            bits.push((*m, forward_bit(0.1, det, c, 0.0)));
        }
    }
    let a: Vec<_> = bits.iter().map(|(_, b)| *b).collect();
    assert!(localize(&a, &ch, 0.0, domain).is_ok());
    // brute-force a second source whose single bit rules out every alias of the first
    let mut found = None;
    'search: for j in 0..2_000 {
        let z = domain.0 + (domain.1 - domain.0) * j as f64 / 2_000.0;
        for (m, c) in harmonics.iter().zip(&ch) {
            let b = forward_bit(z, 0.37, c, 0.0);
            let mut all = a.clone();
            all.push(b);
            if localize(&all, &ch, 0.0, domain).is_err() {
                found = Some((*m, b));
                break 'search;
            }
        }
    }
    bits.push(found.expect("contradictory source"));
    let bit_list: Vec<String> = bits
        .iter()
        .map(|(m, b)| format!("{m}:{}:{}", b.detector, b.parity.as_u8()))
        .collect();
    let (code, out, err) = invoke(&[
        "holo",
        "--harmonics",
        "1,3,5,7",
        "--bits",
        &bit_list.join(","),
    ]);
    assert_eq!(code, 1, "{err}");
    assert!(out.is_empty());
    assert!(err.contains("inconsistent bits"));
}

#[test]
fn holo_source_output_contains_source() {
    let (code, out, _) = invoke(&[
        "holo",
        "--harmonics",
        "1,3,5",
        "--source",
        "1.234",
        "--detectors",
        "0,-2.5",
    ]);
    assert_eq!(code, 0);
    let (_, rows) = csv_rows(&out);
    assert!(rows.iter().any(|r| {
        let (lo, hi): (f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        lo <= 1.234 && 1.234 <= hi
    }));
}

#[test]
fn engine_errors_exit_one() {
    let (code, _, err) = invoke(&[
        "hj", "--system", "linear", "--energy", "1", "--alpha", "1", "--q-hi", "5",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("turning point"));
    let (code, _, _) = invoke(&[
        "evolve",
        "--coefficients",
        "100,0,1",
        "--initial",
        "1,0",
        "--t-end",
        "1",
        "--step",
        "0.5",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn out_path_and_unwritable_path() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("rows.csv");
    let (code, out, _) = invoke(&["epr", "--out", target.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let (_, direct, _) = invoke(&["epr"]);
    assert_eq!(std::fs::read_to_string(&target).unwrap(), direct);
    let bad = dir.path().join("missing").join("rows.csv");
    assert_eq!(invoke(&["epr", "--out", bad.to_str().unwrap()]).0, 1);
}

#[test]
fn help_lists_every_key() {
    for (name, _, keys) in schema::SUBCOMMANDS {
        let (code, out, _) = invoke(&[name, "--help"]);
        assert_eq!(code, 0);
        for k in schema::COMMON.iter().chain(keys.iter()) {
            assert!(
                out.contains(&format!("--{}", k.name)),
                "{name} help lacks {}",
                k.name
            );
        }
        assert!(out.contains("--config"));
    }
}

#[test]
fn binary_matches_library_entry_point() {
    let exe = env!("CARGO_BIN_EXE_phasorlab");
    let out = Command::new(exe)
        .args(["hj", "--points", "9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        invoke(&["hj", "--points", "9"]).1
    );
    let out = Command::new(exe)
        .args(["cavity", "--frequencies", "-1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

fn value_for(kind: schema::Kind) -> BoxedStrategy<String> {
    use schema::Kind;
    match kind {
        Kind::Real => (-1e6..1e6f64).prop_map(|x| x.to_string()).boxed(),
        Kind::Count => (0..1_000_000u64).prop_map(|x| x.to_string()).boxed(),
        Kind::RealList => proptest::collection::vec(-1e3..1e3f64, 1..4)
            .prop_map(|v| v.iter().map(f64::to_string).collect::<Vec<_>>().join(","))
            .boxed(),
        Kind::CountList => proptest::collection::vec(1..50u64, 1..4)
            .prop_map(|v| v.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
            .boxed(),
        Kind::Choice(options) => proptest::sample::select(options.to_vec())
            .prop_map(str::to_string)
            .boxed(),
        Kind::Text => "[a-z0-9:.,;]{1,12}".boxed(),
    }
}

proptest! {
    #[test]
    fn config_round_trips(sub in 0..schema::SUBCOMMANDS.len(), picks in proptest::collection::vec(any::<proptest::sample::Index>(), 0..6), seed in any::<u64>()) {
        let (name, _, keys) = schema::SUBCOMMANDS[sub];
        let mut cfg = RunConfig::new(name).unwrap();
        let mut runner = proptest::test_runner::TestRunner::deterministic();
        for p in picks {
            let k = p.get(keys);
            let v = value_for(k.kind).new_tree(&mut runner).unwrap().current();
            cfg.set(k.name, &v).unwrap();
        }
        cfg.set("seed", &seed.to_string()).unwrap();
        let again = RunConfig::parse(name, &cfg.serialize()).unwrap();
        prop_assert_eq!(again, cfg);
    }
}
