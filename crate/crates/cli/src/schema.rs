//! Accepted keys per subcommand and the clap command built from them.

use clap::{Arg, ArgAction, Command};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Real,
    Count,
    RealList,
    CountList,
    Choice(&'static [&'static str]),
    Text,
}

impl Kind {
    fn value_name(self) -> &'static str {
        match self {
            Kind::Real => "REAL",
            Kind::Count => "INT",
            Kind::RealList => "REAL,...",
            Kind::CountList => "INT,...",
            Kind::Choice(_) => "CHOICE",
            Kind::Text => "TEXT",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

const fn key(
    name: &'static str,
    kind: Kind,
    default: Option<&'static str>,
    help: &'static str,
) -> Key {
    Key {
        name,
        kind,
        default,
        help,
    }
}

pub const FORMATS: &[&str] = &["csv", "json"];

pub const COMMON: &[Key] = &[
    key(
        "seed",
        Kind::Count,
        Some("0"),
        "master seed for all random streams",
    ),
    key(
        "format",
        Kind::Choice(FORMATS),
        Some("csv"),
        "output format",
    ),
    key("out", Kind::Text, None, "output path (stdout when absent)"),
];

pub const EPR: &[Key] = &[
    key(
        "theta1",
        Kind::RealList,
        Some("0"),
        "detector-1 analyzer angles in degrees",
    ),
    key(
        "theta2",
        Kind::RealList,
        Some("0"),
        "detector-2 analyzer angles in degrees",
    ),
    key(
        "parity",
        Kind::Choice(&["plus", "minus"]),
        Some("plus"),
        "pair state",
    ),
    key("field-scale", Kind::Real, Some("1"), "field amplitude E"),
    key(
        "mode",
        Kind::Choice(&["symbolic", "numeric"]),
        Some("symbolic"),
        "amplitude evaluation",
    ),
    key(
        "window",
        Kind::Real,
        Some("10000"),
        "numeric window length in wavelengths",
    ),
    key(
        "samples-per-wavelength",
        Kind::Count,
        Some("16"),
        "numeric sampling density",
    ),
    key(
        "convention",
        Kind::Choice(&["sum", "difference"]),
        Some("sum"),
        "detector-2 handedness frame",
    ),
];

pub const HOLO: &[Key] = &[
    key("wavelength", Kind::Real, Some("1"), "base wavelength"),
    key(
        "harmonics",
        Kind::CountList,
        Some("1"),
        "channel multiples of the base frequency",
    ),
    key("detectors", Kind::RealList, Some("0"), "detector positions"),
    key("alpha", Kind::Real, Some("0"), "phase offset in radians"),
    key(
        "domain-lo",
        Kind::Real,
        Some("-5"),
        "lower edge of the search domain",
    ),
    key(
        "domain-hi",
        Kind::Real,
        Some("5"),
        "upper edge of the search domain",
    ),
    key(
        "source",
        Kind::Real,
        None,
        "true source position used to generate bits",
    ),
    key(
        "bits",
        Kind::Text,
        None,
        "observed bits as harmonic:detector:parity,...",
    ),
    key(
        "output",
        Kind::Choice(&["aliases", "density"]),
        Some("aliases"),
        "alias intervals or density by channel count",
    ),
];

pub const CAVITY: &[Key] = &[
    key(
        "temperature",
        Kind::Real,
        Some("300"),
        "bath temperature in K",
    ),
    key(
        "hf-over-kt",
        Kind::RealList,
        None,
        "families given by reduced energy hf/kT",
    ),
    key(
        "frequencies",
        Kind::RealList,
        None,
        "families given by base frequency in Hz",
    ),
    key(
        "steps",
        Kind::Count,
        Some("1000000"),
        "jitter steps per chain",
    ),
    key(
        "burn-in",
        Kind::Count,
        Some("10000"),
        "discarded leading steps",
    ),
];

pub const EVOLVE: &[Key] = &[
    key(
        "system",
        Kind::Choice(&["linear", "schrodinger"]),
        Some("linear"),
        "evolution law",
    ),
    key("coefficients", Kind::RealList, None, "linear: a_0,...,a_n"),
    key(
        "initial",
        Kind::RealList,
        None,
        "linear: psi(0), psi'(0), ...",
    ),
    key("t-end", Kind::Real, None, "linear: end time"),
    key(
        "step",
        Kind::Real,
        Some("0.001"),
        "linear: maximum RK4 step",
    ),
    key(
        "hamiltonian",
        Kind::Text,
        None,
        "schrodinger: real parts, rows separated by ';'",
    ),
    key(
        "hamiltonian-im",
        Kind::Text,
        None,
        "schrodinger: imaginary parts, same layout",
    ),
    key(
        "psi0",
        Kind::RealList,
        None,
        "schrodinger: real parts of the initial state",
    ),
    key(
        "psi0-im",
        Kind::RealList,
        None,
        "schrodinger: imaginary parts of the initial state",
    ),
    key("hbar", Kind::Real, Some("1"), "schrodinger: action scale"),
    key("dt", Kind::Real, None, "schrodinger: time step"),
    key("steps", Kind::Count, None, "schrodinger: number of steps"),
    key(
        "record-every",
        Kind::Count,
        Some("1"),
        "emit every n-th step",
    ),
];

pub const LINEAR_ONLY: &[&str] = &["coefficients", "initial", "t-end", "step"];
pub const SCHRODINGER_ONLY: &[&str] = &[
    "hamiltonian",
    "hamiltonian-im",
    "psi0",
    "psi0-im",
    "hbar",
    "dt",
    "steps",
];

pub const HJ: &[Key] = &[
    key(
        "system",
        Kind::Choice(&["free", "linear"]),
        Some("free"),
        "potential",
    ),
    key("mass", Kind::Real, Some("1"), "particle mass"),
    key("hbar", Kind::Real, Some("1"), "action scale"),
    key("momentum", Kind::Real, Some("1"), "free: momentum p"),
    key(
        "alpha",
        Kind::Real,
        Some("1"),
        "linear: slope of V = alpha q",
    ),
    key("energy", Kind::Real, Some("10"), "linear: total energy"),
    key("q-lo", Kind::Real, Some("0"), "grid start"),
    key("q-hi", Kind::Real, Some("5"), "grid end"),
    key("points", Kind::Count, Some("501"), "grid points"),
    key("time", Kind::Real, Some("0"), "evaluation time"),
];

pub const SUBCOMMANDS: &[(&str, &str, &[Key])] = &[
    (
        "epr",
        "coincidence amplitudes and correlations for photon pairs",
        EPR,
    ),
    ("holo", "parity-bit source localization", HOLO),
    (
        "cavity",
        "mode-family Monte Carlo against the Planck closed form",
        CAVITY,
    ),
    (
        "evolve",
        "linear or Schrodinger evolution trajectories",
        EVOLVE,
    ),
    (
        "hj",
        "Hamilton-Jacobi residuals and correspondence ratio",
        HJ,
    ),
];

pub fn keys_for(subcommand: &str) -> Option<&'static [Key]> {
    SUBCOMMANDS
        .iter()
        .find(|(n, _, _)| *n == subcommand)
        .map(|(_, _, k)| *k)
}

pub fn lookup(subcommand: &str, name: &str) -> Option<Key> {
    COMMON
        .iter()
        .chain(keys_for(subcommand)?.iter())
        .find(|k| k.name == name)
        .copied()
}

fn arg_for(k: &Key) -> Arg {
    let mut help = k.help.to_string();
    if let Kind::Choice(options) = k.kind {
        help.push_str(&format!(" [{}]", options.join("|")));
    }
    if let Some(d) = k.default {
        help.push_str(&format!(" (default {d})"));
    }
    Arg::new(k.name)
        .long(k.name)
        .value_name(k.kind.value_name())
        .num_args(1)
        .allow_hyphen_values(true)
        .action(ArgAction::Set)
        .help(help)
}

pub fn command() -> Command {
    let mut cmd = Command::new("phasorlab")
        .about("Classical-wave simulation engines")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true);
    for (name, about, keys) in SUBCOMMANDS {
        let mut sub = Command::new(*name).about(*about).arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .num_args(1)
                .help("file of `key = value` lines; flags override it"),
        );
        for k in COMMON.iter().chain(keys.iter()) {
            sub = sub.arg(arg_for(k));
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}
