//! Subcommand bodies: configuration in, result table out.

use std::collections::BTreeSet;

use phasorlab_core::cavity::{spectrum_sweep, ThermalBath};
use phasorlab_core::epr::{
    outcome_table, AmplitudeMode, Convention, EprConfig, NumericWindow, Parity, PhotonPairState,
};
use phasorlab_core::hj::{
    bcp_ratio, free_particle_s, hjs_residual, linear_potential, uniform_grid, MechanicalSystem,
};
use phasorlab_core::holography::{
    density_by_channel_count, localize, observe, BitParity, DetectionBit, FrequencyChannel,
};
use phasorlab_core::statespace::{
    evolve_linear, schrodinger_trajectory, EvolutionSpec, HamiltonianOperator, StateVector,
    Trajectory,
};
use phasorlab_core::{Complex64, DMatrix};

use crate::config::RunConfig;
use crate::emit::{Cell, Table};
use crate::schema;
use crate::CliError;

pub fn execute(cfg: &RunConfig) -> Result<Table, CliError> {
    match cfg.subcommand.as_str() {
        "epr" => epr(cfg),
        "holo" => holo(cfg),
        "cavity" => cavity(cfg),
        "evolve" => evolve(cfg),
        "hj" => hj(cfg),
        other => Err(CliError::Usage(format!("unknown subcommand '{other}'"))),
    }
}

fn epr(cfg: &RunConfig) -> Result<Table, CliError> {
    let parity = match cfg.choice("parity")? {
        "minus" => Parity::Minus,
        _ => Parity::Plus,
    };
    let pair = PhotonPairState::new(parity, cfg.real("field-scale")?)
        .map_err(|e| keyed("field-scale", e))?;
    let mode = match cfg.choice("mode")? {
        "numeric" => AmplitudeMode::Numeric(NumericWindow {
            wavelengths: cfg.real("window")?,
            samples_per_wavelength: cfg.count("samples-per-wavelength")? as usize,
            ..NumericWindow::default()
        }),
        _ => AmplitudeMode::Symbolic,
    };
    let convention = match cfg.choice("convention")? {
        "difference" => Convention::Difference,
        _ => Convention::Sum,
    };
    let config = EprConfig { mode, convention };
    let mut table = Table::new(&[
        "theta1_deg",
        "theta2_deg",
        "correlation",
        "p_xx",
        "p_xy",
        "p_yx",
        "p_yy",
        "amp_xx_re",
        "amp_xx_im",
        "amp_xy_re",
        "amp_xy_im",
        "amp_yx_re",
        "amp_yx_im",
        "amp_yy_re",
        "amp_yy_im",
    ]);
    let theta2 = cfg.reals("theta2")?;
    for t1 in cfg.reals("theta1")? {
        for &t2 in &theta2 {
            let o = outcome_table(t1.to_radians(), t2.to_radians(), &pair, &config)?;
            let mut row = vec![Cell::Real(t1), Cell::Real(t2), Cell::Real(o.correlation())];
            row.extend(o.probabilities.iter().map(|&p| Cell::Real(p)));
            for a in o.amplitudes {
                row.push(Cell::Real(a.re));
                row.push(Cell::Real(a.im));
            }
            table.push(row);
        }
    }
    Ok(table)
}

fn parse_bits(text: &str, known: &BTreeSet<u32>) -> Result<Vec<DetectionBit>, CliError> {
    let bad = |item: &str, why: &str| {
        CliError::Usage(format!("invalid entry '{item}' in key 'bits': {why}"))
    };
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let parts: Vec<&str> = item.split(':').map(str::trim).collect();
            let [j, z, p] = parts[..] else {
                return Err(bad(item, "expected harmonic:detector:parity"));
            };
            let channel: u32 = j
                .parse()
                .map_err(|_| bad(item, "harmonic must be a positive integer"))?;
            if !known.contains(&channel) {
                return Err(bad(item, "harmonic not listed in 'harmonics'"));
            }
            let detector: f64 = z
                .parse()
                .ok()
                .filter(|x: &f64| x.is_finite())
                .ok_or_else(|| bad(item, "detector must be a finite real"))?;
            let parity = p
                .parse::<u8>()
                .ok()
                .and_then(|v| BitParity::from_u8(v).ok())
                .ok_or_else(|| bad(item, "parity must be 0 or 1"))?;
            Ok(DetectionBit {
                detector,
                channel,
                parity,
            })
        })
        .collect()
}

fn holo(cfg: &RunConfig) -> Result<Table, CliError> {
    let base = cfg.real("wavelength")?;
    let multiples = cfg.counts("harmonics")?;
    let mut channels = Vec::with_capacity(multiples.len());
    for &m in &multiples {
        let m = u32::try_from(m).map_err(|_| {
            CliError::Usage(format!("harmonic {m} out of range in key 'harmonics'"))
        })?;
        channels.push(FrequencyChannel::harmonic(m, base).map_err(|e| keyed("harmonics", e))?);
    }
    let domain = (cfg.real("domain-lo")?, cfg.real("domain-hi")?);
    if !(domain.0 < domain.1) {
        return Err(CliError::Usage(
            "key 'domain-hi' must exceed 'domain-lo'".into(),
        ));
    }
    if cfg.choice("output")? == "density" {
        let mut table = Table::new(&["channels", "density"]);
        for (n, d) in density_by_channel_count(&channels, domain)? {
            table.push(vec![Cell::Count(n as u64), Cell::Real(d)]);
        }
        return Ok(table);
    }
    let alpha = cfg.real("alpha")?;
    let bits = match (cfg.contains("source"), cfg.contains("bits")) {
        (true, false) => observe(
            cfg.real("source")?,
            &cfg.reals("detectors")?,
            &channels,
            alpha,
        ),
        (false, true) => {
            let known = channels.iter().map(FrequencyChannel::index).collect();
            parse_bits(cfg.text("bits").unwrap_or(""), &known)?
        }
        (true, true) => {
            return Err(CliError::Usage(
                "keys 'source' and 'bits' are exclusive".into(),
            ))
        }
        (false, false) => {
            return Err(CliError::Usage(
                "one of keys 'source' or 'bits' is required".into(),
            ))
        }
    };
    let loc = localize(&bits, &channels, alpha, domain)?;
    let mut table = Table::new(&["interval", "lo", "hi", "length"]);
    for (i, iv) in loc.aliases.intervals().iter().enumerate() {
        table.push(vec![
            Cell::Count(i as u64),
            Cell::Real(iv.lo),
            Cell::Real(iv.hi),
            Cell::Real(iv.len()),
        ]);
    }
    Ok(table)
}

fn cavity(cfg: &RunConfig) -> Result<Table, CliError> {
    let bath = ThermalBath::si(cfg.real("temperature")?).map_err(|e| keyed("temperature", e))?;
    let frequencies = match (cfg.contains("hf-over-kt"), cfg.contains("frequencies")) {
        (true, false) => {
            let ratios = cfg.reals("hf-over-kt")?;
            if let Some(r) = ratios.iter().find(|r| !(**r > 0.0)) {
                return Err(CliError::Usage(format!(
                    "key 'hf-over-kt' must be positive, got {r}"
                )));
            }
            ratios
                .iter()
                .map(|&r| bath.frequency_for_ratio(r))
                .collect()
        }
        (false, true) => {
            let f = cfg.reals("frequencies")?;
            if let Some(x) = f.iter().find(|x| !(**x > 0.0)) {
                return Err(CliError::Usage(format!(
                    "key 'frequencies' must be positive, got {x}"
                )));
            }
            f
        }
        (true, true) => {
            return Err(CliError::Usage(
                "keys 'hf-over-kt' and 'frequencies' are exclusive".into(),
            ))
        }
        (false, false) => {
            return Err(CliError::Usage(
                "one of keys 'hf-over-kt' or 'frequencies' is required".into(),
            ))
        }
    };
    let (steps, burn_in) = (cfg.count("steps")?, cfg.count("burn-in")?);
    if steps <= burn_in {
        return Err(CliError::Usage(format!(
            "key 'steps' ({steps}) must exceed 'burn-in' ({burn_in})"
        )));
    }
    let rows = spectrum_sweep(&frequencies, &bath, steps, burn_in, cfg.count("seed")?)?;
    let mut table = Table::new(&[
        "f",
        "T",
        "mc_mean_energy",
        "mc_std_error",
        "closed_form",
        "rel_error",
        "acceptance_rate",
        "steps",
        "seed",
    ]);
    for r in rows {
        table.push(vec![
            Cell::Real(r.frequency),
            Cell::Real(r.temperature),
            Cell::Real(r.mc_mean_energy),
            Cell::Real(r.mc_std_error),
            Cell::Real(r.closed_form),
            Cell::Real(r.rel_error),
            Cell::Real(r.acceptance_rate),
            Cell::Count(r.steps),
            Cell::Count(r.stream),
        ]);
    }
    Ok(table)
}

fn parse_matrix(key: &str, text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| {
                            CliError::Usage(format!(
                                "invalid value '{}' for key '{key}': expected a finite real",
                                v.trim()
                            ))
                        })
                })
                .collect()
        })
        .collect()
}

fn trajectory_table(traj: &Trajectory, every: usize) -> Table {
    let dim = traj.states.first().map_or(0, StateVector::dim);
    let mut columns = vec!["t".to_string()];
    for j in 0..dim {
        columns.push(format!("re_{j}"));
        columns.push(format!("im_{j}"));
    }
    columns.push("norm".into());
    let mut table = Table::new(&columns);
    let last = traj.times.len().saturating_sub(1);
    for (i, (t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
        if i % every != 0 && i != last {
            continue;
        }
        let mut row = vec![Cell::Real(*t)];
        for z in s.components() {
            row.push(Cell::Real(z.re));
            row.push(Cell::Real(z.im));
        }
        row.push(Cell::Real(s.norm()));
        table.push(row);
    }
    table
}

fn evolve(cfg: &RunConfig) -> Result<Table, CliError> {
    let system = cfg.choice("system")?;
    let foreign = if system == "linear" {
        schema::SCHRODINGER_ONLY
    } else {
        schema::LINEAR_ONLY
    };
    if let Some(k) = foreign.iter().find(|k| cfg.contains(k)) {
        return Err(CliError::Usage(format!(
            "key '{k}' does not apply to system {system}"
        )));
    }
    let every = cfg.count("record-every")?.max(1) as usize;
    if system == "linear" {
        let spec = EvolutionSpec::real(&cfg.reals("coefficients")?)
            .map_err(|e| keyed("coefficients", e))?;
        let initial: Vec<StateVector> = cfg
            .reals("initial")?
            .into_iter()
            .map(|v| StateVector::scalar(Complex64::new(v, 0.0)))
            .collect();
        if initial.len() != spec.order() {
            return Err(CliError::Usage(format!(
                "key 'initial' needs {} values for order {}",
                spec.order(),
                spec.order()
            )));
        }
        let traj = evolve_linear(&spec, &initial, cfg.real("t-end")?, cfg.real("step")?)?;
        return Ok(trajectory_table(&traj, every));
    }
    let re = parse_matrix(
        "hamiltonian",
        cfg.text("hamiltonian")
            .ok_or_else(|| missing("hamiltonian"))?,
    )?;
    let n = re.len();
    if re.iter().any(|r| r.len() != n) {
        return Err(CliError::Usage(
            "key 'hamiltonian' must be a square matrix".into(),
        ));
    }
    let im = match cfg.text("hamiltonian-im") {
        Some(t) => parse_matrix("hamiltonian-im", t)?,
        None => vec![vec![0.0; n]; n],
    };
    if im.len() != n || im.iter().any(|r| r.len() != n) {
        return Err(CliError::Usage(
            "key 'hamiltonian-im' must match the shape of 'hamiltonian'".into(),
        ));
    }
    let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(re[i][j], im[i][j]));
    let h = HamiltonianOperator::new(m, cfg.real("hbar")?).map_err(|e| keyed("hamiltonian", e))?;
    let psi_re = cfg.reals("psi0")?;
    let psi_im = if cfg.contains("psi0-im") {
        cfg.reals("psi0-im")?
    } else {
        vec![0.0; psi_re.len()]
    };
    if psi_re.len() != n || psi_im.len() != n {
        return Err(CliError::Usage(format!(
            "keys 'psi0' and 'psi0-im' need {n} values"
        )));
    }
    let psi = StateVector::new(
        psi_re
            .iter()
            .zip(&psi_im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect(),
    );
    let traj = schrodinger_trajectory(
        &h,
        &psi,
        cfg.real("dt")?,
        cfg.count("steps")? as usize,
        every,
    )?;
    Ok(trajectory_table(&traj, 1))
}

fn hj(cfg: &RunConfig) -> Result<Table, CliError> {
    let points = cfg.count("points")? as usize;
    let grid = uniform_grid(cfg.real("q-lo")?, cfg.real("q-hi")?, points);
    let (mass, hbar, time) = (cfg.real("mass")?, cfg.real("hbar")?, cfg.real("time")?);
    let (s, sys) = if cfg.choice("system")? == "linear" {
        linear_potential(
            mass,
            cfg.real("alpha")?,
            cfg.real("energy")?,
            grid,
            time,
            hbar,
        )?
    } else {
        let s = free_particle_s(cfg.real("momentum")?, mass, grid, time)?;
        (s, MechanicalSystem::free(mass, points, hbar)?)
    };
    let residual = hjs_residual(&s, &sys)?;
    let bcp = bcp_ratio(&s, &sys)?;
    let mut table = Table::new(&[
        "q",
        "lhs_re",
        "rhs_re",
        "rhs_im",
        "bcp_ratio",
        "regime_flag",
    ]);
    for j in 0..residual.q.len() {
        table.push(vec![
            Cell::Real(residual.q[j]),
            Cell::Real(residual.lhs[j]),
            Cell::Real(residual.rhs[j].re),
            Cell::Real(residual.rhs[j].im),
            Cell::Real(bcp.ratio[j]),
            Cell::Count(bcp.classical[j] as u64),
        ]);
    }
    Ok(table)
}

fn missing(key: &str) -> CliError {
    CliError::Usage(format!("missing required key '{key}'"))
}

fn keyed(key: &str, e: phasorlab_core::Error) -> CliError {
    CliError::Usage(format!("key '{key}': {e}"))
}
