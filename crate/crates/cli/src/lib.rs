//! Command-line front-end: configuration, dispatch and emission.
//!
//! Every run is a pure function of its configuration and master seed, so the
//! same inputs always produce the same bytes.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod emit;
pub mod schema;

use std::ffi::OsString;
use std::io::Write;

pub use config::RunConfig;
pub use emit::{Cell, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Engine(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Engine(_) => 1,
        }
    }
}

impl From<phasorlab_core::Error> for CliError {
    fn from(e: phasorlab_core::Error) -> Self {
        match e {
            phasorlab_core::Error::Usage(m) => CliError::Usage(m),
            other => CliError::Engine(other.to_string()),
        }
    }
}

/// Build the configuration for one parsed subcommand: file first, flags on top.
fn gather(name: &str, matches: &clap::ArgMatches) -> Result<RunConfig, CliError> {
    let mut cfg = match matches.get_one::<String>("config") {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config '{path}': {e}")))?;
            RunConfig::parse(name, &text)?
        }
        None => RunConfig::new(name)?,
    };
    let keys = schema::keys_for(name).unwrap_or(&[]);
    for k in schema::COMMON.iter().chain(keys.iter()) {
        if let Some(v) = matches.get_one::<String>(k.name) {
            cfg.set(k.name, v)?;
        }
    }
    Ok(cfg)
}

pub fn render(table: &Table, format: &str) -> String {
    match format {
        "json" => table.to_json(),
        _ => table.to_csv(),
    }
}

/// Write `bytes` to `path`, or to `stdout` when no path is given.
pub fn emit(bytes: &[u8], path: Option<&str>, stdout: &mut dyn Write) -> Result<usize, CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes)
            .map_err(|e| CliError::Engine(format!("cannot write '{p}': {e}")))?,
        None => stdout
            .write_all(bytes)
            .map_err(|e| CliError::Engine(format!("cannot write output: {e}")))?,
    }
    Ok(bytes.len())
}

fn run_parsed(
    name: &str,
    matches: &clap::ArgMatches,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let cfg = gather(name, matches)?;
    let table = commands::execute(&cfg)?;
    let text = render(&table, cfg.choice("format")?);
    emit(text.as_bytes(), cfg.text("out"), stdout)?;
    Ok(())
}

/// Parse `args` (program name first), run, and return the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match schema::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let Some((name, sub)) = matches.subcommand() else {
        let _ = writeln!(stderr, "error: a subcommand is required");
        return 2;
    };
    match run_parsed(name, sub, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
