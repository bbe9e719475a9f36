//! `key = value` configuration and typed access.

use std::collections::BTreeMap;

use crate::schema::{self, Kind};
use crate::CliError;

/// Raw string values keyed by name, in a fixed order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunConfig {
    pub subcommand: String,
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(subcommand: &str) -> Result<Self, CliError> {
        if schema::keys_for(subcommand).is_none() {
            return Err(CliError::Usage(format!(
                "unknown subcommand '{subcommand}'"
            )));
        }
        Ok(Self {
            subcommand: subcommand.to_string(),
            values: BTreeMap::new(),
        })
    }

    /// Parse file text: one `key = value` per line, `#` starts a comment.
    pub fn parse(subcommand: &str, text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::new(subcommand)?;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("line {}: expected `key = value`", i + 1))
            })?;
            let k = k.trim();
            if cfg.values.contains_key(k) {
                return Err(CliError::Usage(format!(
                    "key '{k}' given twice (line {})",
                    i + 1
                )));
            }
            cfg.set(k, v.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let spec = schema::lookup(&self.subcommand, key).ok_or_else(|| {
            CliError::Usage(format!("unknown key '{key}' for {}", self.subcommand))
        })?;
        check_value(spec.name, spec.kind, value)?;
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    /// Text form accepted by [`RunConfig::parse`].
    pub fn serialize(&self) -> String {
        self.values
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values
            .get(key)
            .map(String::as_str)
            .or_else(|| schema::lookup(&self.subcommand, key).and_then(|k| k.default))
    }

    fn required(&self, key: &str) -> Result<&str, CliError> {
        self.raw(key)
            .ok_or_else(|| CliError::Usage(format!("missing required key '{key}'")))
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.raw(key)
    }

    pub fn real(&self, key: &str) -> Result<f64, CliError> {
        parse_real(key, self.required(key)?)
    }

    pub fn count(&self, key: &str) -> Result<u64, CliError> {
        parse_count(key, self.required(key)?)
    }

    pub fn reals(&self, key: &str) -> Result<Vec<f64>, CliError> {
        split_list(self.required(key)?)
            .map(|s| parse_real(key, s))
            .collect()
    }

    pub fn counts(&self, key: &str) -> Result<Vec<u64>, CliError> {
        split_list(self.required(key)?)
            .map(|s| parse_count(key, s))
            .collect()
    }

    pub fn choice(&self, key: &str) -> Result<&str, CliError> {
        self.required(key)
    }
}

fn split_list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim)
}

fn parse_real(key: &str, v: &str) -> Result<f64, CliError> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| {
            CliError::Usage(format!(
                "invalid value '{v}' for key '{key}': expected a finite real"
            ))
        })
}

fn parse_count(key: &str, v: &str) -> Result<u64, CliError> {
    v.parse::<u64>().map_err(|_| {
        CliError::Usage(format!(
            "invalid value '{v}' for key '{key}': expected a non-negative integer"
        ))
    })
}

fn check_value(key: &str, kind: Kind, v: &str) -> Result<(), CliError> {
    match kind {
        Kind::Real => parse_real(key, v).map(drop),
        Kind::Count => parse_count(key, v).map(drop),
        Kind::RealList => split_list(v).try_for_each(|s| parse_real(key, s).map(drop)),
        Kind::CountList => split_list(v).try_for_each(|s| parse_count(key, s).map(drop)),
        Kind::Choice(options) => {
            if options.contains(&v) {
                Ok(())
            } else {
                Err(CliError::Usage(format!(
                    "invalid value '{v}' for key '{key}': expected one of {}",
                    options.join(", ")
                )))
            }
        }
        Kind::Text => Ok(()),
    }
}
