//! `key = value` configuration files and their merge with command-line flags.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Settings resolved from flags, then the config file, then defaults. Every
/// resolved value is recorded for the report header.
#[derive(Debug, Default)]
pub struct Settings {
    file: BTreeMap<String, (usize, String)>,
    used: BTreeMap<String, String>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut s = Settings::default();
        if let Some(path) = path {
            s.file = parse_config(&std::fs::read_to_string(path)?)?;
        }
        Ok(s)
    }

    /// `flag`, else the config entry `key`, else `default`.
    pub fn get<T>(&mut self, key: &str, flag: Option<T>, default: Option<T>) -> Result<Option<T>>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file.get(key) {
                Some((line, text)) => Some(text.parse::<T>().map_err(|e| Error::Parse {
                    line: *line,
                    msg: format!("config key `{key}`: {e}"),
                })?),
                None => default,
            },
        };
        if let Some(v) = &value {
            self.used.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    pub fn require<T>(&mut self, key: &str, flag: Option<T>) -> Result<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.get(key, flag, None)?
            .ok_or_else(|| Error::invalid(format!("`{key}` is required (flag or config key)")))
    }

    /// Records a value that was derived rather than read.
    pub fn record(&mut self, key: &str, value: impl Display) {
        self.used.insert(key.to_string(), value.to_string());
    }

    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.used
    }

    /// Config keys that no setting asked for.
    pub fn unused(&self) -> Vec<&str> {
        self.file
            .keys()
            .filter(|k| !self.used.contains_key(*k))
            .map(String::as_str)
            .collect()
    }
}

fn parse_config(text: &str) -> Result<BTreeMap<String, (usize, String)>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            msg: "expected `key = value`".into(),
        })?;
        let key = key.trim().replace('-', "_");
        if out
            .insert(key.clone(), (i + 1, value.trim().to_string()))
            .is_some()
        {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("key `{key}` given twice"),
            });
        }
    }
    Ok(out)
}
