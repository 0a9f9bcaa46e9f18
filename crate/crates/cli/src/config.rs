//! Flat `key = value` config files. Flags override config values; unknown
//! keys are rejected so typos cannot silently change a run.

use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

const KNOWN_KEYS: &[&str] = &[
    "R", "C0", "n_r", "n_theta", "tol", "max_iter", "initial", "copies", "out",
];

#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    CliError::Config(format!("config line {}: expected key = value", lineno + 1))
                })?;
                let key = k.trim().to_string();
                if !KNOWN_KEYS.contains(&key.as_str()) {
                    return Err(CliError::Config(format!(
                        "config line {}: unknown key `{key}`",
                        lineno + 1
                    )));
                }
                values.insert(key, v.trim().to_string());
            }
        }
        Ok(Config { values })
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::Config(format!("config key `{key}`: {e}"))),
        }
    }

    /// Flag value if present, else config value, else the default.
    pub fn resolve<T: std::str::FromStr + Clone>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        Ok(self.get::<T>(key)?.unwrap_or(default))
    }

    /// Flag value if present, else config value, else a configuration error.
    pub fn require<T: std::str::FromStr + Clone>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        self.get::<T>(key)?
            .ok_or_else(|| CliError::Config(format!("missing required parameter `{key}`")))
    }
}
