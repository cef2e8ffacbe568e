//! Run settings: a key-value config file overlaid with command-line flags.

use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use sdf_core::streams::{parse_key_values, KeyValues};

use crate::error::CliError;

pub struct Settings {
    command: &'static str,
    kv: KeyValues,
}

impl Settings {
    pub fn load(command: &'static str, config: Option<&Path>) -> Result<Self, CliError> {
        let kv = match config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Data(format!("cannot read config {}: {e}", path.display())))?;
                parse_key_values(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?
            }
            None => KeyValues::default(),
        };
        Ok(Settings { command, kv })
    }

    /// Sets `key` when the flag was given; flags win over the config file.
    pub fn flag<T: ToString>(&mut self, key: &str, value: Option<T>) {
        if let Some(v) = value {
            self.kv.set(key, v.to_string());
        }
    }

    /// Applies a `key=value` override.
    pub fn assign(&mut self, pair: &str) -> Result<(), CliError> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got `{pair}`")))?;
        self.kv.set(k.trim(), v.trim());
        Ok(())
    }

    pub fn kv(&self) -> &KeyValues {
        &self.kv
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.kv.raw(key)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.kv.get(key).map_err(CliError::from)
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// SHA-256 over the command name and every resolved setting except the
    /// output destination.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("command={}\n", self.command));
        for key in self.kv.keys().filter(|k| *k != "output") {
            h.update(format!("{key}={}\n", self.kv.raw(key).unwrap_or_default()));
        }
        hex::encode(h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_and_change_the_hash() {
        let mut a = Settings::load("run", None).unwrap();
        a.flag("seed", Some(3));
        let mut b = Settings::load("run", None).unwrap();
        b.flag("seed", Some(3));
        assert_eq!(a.hash(), b.hash());
        b.flag("seed", Some(4));
        assert_ne!(a.hash(), b.hash());
        assert_eq!(b.get::<u64>("seed").unwrap(), Some(4));
        b.flag("output", Some("x.csv"));
        b.flag("seed", Some(3));
        assert_eq!(a.hash(), b.hash());
    }

    #[test]
    fn command_is_part_of_the_hash() {
        assert_ne!(Settings::load("run", None).unwrap().hash(), Settings::load("depth", None).unwrap().hash());
    }

    #[test]
    fn bad_assignment() {
        let mut s = Settings::load("run", None).unwrap();
        assert!(s.assign("nokey").is_err());
        s.assign("budget = 0.3").unwrap();
        assert_eq!(s.get::<f64>("budget").unwrap(), Some(0.3));
    }
}
