//! Plain-text `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored; keys are trimmed and
//! case-sensitive. A later occurrence of a key overrides an earlier one.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use super::generators::{AgrawalParams, HyperplaneParams, RbfParams, RtgParams, SeaParams};
use super::{GeneratorConfig, GeneratorKind};
use crate::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    entries: BTreeMap<String, String>,
}

pub fn parse_key_values(text: &str) -> Result<KeyValues> {
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::row(i + 1, format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::row(i + 1, "empty key"));
        }
        entries.insert(key.to_string(), value.trim().to_string());
    }
    Ok(KeyValues { entries })
}

impl KeyValues {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        parse_key_values(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.insert(key.into(), value.into());
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Parses `key` if present.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::config(key, format!("cannot parse `{v}`"))),
        }
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// Builds a generator configuration from `generator`, `seed`, `length`
    /// and the parameter keys of the chosen family. Absent parameters keep
    /// their defaults.
    pub fn generator_config(&self) -> Result<GeneratorConfig> {
        let kind_name = self
            .raw("generator")
            .ok_or_else(|| Error::config("generator", "missing generator kind"))?;
        let kind = match kind_name.to_ascii_uppercase().as_str() {
            "SEA" => {
                let mut p = match self.get::<usize>("function")? {
                    Some(f) if (1..=4).contains(&f) => SeaParams::function(f),
                    Some(_) => return Err(Error::config("function", "SEA concepts are numbered 1..=4")),
                    None => SeaParams::default(),
                };
                p.threshold = self.get_or("threshold", p.threshold)?;
                p.noise_percent = self.get_or("noise_percent", p.noise_percent)?;
                GeneratorKind::Sea(p)
            }
            "AGRAWAL" | "AGR" => {
                let d = AgrawalParams::default();
                GeneratorKind::Agrawal(AgrawalParams {
                    function: self.get_or("function", d.function)?,
                    perturbation: self.get_or("perturbation", d.perturbation)?,
                    nominal: self.get_or("nominal", d.nominal)?,
                })
            }
            "RBF" => {
                let d = RbfParams::default();
                let n_centroids = self.get_or("n_centroids", d.n_centroids)?;
                GeneratorKind::Rbf(RbfParams {
                    n_centroids,
                    n_classes: self.get_or("n_classes", d.n_classes)?,
                    n_features: self.get_or("n_features", d.n_features)?,
                    drift_speed: self.get_or("drift_speed", d.drift_speed)?,
                    n_drift_centroids: self.get_or("n_drift_centroids", n_centroids)?,
                })
            }
            "HYPERPLANE" | "HYPER" => {
                let d = HyperplaneParams::default();
                GeneratorKind::Hyperplane(HyperplaneParams {
                    n_features: self.get_or("n_features", d.n_features)?,
                    n_drift_features: self.get_or("n_drift_features", d.n_drift_features)?,
                    mag_change: self.get_or("mag_change", d.mag_change)?,
                    noise_percent: self.get_or("noise_percent", d.noise_percent)?,
                    sigma_percent: self.get_or("sigma_percent", d.sigma_percent)?,
                })
            }
            "RTG" => {
                let d = RtgParams::default();
                GeneratorKind::RandomTree(RtgParams {
                    n_classes: self.get_or("n_classes", d.n_classes)?,
                    n_nominal: self.get_or("n_nominal", d.n_nominal)?,
                    n_numeric: self.get_or("n_numeric", d.n_numeric)?,
                    nominal_values: self.get_or("nominal_values", d.nominal_values)?,
                    first_leaf_level: self.get_or("first_leaf_level", d.first_leaf_level)?,
                    max_depth: self.get_or("max_depth", d.max_depth)?,
                    leaf_fraction: self.get_or("leaf_fraction", d.leaf_fraction)?,
                })
            }
            other => return Err(Error::config("generator", format!("unknown generator `{other}`"))),
        };
        let config = GeneratorConfig {
            kind,
            seed: self.get_or("seed", 1)?,
            length: self.get("length")?,
        };
        config.validate()?;
        Ok(config)
    }
}
