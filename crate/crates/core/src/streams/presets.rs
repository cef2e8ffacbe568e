//! Named drifting streams matching the customary benchmark variants.
//!
//! * `SEA_a` / `SEA_g`: SEA concepts 1→2→3→4 with 10% noise.
//! * `AGR_a` / `AGR_g`: AGRAWAL functions 1→2→3→4, perturbation 0.05.
//! * Abrupt variants switch with width 1, gradual ones with width
//!   `length / 20`; the three drifts sit at 1/4, 1/2 and 3/4 of the length.
//! * `RBF_m` / `RBF_f`: 50 centroids, 5 classes, 10 features, all
//!   centroids moving at speed 0.0001 / 0.001.
//! * `HYPER`: 10-feature hyperplane, every weight drifting with
//!   magnitude 0.001, 5% noise.
//! * `RTG`: default random tree, no drift.
//!
//! The drift positions and widths are conventions of this crate.

use std::fmt;
use std::str::FromStr;

use super::generators::{AgrawalParams, HyperplaneParams, RbfParams, RtgParams, SeaParams};
use super::{create_generator, drift_wrap, DriftSpec, GeneratorConfig, GeneratorKind, Stream};
use crate::rng::derive;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    SeaA,
    SeaG,
    AgrA,
    AgrG,
    RbfM,
    RbfF,
    Hyper,
    Rtg,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::SeaA,
        Preset::SeaG,
        Preset::AgrA,
        Preset::AgrG,
        Preset::RbfM,
        Preset::RbfF,
        Preset::Hyper,
        Preset::Rtg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::SeaA => "SEA_a",
            Preset::SeaG => "SEA_g",
            Preset::AgrA => "AGR_a",
            Preset::AgrG => "AGR_g",
            Preset::RbfM => "RBF_m",
            Preset::RbfF => "RBF_f",
            Preset::Hyper => "HYPER",
            Preset::Rtg => "RTG",
        }
    }

    /// Concepts visited in order; a single entry means no concept switch.
    pub fn concepts(self) -> Vec<GeneratorKind> {
        match self {
            Preset::SeaA | Preset::SeaG => (1..=4).map(|f| GeneratorKind::Sea(SeaParams::function(f))).collect(),
            Preset::AgrA | Preset::AgrG => (1..=4)
                .map(|f| GeneratorKind::Agrawal(AgrawalParams::function(f)))
                .collect(),
            Preset::RbfM | Preset::RbfF => {
                let speed = if self == Preset::RbfM { 0.0001 } else { 0.001 };
                vec![GeneratorKind::Rbf(RbfParams {
                    drift_speed: speed,
                    ..RbfParams::default()
                })]
            }
            Preset::Hyper => vec![GeneratorKind::Hyperplane(HyperplaneParams {
                n_drift_features: 10,
                mag_change: 0.001,
                ..HyperplaneParams::default()
            })],
            Preset::Rtg => vec![GeneratorKind::RandomTree(RtgParams::default())],
        }
    }

    fn is_gradual(self) -> bool {
        matches!(self, Preset::SeaG | Preset::AgrG)
    }

    /// Drift width used for a stream of `length` instances.
    pub fn drift_width(self, length: u64) -> u64 {
        if self.is_gradual() {
            (length / 20).max(1)
        } else {
            1
        }
    }

    /// Builds the stream with exactly `length` instances.
    pub fn build(self, length: u64, seed: u64) -> Result<Box<dyn Stream>> {
        let concepts = self.concepts();
        let n = concepts.len() as u64;
        let config = |i: usize, kind: GeneratorKind| GeneratorConfig::new(kind, derive(seed, i as u64));
        let mut kinds = concepts.into_iter().enumerate();
        let (i0, first) = kinds.next().expect("at least one concept");
        let mut stream: Box<dyn Stream> = Box::new(create_generator(&config(i0, first))?);
        for (i, kind) in kinds {
            let spec = DriftSpec {
                position: (length * i as u64 / n).max(1),
                width: self.drift_width(length),
                successor: config(i, kind),
            };
            stream = Box::new(drift_wrap(stream, &spec)?);
        }
        Ok(Box::new(Truncated {
            inner: stream,
            remaining: length,
        }))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
                Error::config("stream", format!("unknown stream `{s}`, expected one of {}", names.join(", ")))
            })
    }
}

struct Truncated {
    inner: Box<dyn Stream>,
    remaining: u64,
}

impl Stream for Truncated {
    fn schema(&self) -> &super::StreamSchema {
        self.inner.schema()
    }

    fn next_instance(&mut self) -> Result<Option<super::Instance>> {
        if self.remaining == 0 {
            return Ok(None);
        }
        self.remaining -= 1;
        self.inner.next_instance()
    }
}
