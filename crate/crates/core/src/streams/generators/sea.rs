//! SEA concepts: three features uniform on [0, 10); only the first two are
//! relevant. Class 0 when `f1 + f2 <= threshold`, class 1 otherwise, then
//! the label is flipped with probability `noise_percent / 100`.

use rand::Rng as _;

use super::{check, Concept};
use crate::rng::{seeded, Rng};
use crate::streams::{Feature, Instance, StreamSchema};
use crate::Result;

/// Thresholds of the four classic SEA concepts.
pub const SEA_THRESHOLDS: [f64; 4] = [8.0, 9.0, 7.0, 9.5];

#[derive(Debug, Clone, PartialEq)]
pub struct SeaParams {
    pub threshold: f64,
    pub noise_percent: f64,
}

impl Default for SeaParams {
    fn default() -> Self {
        SeaParams::function(1)
    }
}

impl SeaParams {
    /// Classic concept `1..=4` with 10% label noise.
    pub fn function(id: usize) -> Self {
        SeaParams {
            threshold: SEA_THRESHOLDS[(id.clamp(1, 4)) - 1],
            noise_percent: 10.0,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        check(self.threshold.is_finite(), "threshold", "must be finite")?;
        check(
            (0.0..=100.0).contains(&self.noise_percent),
            "noise_percent",
            "must lie in [0, 100]",
        )
    }
}

pub(crate) fn sea_label(f1: f64, f2: f64, threshold: f64) -> usize {
    if f1 + f2 <= threshold {
        0
    } else {
        1
    }
}

pub(crate) struct Sea {
    params: SeaParams,
    schema: StreamSchema,
    rng: Rng,
}

impl Sea {
    pub(crate) fn new(params: SeaParams, seed: u64) -> Self {
        let schema = StreamSchema::new(
            "SEA",
            vec![Feature::numeric("attrib1"), Feature::numeric("attrib2"), Feature::numeric("attrib3")],
            vec!["groupA".into(), "groupB".into()],
        )
        .expect("static schema");
        Sea {
            params,
            schema,
            rng: seeded(seed),
        }
    }
}

impl Concept for Sea {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn draw(&mut self) -> Instance {
        let x: Vec<f64> = (0..3).map(|_| 10.0 * self.rng.random::<f64>()).collect();
        let mut y = sea_label(x[0], x[1], self.params.threshold);
        if self.rng.random::<f64>() * 100.0 < self.params.noise_percent {
            y = 1 - y;
        }
        Instance::labeled(x, y)
    }
}
