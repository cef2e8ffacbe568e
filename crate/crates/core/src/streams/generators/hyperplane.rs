//! Rotating hyperplane concepts.
//!
//! Features are U[0,1]^d with weights `w` drawn U[0,1]. Class 1 when
//! `sum_i w_i x_i >= 0.5 * sum_i w_i`, class 0 otherwise, followed by label
//! noise. After every instance the first `n_drift_features` weights move by
//! `sigma_i * mag_change`, and each direction `sigma_i` flips with
//! probability `sigma_percent / 100`.

use rand::Rng as _;

use super::{check, numbered, Concept};
use crate::rng::{seeded, Rng};
use crate::streams::{Feature, Instance, StreamSchema};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct HyperplaneParams {
    pub n_features: usize,
    pub n_drift_features: usize,
    pub mag_change: f64,
    pub noise_percent: f64,
    pub sigma_percent: f64,
}

impl Default for HyperplaneParams {
    fn default() -> Self {
        HyperplaneParams {
            n_features: 10,
            n_drift_features: 2,
            mag_change: 0.0,
            noise_percent: 5.0,
            sigma_percent: 10.0,
        }
    }
}

impl HyperplaneParams {
    pub(crate) fn validate(&self) -> Result<()> {
        check(self.n_features >= 1, "n_features", "must be at least 1")?;
        check(
            self.n_drift_features <= self.n_features,
            "n_drift_features",
            "cannot exceed n_features",
        )?;
        check(
            self.mag_change >= 0.0 && self.mag_change.is_finite(),
            "mag_change",
            "must be a nonnegative finite number",
        )?;
        check(
            (0.0..=100.0).contains(&self.noise_percent),
            "noise_percent",
            "must lie in [0, 100]",
        )?;
        check(
            (0.0..=100.0).contains(&self.sigma_percent),
            "sigma_percent",
            "must lie in [0, 100]",
        )
    }
}

pub(crate) struct Hyperplane {
    params: HyperplaneParams,
    schema: StreamSchema,
    weights: Vec<f64>,
    sigma: Vec<f64>,
    rng: Rng,
}

impl Hyperplane {
    pub(crate) fn new(params: HyperplaneParams, seed: u64) -> Self {
        let mut rng = seeded(seed);
        let weights = (0..params.n_features).map(|_| rng.random::<f64>()).collect();
        let sigma = (0..params.n_features)
            .map(|i| {
                if i < params.n_drift_features && rng.random::<bool>() {
                    -1.0
                } else {
                    1.0
                }
            })
            .collect();
        let schema = StreamSchema::new(
            "HYPERPLANE",
            (1..=params.n_features).map(|i| Feature::numeric(format!("att{i}"))).collect(),
            numbered("class", 2),
        )
        .expect("validated schema");
        Hyperplane {
            params,
            schema,
            weights,
            sigma,
            rng,
        }
    }
}

impl Concept for Hyperplane {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn draw(&mut self) -> Instance {
        let x: Vec<f64> = (0..self.params.n_features).map(|_| self.rng.random::<f64>()).collect();
        let dot: f64 = x.iter().zip(&self.weights).map(|(a, w)| a * w).sum();
        let total: f64 = self.weights.iter().sum();
        let mut y = usize::from(dot >= 0.5 * total);
        if self.rng.random::<f64>() * 100.0 < self.params.noise_percent {
            y = 1 - y;
        }
        for i in 0..self.params.n_drift_features {
            self.weights[i] += self.sigma[i] * self.params.mag_change;
            if self.rng.random::<f64>() * 100.0 < self.params.sigma_percent {
                self.sigma[i] = -self.sigma[i];
            }
        }
        Instance::labeled(x, y)
    }
}
