//! Random radial-basis-function concepts.
//!
//! A model of `n_centroids` centroids is drawn once: centre U[0,1]^d, class
//! label uniform, standard deviation U[0,1), selection weight U[0,1). Each
//! instance picks a centroid proportionally to its weight and is placed at
//! `centre + u * g * stddev`, where `u` is a uniformly random unit direction
//! and `g ~ N(0,1)`. With `drift_speed > 0`, the first `n_drift_centroids`
//! centres move by `drift_speed` along their own unit direction after each
//! instance, reflecting off the faces of the unit cube.

use rand::Rng as _;
use rand_distr::StandardNormal;

use super::{check, numbered, Concept};
use crate::rng::{derive, seeded, Rng};
use crate::streams::{Feature, Instance, StreamSchema};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct RbfParams {
    pub n_centroids: usize,
    pub n_classes: usize,
    pub n_features: usize,
    pub drift_speed: f64,
    pub n_drift_centroids: usize,
}

impl Default for RbfParams {
    fn default() -> Self {
        RbfParams {
            n_centroids: 50,
            n_classes: 5,
            n_features: 10,
            drift_speed: 0.0,
            n_drift_centroids: 50,
        }
    }
}

impl RbfParams {
    pub(crate) fn validate(&self) -> Result<()> {
        check(self.n_centroids >= 1, "n_centroids", "must be at least 1")?;
        check(self.n_classes >= 2, "n_classes", "must be at least 2")?;
        check(self.n_features >= 1, "n_features", "must be at least 1")?;
        check(
            self.drift_speed >= 0.0 && self.drift_speed.is_finite(),
            "drift_speed",
            "must be a nonnegative finite number",
        )?;
        check(
            self.n_drift_centroids <= self.n_centroids,
            "n_drift_centroids",
            "cannot exceed n_centroids",
        )
    }
}

struct Centroid {
    centre: Vec<f64>,
    class: usize,
    std_dev: f64,
    direction: Vec<f64>,
}

pub(crate) struct Rbf {
    params: RbfParams,
    schema: StreamSchema,
    centroids: Vec<Centroid>,
    cumulative_weights: Vec<f64>,
    rng: Rng,
}

fn unit_vector(rng: &mut Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|a| a / norm).collect();
        }
    }
}

impl Rbf {
    pub(crate) fn new(params: RbfParams, seed: u64) -> Self {
        let mut model_rng = seeded(derive(seed, 0));
        let d = params.n_features;
        let mut centroids = Vec::with_capacity(params.n_centroids);
        let mut cumulative_weights = Vec::with_capacity(params.n_centroids);
        let mut total = 0.0;
        for _ in 0..params.n_centroids {
            let centre: Vec<f64> = (0..d).map(|_| model_rng.random::<f64>()).collect();
            let class = model_rng.random_range(0..params.n_classes);
            let std_dev = model_rng.random::<f64>();
            total += model_rng.random::<f64>();
            cumulative_weights.push(total);
            let direction = unit_vector(&mut model_rng, d);
            centroids.push(Centroid {
                centre,
                class,
                std_dev,
                direction,
            });
        }
        let schema = StreamSchema::new(
            "RBF",
            (1..=d).map(|i| Feature::numeric(format!("att{i}"))).collect(),
            numbered("class", params.n_classes),
        )
        .expect("validated schema");
        Rbf {
            params,
            schema,
            centroids,
            cumulative_weights,
            rng: seeded(derive(seed, 1)),
        }
    }

    fn pick_centroid(&mut self) -> usize {
        let total = *self.cumulative_weights.last().expect("at least one centroid");
        let target = self.rng.random::<f64>() * total;
        self.cumulative_weights
            .partition_point(|&w| w <= target)
            .min(self.centroids.len() - 1)
    }

    fn move_centroids(&mut self) {
        let speed = self.params.drift_speed;
        for c in self.centroids.iter_mut().take(self.params.n_drift_centroids) {
            for (x, dir) in c.centre.iter_mut().zip(c.direction.iter_mut()) {
                *x += *dir * speed;
                if *x > 1.0 || *x < 0.0 {
                    *x = if *x > 1.0 { 2.0 - *x } else { -*x };
                    *dir = -*dir;
                }
            }
        }
    }
}

impl Concept for Rbf {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn draw(&mut self) -> Instance {
        let idx = self.pick_centroid();
        let direction = unit_vector(&mut self.rng, self.params.n_features);
        let magnitude = self.rng.sample::<f64, _>(StandardNormal) * self.centroids[idx].std_dev;
        let c = &self.centroids[idx];
        let x = c.centre.iter().zip(&direction).map(|(m, u)| m + u * magnitude).collect();
        let inst = Instance::labeled(x, c.class);
        if self.params.drift_speed > 0.0 {
            self.move_centroids();
        }
        inst
    }
}
