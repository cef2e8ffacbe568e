//! Streaming deep forest: `L` layers of four adaptive random forests. Layer
//! 0 reads the raw features; every later layer reads the previous layer's
//! four class vectors followed by the raw features.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::arf::{AdaptiveRandomForest, ArfConfig};
use crate::rng::derive;
use crate::streams::Feature;
use crate::{ClassVector, Classifier, DriftReport, Error, Result, StreamSchema};

/// Forests per layer.
pub const FORESTS_PER_LAYER: usize = 4;

/// Subspace sizes of the four forests of a layer with input dimension `d`:
/// `floor(sqrt d) + 1`, `floor(log2 d) + 1`, `floor(d / 2)`, `round(0.7 d)`,
/// each clamped to `[1, d]`.
pub fn subspace_sizes(d: usize) -> [usize; FORESTS_PER_LAYER] {
    let df = d as f64;
    [
        df.sqrt().floor() as usize + 1,
        df.log2().floor() as usize + 1,
        d / 2,
        (0.7 * df).round() as usize,
    ]
    .map(|m| m.clamp(1, d.max(1)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeConfig {
    pub n_layers: usize,
    /// Template for every forest. Its seed and subspace size are replaced
    /// per forest.
    pub forest: ArfConfig,
    pub seed: u64,
    /// Run the four forests of a layer on the rayon pool.
    pub parallel: bool,
}

impl Default for CascadeConfig {
    fn default() -> Self {
        CascadeConfig {
            n_layers: 2,
            forest: ArfConfig::default(),
            seed: 1,
            parallel: true,
        }
    }
}

impl CascadeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_layers < 1 {
            return Err(Error::config("n_layers", "must be at least 1"));
        }
        Ok(())
    }

    /// Concrete configurations of the forests of `layer`, whose input has
    /// `input_dim` features.
    pub fn forest_configs(&self, layer: usize, input_dim: usize) -> [ArfConfig; FORESTS_PER_LAYER] {
        let sizes = subspace_sizes(input_dim);
        std::array::from_fn(|j| {
            let mut cfg = self.forest.clone();
            cfg.tree.subspace_size = Some(sizes[j]);
            cfg.seed = derive(self.seed, (layer * FORESTS_PER_LAYER + j) as u64);
            cfg
        })
    }
}

/// Builds the input of `layer`: `x` itself for layer 0, otherwise
/// `[cv1 | cv2 | cv3 | cv4 | x]`.
pub fn layer_input(layer: usize, x: &[f64], prev: Option<&[ClassVector]>) -> Result<Vec<f64>> {
    match (layer, prev) {
        (0, None) => Ok(x.to_vec()),
        (0, Some(_)) => Err(Error::Contract("layer 0 takes no class vectors".into())),
        (_, None) => Err(Error::Contract(format!("layer {layer} needs the previous layer's class vectors"))),
        (_, Some(prev)) => {
            if prev.len() != FORESTS_PER_LAYER {
                return Err(Error::Contract(format!(
                    "expected {FORESTS_PER_LAYER} class vectors, got {}",
                    prev.len()
                )));
            }
            let mut out = Vec::with_capacity(prev.iter().map(ClassVector::len).sum::<usize>() + x.len());
            for cv in prev {
                out.extend_from_slice(cv.as_slice());
            }
            out.extend_from_slice(x);
            Ok(out)
        }
    }
}

/// Schema seen by the forests of layers after the first.
pub fn layer_schema(base: &StreamSchema) -> Result<StreamSchema> {
    let mut features = Vec::with_capacity(FORESTS_PER_LAYER * base.n_classes() + base.n_features());
    for j in 0..FORESTS_PER_LAYER {
        for label in base.class_labels() {
            features.push(Feature::numeric(format!("forest{j}_p_{label}")));
        }
    }
    features.extend(base.features().iter().cloned());
    StreamSchema::new(format!("{}+cv", base.name()), features, base.class_labels().to_vec())
}

#[derive(Debug, Clone)]
pub struct StreamingDeepForest {
    schema: StreamSchema,
    config: CascadeConfig,
    layers: Vec<Vec<AdaptiveRandomForest>>,
}

impl StreamingDeepForest {
    pub fn new(schema: StreamSchema, config: CascadeConfig) -> Result<Self> {
        config.validate()?;
        let deep = layer_schema(&schema)?;
        let mut layers = Vec::with_capacity(config.n_layers);
        for layer in 0..config.n_layers {
            let s = if layer == 0 { &schema } else { &deep };
            let forests = config
                .forest_configs(layer, s.n_features())
                .into_iter()
                .map(|cfg| AdaptiveRandomForest::new(s.clone(), cfg))
                .collect::<Result<Vec<_>>>()?;
            layers.push(forests);
        }
        Ok(StreamingDeepForest { schema, config, layers })
    }

    pub fn config(&self) -> &CascadeConfig {
        &self.config
    }

    pub fn n_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, layer: usize) -> &[AdaptiveRandomForest] {
        &self.layers[layer]
    }

    /// Input dimension of each layer.
    pub fn layer_dims(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l[0].schema().n_features()).collect()
    }

    /// Warnings and drifts across all forests since construction.
    pub fn totals(&self) -> DriftReport {
        let mut r = DriftReport::default();
        for f in self.layers.iter().flatten() {
            r += f.totals();
        }
        r
    }

    fn use_pool(&self) -> bool {
        self.config.parallel && rayon::current_num_threads() > 1
    }

    /// Outputs of every layer's forests on `x`, first layer first.
    pub fn layer_outputs(&self, x: &[f64]) -> Vec<Vec<ClassVector>> {
        let mut outputs: Vec<Vec<ClassVector>> = Vec::with_capacity(self.layers.len());
        for (l, forests) in self.layers.iter().enumerate() {
            let input = layer_input(l, x, outputs.last().map(Vec::as_slice)).expect("arity is fixed");
            let cvs = if self.use_pool() {
                forests.par_iter().map(|f| f.predict_proba(&input)).collect()
            } else {
                forests.iter().map(|f| f.predict_proba(&input)).collect()
            };
            outputs.push(cvs);
        }
        outputs
    }

    /// Trains layer by layer, feeding each layer the pre-update outputs of
    /// the one before. Returns the prediction the model would have made on
    /// `x` before this update.
    pub fn train_observed(&mut self, x: &[f64], y: usize) -> (ClassVector, DriftReport) {
        let (mut by_depth, report) = self.train_observed_by_depth(x, y);
        (by_depth.pop().expect("at least one layer"), report)
    }

    /// Like [`train_observed`](Self::train_observed), but returns one
    /// pre-update prediction per depth: entry `l` is the mean of layer `l`'s
    /// four class vectors, which is exactly what a cascade with the same
    /// seed truncated to `l + 1` layers predicts, since no layer depends on
    /// the layers after it.
    pub fn train_observed_by_depth(&mut self, x: &[f64], y: usize) -> (Vec<ClassVector>, DriftReport) {
        let pool = self.use_pool();
        let mut report = DriftReport::default();
        let mut by_depth = Vec::with_capacity(self.layers.len());
        let mut prev: Option<Vec<ClassVector>> = None;
        for (l, forests) in self.layers.iter_mut().enumerate() {
            let input = layer_input(l, x, prev.as_deref()).expect("arity is fixed");
            let outcomes: Vec<(ClassVector, DriftReport)> = if pool {
                forests.par_iter_mut().map(|f| f.train_observed(&input, y)).collect()
            } else {
                forests.iter_mut().map(|f| f.train_observed(&input, y)).collect()
            };
            let mut cvs = Vec::with_capacity(FORESTS_PER_LAYER);
            for (cv, r) in outcomes {
                report += r;
                cvs.push(cv);
            }
            by_depth.push(ClassVector::mean(&cvs));
            prev = Some(cvs);
        }
        (by_depth, report)
    }

    /// Structured text summary: layers, forests, trees and detector counters.
    pub fn summary(&self) -> String {
        let totals = self.totals();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "model=sdf layers={} forests_per_layer={} warnings={} drifts={}",
            self.layers.len(),
            FORESTS_PER_LAYER,
            totals.warnings,
            totals.drifts
        );
        for (l, forests) in self.layers.iter().enumerate() {
            let _ = writeln!(out, "layer={l} input_dim={}", forests[0].schema().n_features());
            for (j, f) in forests.iter().enumerate() {
                let t = f.totals();
                let in_warning = f.members().iter().filter(|m| m.in_warning()).count();
                let splits: usize = f.members().iter().map(|m| m.tree().n_splits()).sum();
                let _ = writeln!(
                    out,
                    "  forest={j} trees={} subspace={} warnings={} drifts={} in_warning={in_warning} splits={splits}",
                    f.members().len(),
                    f.subspace_size(),
                    t.warnings,
                    t.drifts
                );
            }
        }
        out
    }
}

impl Classifier for StreamingDeepForest {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn predict_proba(&self, x: &[f64]) -> ClassVector {
        let outputs = self.layer_outputs(x);
        ClassVector::mean(outputs.last().expect("at least one layer"))
    }

    fn learn(&mut self, x: &[f64], y: usize) -> DriftReport {
        self.train_observed(x, y).1
    }

    fn learn_observed(&mut self, x: &[f64], y: usize) -> (ClassVector, DriftReport) {
        self.train_observed(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_set() {
        assert_eq!(subspace_sizes(3), [2, 2, 1, 2]);
        assert_eq!(subspace_sizes(21), [5, 5, 10, 15]);
        assert_eq!(subspace_sizes(1), [1, 1, 1, 1]);
    }

    #[test]
    fn input_arity_is_checked() {
        let cv = ClassVector::uniform(2);
        assert!(layer_input(1, &[0.0], None).is_err());
        assert!(layer_input(0, &[0.0], Some(&[cv.clone()])).is_err());
        assert!(layer_input(1, &[0.0], Some(&[cv.clone(), cv])).is_err());
    }

    #[test]
    fn zero_layers_rejected() {
        let cfg = CascadeConfig {
            n_layers: 0,
            ..CascadeConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::Config { .. })));
    }
}
