use std::ops::AddAssign;

use crate::{ClassVector, Error, Instance, Result, StreamSchema};

/// Warning/drift events raised while training.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DriftReport {
    pub warnings: usize,
    pub drifts: usize,
}

impl AddAssign for DriftReport {
    fn add_assign(&mut self, rhs: Self) {
        self.warnings += rhs.warnings;
        self.drifts += rhs.drifts;
    }
}

/// An online classifier usable by the prequential harness.
pub trait Classifier: Send {
    /// Schema of the raw instances this model consumes.
    fn schema(&self) -> &StreamSchema;

    fn predict_proba(&self, x: &[f64]) -> ClassVector;

    /// Trains on a labeled feature vector. `y` must be a valid class index.
    fn learn(&mut self, x: &[f64], y: usize) -> DriftReport;

    /// Trains on `(x, y)` and returns the prediction made on `x` before the
    /// update. Models that compute that prediction while training override
    /// this to avoid a second pass.
    fn learn_observed(&mut self, x: &[f64], y: usize) -> (ClassVector, DriftReport) {
        let p = self.predict_proba(x);
        (p, self.learn(x, y))
    }

    fn predict(&self, x: &[f64]) -> usize {
        self.predict_proba(x).argmax()
    }

    fn train(&mut self, instance: &Instance) -> Result<DriftReport> {
        let y = instance
            .y
            .ok_or_else(|| Error::Contract("cannot train on an unlabeled instance".into()))?;
        if y >= self.schema().n_classes() {
            return Err(Error::Contract(format!(
                "class index {y} out of range for {} classes",
                self.schema().n_classes()
            )));
        }
        Ok(self.learn(&instance.x, y))
    }
}
