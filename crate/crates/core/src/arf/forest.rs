use std::sync::Arc;

use rayon::prelude::*;

use super::member::ArfMember;
use crate::drift::Adwin;
use crate::hoeffding::TreeConfig;
use crate::rng::derive;
use crate::streams::FeatureKind;
use crate::{ClassVector, Classifier, DriftReport, Error, Result, StreamSchema};

/// `floor(sqrt(d)) + 1`, capped at `d`.
pub fn default_subspace_size(d: usize) -> usize {
    ((d as f64).sqrt().floor() as usize + 1).min(d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArfConfig {
    pub n_trees: usize,
    /// Per-tree settings. `tree.subspace_size` of `None` means
    /// [`default_subspace_size`] of the input dimension.
    pub tree: TreeConfig,
    /// Poisson rate of online bagging.
    pub lambda: f64,
    pub warning_delta: f64,
    pub drift_delta: f64,
    pub seed: u64,
    /// Train/predict members on the rayon pool. Results do not depend on it.
    pub parallel: bool,
}

impl Default for ArfConfig {
    fn default() -> Self {
        ArfConfig {
            n_trees: 50,
            tree: TreeConfig::default(),
            lambda: 6.0,
            warning_delta: 1e-4,
            drift_delta: 1e-5,
            seed: 1,
            parallel: true,
        }
    }
}

impl ArfConfig {
    pub fn validate(&self, n_features: usize) -> Result<()> {
        if self.n_trees < 1 {
            return Err(Error::config("n_trees", "must be at least 1"));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::config("lambda", "must be positive"));
        }
        for (name, d) in [("warning_delta", self.warning_delta), ("drift_delta", self.drift_delta)] {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::config(name, "must lie in (0, 1)"));
            }
        }
        if self.drift_delta >= self.warning_delta {
            return Err(Error::config("drift_delta", "must be smaller than warning_delta"));
        }
        self.tree.validate(n_features)
    }
}

#[derive(Debug, Clone)]
pub struct AdaptiveRandomForest {
    schema: StreamSchema,
    config: ArfConfig,
    members: Vec<ArfMember>,
    totals: DriftReport,
}

impl AdaptiveRandomForest {
    pub fn new(schema: StreamSchema, config: ArfConfig) -> Result<Self> {
        let d = schema.n_features();
        config.validate(d)?;
        let kinds: Arc<[FeatureKind]> = schema.feature_kinds().into();
        let tree_config = TreeConfig {
            subspace_size: Some(config.tree.subspace_size.unwrap_or_else(|| default_subspace_size(d))),
            ..config.tree.clone()
        };
        let members = (0..config.n_trees)
            .map(|i| {
                ArfMember::new(
                    kinds.clone(),
                    schema.n_classes(),
                    tree_config.clone(),
                    config.lambda,
                    Adwin::new(config.warning_delta).expect("validated"),
                    Adwin::new(config.drift_delta).expect("validated"),
                    derive(config.seed, i as u64),
                )
            })
            .collect();
        Ok(AdaptiveRandomForest {
            schema,
            config,
            members,
            totals: DriftReport::default(),
        })
    }

    pub fn config(&self) -> &ArfConfig {
        &self.config
    }

    pub fn members(&self) -> &[ArfMember] {
        &self.members
    }

    pub fn members_mut(&mut self) -> &mut [ArfMember] {
        &mut self.members
    }

    /// Warnings and drifts raised since construction.
    pub fn totals(&self) -> DriftReport {
        self.totals
    }

    /// Subspace size used by the trees.
    pub fn subspace_size(&self) -> usize {
        self.members[0].tree().config().subspace_size.unwrap_or(self.schema.n_features())
    }

    fn use_pool(&self) -> bool {
        self.config.parallel && self.members.len() > 1 && rayon::current_num_threads() > 1
    }

    /// Weighted vote, falling back to an unweighted mean when every weight is zero.
    fn combine(&self, votes: &[(ClassVector, f64)]) -> ClassVector {
        let m = self.schema.n_classes();
        let total: f64 = votes.iter().map(|(_, w)| w).sum();
        let mut acc = vec![0.0; m];
        for (p, w) in votes {
            let w = if total > 0.0 { *w } else { 1.0 };
            for (a, v) in acc.iter_mut().zip(p.as_slice()) {
                *a += w * v;
            }
        }
        ClassVector::from_scores(acc)
    }

    /// Trains every member on `(x, y)` and returns the forest's vote on `x`
    /// from before the update (identical to calling `predict_proba` first).
    pub fn train_observed(&mut self, x: &[f64], y: usize) -> (ClassVector, DriftReport) {
        let outcomes: Vec<(ClassVector, f64, DriftReport)> = if self.use_pool() {
            self.members.par_iter_mut().map(|m| m.train(x, y)).collect()
        } else {
            self.members.iter_mut().map(|m| m.train(x, y)).collect()
        };
        let mut report = DriftReport::default();
        let votes: Vec<(ClassVector, f64)> = outcomes
            .into_iter()
            .map(|(p, w, r)| {
                report += r;
                (p, w)
            })
            .collect();
        self.totals += report;
        (self.combine(&votes), report)
    }
}

impl Classifier for AdaptiveRandomForest {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn predict_proba(&self, x: &[f64]) -> ClassVector {
        let votes: Vec<(ClassVector, f64)> = if self.use_pool() {
            self.members.par_iter().map(|m| (m.predict_proba(x), m.weight())).collect()
        } else {
            self.members.iter().map(|m| (m.predict_proba(x), m.weight())).collect()
        };
        self.combine(&votes)
    }

    fn learn(&mut self, x: &[f64], y: usize) -> DriftReport {
        self.train_observed(x, y).1
    }

    fn learn_observed(&mut self, x: &[f64], y: usize) -> (ClassVector, DriftReport) {
        self.train_observed(x, y)
    }
}
