use std::sync::Arc;

use super::poisson::poisson;
use crate::drift::Adwin;
use crate::hoeffding::{HoeffdingTree, TreeConfig};
use crate::rng::{derive, seeded, Rng};
use crate::streams::FeatureKind;
use crate::{ClassVector, DriftReport};

/// One tree of the forest with its detectors and optional background tree.
#[derive(Debug, Clone)]
pub struct ArfMember {
    tree: HoeffdingTree,
    tree_id: u64,
    background: Option<(HoeffdingTree, u64)>,
    warning: Adwin,
    drift: Adwin,
    lambda: f64,
    rng: Rng,
    seed: u64,
    trees_created: u64,
    kinds: Arc<[FeatureKind]>,
    n_classes: usize,
    tree_config: TreeConfig,
    totals: DriftReport,
}

impl ArfMember {
    pub(crate) fn new(
        kinds: Arc<[FeatureKind]>,
        n_classes: usize,
        tree_config: TreeConfig,
        lambda: f64,
        warning: Adwin,
        drift: Adwin,
        seed: u64,
    ) -> Self {
        let mut member = ArfMember {
            tree: HoeffdingTree::new(kinds.clone(), n_classes, tree_config.clone()).expect("validated by forest"),
            tree_id: 0,
            background: None,
            warning,
            drift,
            lambda,
            rng: seeded(derive(seed, u64::MAX)),
            seed,
            trees_created: 0,
            kinds,
            n_classes,
            tree_config,
            totals: DriftReport::default(),
        };
        let (tree, id) = member.fresh_tree();
        member.tree = tree;
        member.tree_id = id;
        member
    }

    fn fresh_tree(&mut self) -> (HoeffdingTree, u64) {
        let id = self.trees_created;
        self.trees_created += 1;
        let config = TreeConfig {
            seed: derive(self.seed, id),
            ..self.tree_config.clone()
        };
        let tree = HoeffdingTree::new(self.kinds.clone(), self.n_classes, config).expect("validated by forest");
        (tree, id)
    }

    pub fn tree(&self) -> &HoeffdingTree {
        &self.tree
    }

    /// Identifier of the foreground tree, unique within this member.
    pub fn tree_id(&self) -> u64 {
        self.tree_id
    }

    pub fn background(&self) -> Option<&HoeffdingTree> {
        self.background.as_ref().map(|(t, _)| t)
    }

    pub fn background_id(&self) -> Option<u64> {
        self.background.as_ref().map(|(_, id)| *id)
    }

    pub fn in_warning(&self) -> bool {
        self.background.is_some()
    }

    pub fn warning_detector(&self) -> &Adwin {
        &self.warning
    }

    pub fn drift_detector(&self) -> &Adwin {
        &self.drift
    }

    pub fn totals(&self) -> DriftReport {
        self.totals
    }

    /// Voting weight: prequential accuracy tracked by the warning detector,
    /// zero before any evidence.
    pub fn weight(&self) -> f64 {
        if self.warning.width() == 0 {
            0.0
        } else {
            (1.0 - self.warning.estimate()).clamp(0.0, 1.0)
        }
    }

    pub fn predict_proba(&self, x: &[f64]) -> ClassVector {
        self.tree.predict_proba(x)
    }

    /// Test-then-train step. Returns the foreground posterior and voting
    /// weight from before the update, plus the events raised.
    pub fn train(&mut self, x: &[f64], y: usize) -> (ClassVector, f64, DriftReport) {
        let weight = self.weight();
        let k = f64::from(poisson(self.lambda, &mut self.rng));
        let posterior = self.tree.predict_and_learn(x, y, k);
        if k > 0.0 {
            if let Some((bg, _)) = self.background.as_mut() {
                bg.learn(x, y, k);
            }
        }
        let error = f64::from(u8::from(posterior.argmax() != y));
        let warning = self.warning.update(error);
        let drift = self.drift.update(error);
        let report = self.apply_signals(warning, drift);
        (posterior, weight, report)
    }

    /// Applies detector outcomes: a warning starts a fresh background tree;
    /// a drift promotes the background tree (or a fresh one) and resets both
    /// detectors.
    pub fn apply_signals(&mut self, warning: bool, drift: bool) -> DriftReport {
        let mut report = DriftReport::default();
        if warning {
            self.background = Some(self.fresh_tree());
            report.warnings += 1;
        }
        if drift {
            let (tree, id) = match self.background.take() {
                Some(bg) => bg,
                None => self.fresh_tree(),
            };
            self.tree = tree;
            self.tree_id = id;
            self.warning.reset();
            self.drift.reset();
            report.drifts += 1;
        }
        self.totals += report;
        report
    }

    /// Drops the background tree without touching anything else.
    pub fn discard_background(&mut self) {
        self.background = None;
    }
}
