use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::index::sample;

use super::observer::{nominal_index, Observer};
use super::split::{evaluate_split, SplitEvaluation, SplitTest};
use crate::proba::argmax;
use crate::rng::{seeded, Rng};
use crate::streams::FeatureKind;
use crate::{ClassVector, Error, Instance, Result};

/// Which predictor a leaf uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeafPrediction {
    MajorityClass,
    NaiveBayes,
    /// Naive Bayes unless majority class has been more accurate at this leaf.
    #[default]
    NaiveBayesAdaptive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeConfig {
    /// Leaf weight between split attempts.
    pub grace_period: f64,
    /// `delta` of the Hoeffding bound.
    pub split_confidence: f64,
    pub tie_threshold: f64,
    /// Features sampled per leaf; `None` uses every feature.
    pub subspace_size: Option<usize>,
    pub leaf_prediction: LeafPrediction,
    pub seed: u64,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            grace_period: 50.0,
            split_confidence: 0.01,
            tie_threshold: 0.05,
            subspace_size: None,
            leaf_prediction: LeafPrediction::NaiveBayesAdaptive,
            seed: 1,
        }
    }
}

impl TreeConfig {
    pub fn validate(&self, n_features: usize) -> Result<()> {
        if !(self.grace_period >= 1.0) {
            return Err(Error::config("grace_period", "must be at least 1"));
        }
        if !(self.split_confidence > 0.0 && self.split_confidence < 1.0) {
            return Err(Error::config("split_confidence", "must lie in (0, 1)"));
        }
        if !(self.tie_threshold >= 0.0) {
            return Err(Error::config("tie_threshold", "must be nonnegative"));
        }
        if let Some(m) = self.subspace_size {
            if m < 1 || m > n_features {
                return Err(Error::config(
                    "subspace_size",
                    format!("must lie in 1..={n_features}, got {m}"),
                ));
            }
        }
        Ok(())
    }
}

/// Sufficient statistics of a leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafStats {
    class_counts: Vec<f64>,
    features: Vec<usize>,
    observers: Vec<Observer>,
    weight_at_last_attempt: f64,
    nb_correct: f64,
    mc_correct: f64,
    depth: usize,
}

impl LeafStats {
    fn new(features: Vec<usize>, kinds: &[FeatureKind], n_classes: usize, depth: usize) -> Self {
        let observers = features.iter().map(|&f| Observer::for_kind(&kinds[f], n_classes)).collect();
        LeafStats {
            class_counts: vec![0.0; n_classes],
            features,
            observers,
            weight_at_last_attempt: 0.0,
            nb_correct: 0.0,
            mc_correct: 0.0,
            depth,
        }
    }

    pub fn class_counts(&self) -> &[f64] {
        &self.class_counts
    }

    /// Active feature subset, ascending.
    pub fn features(&self) -> &[usize] {
        &self.features
    }

    pub fn observers(&self) -> &[Observer] {
        &self.observers
    }

    pub fn total_weight(&self) -> f64 {
        self.class_counts.iter().sum()
    }

    pub fn nb_correct(&self) -> f64 {
        self.nb_correct
    }

    pub fn mc_correct(&self) -> f64 {
        self.mc_correct
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn is_pure(&self) -> bool {
        self.class_counts.iter().filter(|&&c| c > 0.0).count() < 2
    }

    /// Unnormalized Naive Bayes log-posterior per class.
    pub fn naive_bayes_log_scores(&self, x: &[f64]) -> Vec<f64> {
        let total = self.total_weight();
        self.class_counts
            .iter()
            .enumerate()
            .map(|(c, &count)| {
                if count <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                let mut score = (count / total).ln();
                for (&f, obs) in self.features.iter().zip(&self.observers) {
                    score += obs.log_likelihood(x[f], c, count);
                }
                score
            })
            .collect()
    }

    pub fn naive_bayes(&self, x: &[f64]) -> ClassVector {
        ClassVector::from_log_scores(self.naive_bayes_log_scores(x))
    }

    pub fn majority(&self) -> ClassVector {
        ClassVector::from_scores(self.class_counts.clone())
    }

    fn uses_naive_bayes(&self, mode: LeafPrediction) -> bool {
        match mode {
            LeafPrediction::MajorityClass => false,
            LeafPrediction::NaiveBayes => true,
            LeafPrediction::NaiveBayesAdaptive => self.nb_correct >= self.mc_correct,
        }
    }

    fn update(&mut self, x: &[f64], y: usize, w: f64, mode: LeafPrediction) {
        if mode == LeafPrediction::NaiveBayesAdaptive && self.total_weight() > 0.0 {
            let nb = self.naive_bayes_log_scores(x);
            self.record_outcome(&nb, y, w);
        }
        self.add(x, y, w);
    }

    fn record_outcome(&mut self, nb_scores: &[f64], y: usize, w: f64) {
        if argmax(&self.class_counts) == y {
            self.mc_correct += w;
        }
        if argmax(nb_scores) == y {
            self.nb_correct += w;
        }
    }

    fn add(&mut self, x: &[f64], y: usize, w: f64) {
        self.class_counts[y] += w;
        for (&f, obs) in self.features.iter().zip(self.observers.iter_mut()) {
            obs.update(x[f], y, w);
        }
    }
}

#[derive(Debug, Clone)]
struct SplitNode {
    feature: usize,
    test: SplitTest,
    children: Vec<usize>,
    /// Class counts of the leaf this node replaced.
    frozen_counts: Vec<f64>,
}

#[derive(Debug, Clone)]
enum Node {
    Split(SplitNode),
    Leaf(Box<LeafStats>),
}

/// Leaf statistics and decision captured when a split was applied.
#[derive(Debug, Clone)]
pub struct SplitRecord {
    pub node: usize,
    pub stats: LeafStats,
    pub evaluation: SplitEvaluation,
}

/// Hoeffding tree with Naive Bayes leaves over a fixed feature layout.
#[derive(Debug, Clone)]
pub struct HoeffdingTree {
    config: TreeConfig,
    kinds: Arc<[FeatureKind]>,
    n_classes: usize,
    nodes: Vec<Node>,
    rng: Rng,
    total_weight: f64,
    n_splits: usize,
    last_split: Option<Box<SplitRecord>>,
}

impl HoeffdingTree {
    pub fn new(kinds: Arc<[FeatureKind]>, n_classes: usize, config: TreeConfig) -> Result<Self> {
        if kinds.is_empty() {
            return Err(Error::config("features", "a tree needs at least one feature"));
        }
        if n_classes < 2 {
            return Err(Error::config("n_classes", "a tree needs at least two classes"));
        }
        config.validate(kinds.len())?;
        let mut tree = HoeffdingTree {
            rng: seeded(config.seed),
            config,
            kinds,
            n_classes,
            nodes: Vec::new(),
            total_weight: 0.0,
            n_splits: 0,
            last_split: None,
        };
        let root = tree.new_leaf(0);
        tree.nodes.push(Node::Leaf(Box::new(root)));
        Ok(tree)
    }

    pub fn config(&self) -> &TreeConfig {
        &self.config
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn n_features(&self) -> usize {
        self.kinds.len()
    }

    fn new_leaf(&mut self, depth: usize) -> LeafStats {
        let d = self.kinds.len();
        let m = self.config.subspace_size.unwrap_or(d).min(d);
        let features = if m == d {
            (0..d).collect()
        } else {
            let mut f = sample(&mut self.rng, d, m).into_vec();
            f.sort_unstable();
            f
        };
        LeafStats::new(features, &self.kinds, self.n_classes, depth)
    }

    /// Leaf reached by `x` and the counts of the deepest split node on the path.
    fn route(&self, x: &[f64]) -> (usize, Option<&[f64]>) {
        let mut idx = 0;
        let mut ancestor = None;
        loop {
            match &self.nodes[idx] {
                Node::Leaf(_) => return (idx, ancestor),
                Node::Split(s) => {
                    ancestor = Some(s.frozen_counts.as_slice());
                    let branch = match s.test {
                        SplitTest::Threshold(t) => usize::from(x[s.feature] > t),
                        SplitTest::Multiway(arity) => nominal_index(x[s.feature], arity),
                    };
                    idx = s.children[branch];
                }
            }
        }
    }

    pub fn train(&mut self, instance: &Instance, weight: f64) -> Result<()> {
        let y = instance
            .y
            .ok_or_else(|| Error::Contract("cannot train on an unlabeled instance".into()))?;
        if !(weight >= 0.0) || !weight.is_finite() {
            return Err(Error::Domain(format!("training weight must be nonnegative, got {weight}")));
        }
        if instance.x.len() != self.kinds.len() {
            return Err(Error::Contract(format!(
                "instance has {} features, tree expects {}",
                instance.x.len(),
                self.kinds.len()
            )));
        }
        if y >= self.n_classes {
            return Err(Error::Contract(format!("class index {y} out of range")));
        }
        self.learn(&instance.x, y, weight);
        Ok(())
    }

    /// Unchecked training entry point used by the ensembles.
    pub fn learn(&mut self, x: &[f64], y: usize, weight: f64) {
        if weight <= 0.0 {
            return;
        }
        let (idx, _) = self.route(x);
        self.total_weight += weight;
        let mode = self.config.leaf_prediction;
        let Node::Leaf(leaf) = &mut self.nodes[idx] else {
            unreachable!("route ends at a leaf")
        };
        leaf.update(x, y, weight, mode);
        self.after_update(idx);
    }

    fn after_update(&mut self, idx: usize) {
        let Node::Leaf(leaf) = &mut self.nodes[idx] else {
            return;
        };
        let seen = leaf.total_weight();
        if seen - leaf.weight_at_last_attempt >= self.config.grace_period {
            leaf.weight_at_last_attempt = seen;
            if !leaf.is_pure() {
                self.attempt_split(idx);
            }
        }
    }

    /// Same as `predict_proba(x)` followed by `learn(x, y, weight)`, with a
    /// single traversal.
    pub fn predict_and_learn(&mut self, x: &[f64], y: usize, weight: f64) -> ClassVector {
        if weight <= 0.0 {
            return self.predict_proba(x);
        }
        let (idx, ancestor) = self.route(x);
        let empty = matches!(&self.nodes[idx], Node::Leaf(l) if l.total_weight() <= 0.0);
        let fallback = empty.then(|| match ancestor {
            Some(counts) => ClassVector::from_scores(counts.to_vec()),
            None => ClassVector::uniform(self.n_classes),
        });
        let mode = self.config.leaf_prediction;
        self.total_weight += weight;
        let Node::Leaf(leaf) = &mut self.nodes[idx] else {
            unreachable!("route ends at a leaf")
        };
        let prediction = if let Some(p) = fallback {
            p
        } else {
            let use_nb = leaf.uses_naive_bayes(mode);
            let needs_nb = use_nb || mode == LeafPrediction::NaiveBayesAdaptive;
            let nb = if needs_nb { leaf.naive_bayes_log_scores(x) } else { Vec::new() };
            if mode == LeafPrediction::NaiveBayesAdaptive {
                leaf.record_outcome(&nb, y, weight);
            }
            if use_nb {
                ClassVector::from_log_scores(nb)
            } else {
                leaf.majority()
            }
        };
        leaf.add(x, y, weight);
        self.after_update(idx);
        prediction
    }

    fn attempt_split(&mut self, idx: usize) {
        let Node::Leaf(leaf) = &self.nodes[idx] else {
            return;
        };
        let Some(eval) = evaluate_split(leaf, self.config.split_confidence, self.config.tie_threshold) else {
            return;
        };
        if !eval.should_split {
            return;
        }
        let (feature, test) = eval.best.split.expect("should_split implies a real split");
        let depth = leaf.depth + 1;
        let n_children = match test {
            SplitTest::Threshold(_) => 2,
            SplitTest::Multiway(arity) => arity,
        };
        let mut children = Vec::with_capacity(n_children);
        for _ in 0..n_children {
            let child = self.new_leaf(depth);
            children.push(self.nodes.len());
            self.nodes.push(Node::Leaf(Box::new(child)));
        }
        let old = std::mem::replace(
            &mut self.nodes[idx],
            Node::Split(SplitNode {
                feature,
                test,
                children,
                frozen_counts: Vec::new(),
            }),
        );
        let Node::Leaf(stats) = old else { unreachable!() };
        if let Node::Split(s) = &mut self.nodes[idx] {
            s.frozen_counts = stats.class_counts.clone();
        }
        self.n_splits += 1;
        self.last_split = Some(Box::new(SplitRecord {
            node: idx,
            stats: *stats,
            evaluation: eval,
        }));
    }

    pub fn predict_proba(&self, x: &[f64]) -> ClassVector {
        let (idx, ancestor) = self.route(x);
        let Node::Leaf(leaf) = &self.nodes[idx] else {
            unreachable!("route ends at a leaf")
        };
        if leaf.total_weight() <= 0.0 {
            // Fresh leaf: fall back to the class mix seen before the split.
            return match ancestor {
                Some(counts) => ClassVector::from_scores(counts.to_vec()),
                None => ClassVector::uniform(self.n_classes),
            };
        }
        if leaf.uses_naive_bayes(self.config.leaf_prediction) {
            leaf.naive_bayes(x)
        } else {
            leaf.majority()
        }
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        self.predict_proba(x).argmax()
    }

    pub fn leaf_for(&self, x: &[f64]) -> &LeafStats {
        match &self.nodes[self.route(x).0] {
            Node::Leaf(l) => l,
            Node::Split(_) => unreachable!(),
        }
    }

    pub fn leaves(&self) -> impl Iterator<Item = &LeafStats> {
        self.nodes.iter().filter_map(|n| match n {
            Node::Leaf(l) => Some(l.as_ref()),
            Node::Split(_) => None,
        })
    }

    /// `(feature, weight frozen at split time)` of every internal node.
    pub fn split_nodes(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            Node::Split(s) => Some((s.feature, s.frozen_counts.iter().sum())),
            Node::Leaf(_) => None,
        })
    }

    /// Total weight ever passed to `learn`.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn n_splits(&self) -> usize {
        self.n_splits
    }

    pub fn n_leaves(&self) -> usize {
        self.leaves().count()
    }

    pub fn depth(&self) -> usize {
        self.leaves().map(|l| l.depth).max().unwrap_or(0)
    }

    pub fn last_split(&self) -> Option<&SplitRecord> {
        self.last_split.as_deref()
    }

    /// Feature of the root split, if the root has split.
    pub fn root_feature(&self) -> Option<usize> {
        match &self.nodes[0] {
            Node::Split(s) => Some(s.feature),
            Node::Leaf(_) => None,
        }
    }

    /// Indented text rendering of the tree structure.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        self.dump_node(0, 0, &mut out);
        out
    }

    fn dump_node(&self, idx: usize, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match &self.nodes[idx] {
            Node::Leaf(l) => {
                let _ = writeln!(out, "{pad}leaf counts={:?} features={:?}", l.class_counts, l.features);
            }
            Node::Split(s) => {
                for (branch, &child) in s.children.iter().enumerate() {
                    let cond = match s.test {
                        SplitTest::Threshold(t) if branch == 0 => format!("x[{}] <= {t:.6}", s.feature),
                        SplitTest::Threshold(t) => format!("x[{}] > {t:.6}", s.feature),
                        SplitTest::Multiway(_) => format!("x[{}] == {branch}", s.feature),
                    };
                    let _ = writeln!(out, "{pad}if {cond}:");
                    self.dump_node(child, indent + 1, out);
                }
            }
        }
    }
}
