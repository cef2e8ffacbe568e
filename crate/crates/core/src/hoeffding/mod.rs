//! Hoeffding trees with Naive Bayes leaves.
//!
//! Each leaf tracks class counts plus per-class sufficient statistics for a
//! random subset of the features chosen when the leaf is created. A split is
//! attempted every `grace_period` units of weight and taken when the best
//! information gain beats the runner-up by more than the Hoeffding bound
//! (or the bound falls under the tie threshold).

mod observer;
mod split;
mod tree;

pub use observer::{GaussianEstimator, NominalObserver, NumericObserver, Observer};
pub use split::{entropy, evaluate_split, info_gain, Candidate, SplitEvaluation, SplitTest, NUMERIC_SPLIT_POINTS};
pub use tree::{HoeffdingTree, LeafPrediction, LeafStats, SplitRecord, TreeConfig};

use crate::{Error, Result};

/// Hoeffding bound `sqrt(R^2 ln(1/delta) / (2n))`.
pub fn hoeffding_bound(range: f64, delta: f64, n: f64) -> Result<f64> {
    if !(n > 0.0) {
        return Err(Error::Domain(format!("Hoeffding bound needs n > 0, got {n}")));
    }
    if !(range > 0.0) {
        return Err(Error::Domain(format!("Hoeffding bound needs R > 0, got {range}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("confidence must lie in (0, 1), got {delta}")));
    }
    Ok(bound(range, delta, n))
}

#[inline]
pub(crate) fn bound(range: f64, delta: f64, n: f64) -> f64 {
    (range * range * (1.0 / delta).ln() / (2.0 * n)).sqrt()
}
