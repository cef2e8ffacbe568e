//! Adaptive random forests: online bagging of Hoeffding Naive Bayes trees,
//! each with its own warning/drift ADWIN pair and background-tree recovery.

mod forest;
mod member;
mod poisson;

pub use forest::{default_subspace_size, AdaptiveRandomForest, ArfConfig};
pub use member::ArfMember;
pub use poisson::poisson;
