//! Streaming classification toolkit: a layered cascade of adaptive random
//! forests for evolving data streams, budgeted active-learning strategies,
//! and the supporting stack (Hoeffding Naive Bayes trees, ADWIN change
//! detection, synthetic drifting generators, prequential evaluation and
//! rank statistics).
//!
//! The crate is organised by subsystem:
//!
//! * [`streams`] instance/schema model, generators, drift mixing, file ingestion
//! * [`hoeffding`] incremental decision trees with Naive Bayes leaves
//! * [`drift`] the ADWIN change detector
//! * [`arf`] adaptive random forests with background-tree recovery
//! * [`cascade`] the streaming deep forest
//! * [`active`] labeling-budget strategies and the threshold recurrence
//! * [`harness`] test-then-train runs, ranks and Friedman/Nemenyi tests

pub mod active;
pub mod arf;
pub mod cascade;
pub mod drift;
pub mod error;
pub mod harness;
pub mod hoeffding;
mod model;
mod proba;
pub mod rng;
pub mod streams;

pub use error::{Error, Result};
pub use model::{Classifier, DriftReport};
pub use proba::ClassVector;
pub use streams::{FeatureKind, Instance, Stream, StreamSchema};
