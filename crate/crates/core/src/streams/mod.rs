//! Instances, schemas and the sources that produce them: synthetic
//! generators, concept-drift mixing and CSV/ARFF file ingestion.

mod concept_drift;
mod config;
pub mod generators;
mod loader;
mod presets;
mod schema;

pub use concept_drift::{drift_wrap, successor_probability, ConceptDriftStream, DriftSpec};
pub use config::{parse_key_values, KeyValues};
pub use generators::{
    create_generator, AgrawalParams, GeneratedStream, GeneratorConfig, GeneratorKind, HyperplaneParams, RbfParams,
    RtgParams, SeaParams,
};
pub use loader::{load_dataset, DataFormat, FileStream, LoadOptions};
pub use presets::Preset;
pub use schema::{Feature, FeatureKind, Instance, StreamSchema};

use crate::Result;

/// A single-consumer source of instances.
///
/// `Ok(None)` signals a clean end of stream; I/O and parse failures are
/// reported as errors.
pub trait Stream: Send {
    fn schema(&self) -> &StreamSchema;

    fn next_instance(&mut self) -> Result<Option<Instance>>;
}

impl<S: Stream + ?Sized> Stream for Box<S> {
    fn schema(&self) -> &StreamSchema {
        (**self).schema()
    }

    fn next_instance(&mut self) -> Result<Option<Instance>> {
        (**self).next_instance()
    }
}
