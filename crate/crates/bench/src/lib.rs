//! Shared fixtures for the throughput benchmarks.

use sdf_core::streams::{Preset, Stream};
use sdf_core::{Instance, StreamSchema};

/// First `n` instances of a named stream, materialized so that generation
/// cost stays out of the measurement.
pub fn instances(preset: Preset, n: u64, seed: u64) -> (StreamSchema, Vec<Instance>) {
    let mut stream = preset.build(n, seed).expect("preset builds");
    let schema = stream.schema().clone();
    let mut out = Vec::with_capacity(n as usize);
    while let Some(inst) = stream.next_instance().expect("generators do not fail") {
        out.push(inst);
    }
    (schema, out)
}
