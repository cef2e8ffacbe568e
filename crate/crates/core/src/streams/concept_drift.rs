use rand::Rng as _;

use super::{create_generator, GeneratorConfig, Instance, Stream, StreamSchema};
use crate::rng::{derive, seeded, Rng};
use crate::{Error, Result};

/// Where and how fast a stream switches to a successor concept.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftSpec {
    /// Instance index (1-based) at which both concepts are equally likely.
    pub position: u64,
    /// Transition width in instances; `1` is an abrupt switch.
    pub width: u64,
    pub successor: GeneratorConfig,
}

/// Probability that instance `t` (1-based) comes from the successor:
/// `1 / (1 + exp(-4 (t - p) / w))`.
pub fn successor_probability(t: u64, position: u64, width: u64) -> f64 {
    let z = -4.0 * (t as f64 - position as f64) / width as f64;
    1.0 / (1.0 + z.exp())
}

/// Sigmoid mixture of a base stream and a successor stream.
pub struct ConceptDriftStream {
    base: Box<dyn Stream>,
    successor: Box<dyn Stream>,
    position: u64,
    width: u64,
    emitted: u64,
    rng: Rng,
}

impl ConceptDriftStream {
    pub fn new(base: Box<dyn Stream>, successor: Box<dyn Stream>, position: u64, width: u64, seed: u64) -> Result<Self> {
        if position < 1 {
            return Err(Error::config("position", "must be at least 1"));
        }
        if width < 1 {
            return Err(Error::config("width", "must be at least 1"));
        }
        if !base.schema().is_compatible(successor.schema()) {
            return Err(Error::config(
                "successor",
                format!(
                    "schema of `{}` does not match base stream `{}`",
                    successor.schema().name(),
                    base.schema().name()
                ),
            ));
        }
        Ok(ConceptDriftStream {
            base,
            successor,
            position,
            width,
            emitted: 0,
            rng: seeded(seed),
        })
    }

    /// Number of instances emitted so far.
    pub fn emitted(&self) -> u64 {
        self.emitted
    }
}

impl Stream for ConceptDriftStream {
    fn schema(&self) -> &StreamSchema {
        self.base.schema()
    }

    fn next_instance(&mut self) -> Result<Option<Instance>> {
        let t = self.emitted + 1;
        let p = successor_probability(t, self.position, self.width);
        let next = if self.rng.random::<f64>() < p {
            self.successor.next_instance()?
        } else {
            self.base.next_instance()?
        };
        if next.is_some() {
            self.emitted = t;
        }
        Ok(next)
    }
}

/// Wraps `base` so that it drifts into `spec.successor` around `spec.position`.
pub fn drift_wrap(base: Box<dyn Stream>, spec: &DriftSpec) -> Result<ConceptDriftStream> {
    let successor = create_generator(&spec.successor)?;
    let seed = derive(spec.successor.seed, spec.position);
    ConceptDriftStream::new(base, Box::new(successor), spec.position, spec.width, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::{AgrawalParams, GeneratorKind, SeaParams};

    #[test]
    fn sigmoid_points() {
        assert_eq!(successor_probability(500, 500, 40), 0.5);
        assert!(successor_probability(100, 500, 40) < 1e-15);
        let expected = 1.0 / (1.0 + (-4.0f64).exp());
        assert!((successor_probability(540, 500, 40) - expected).abs() < 1e-15);
        assert!((expected - 0.982).abs() < 1e-3);
    }

    #[test]
    fn abrupt_switch() {
        assert!(successor_probability(99, 100, 1) < 0.02);
        assert!(successor_probability(101, 100, 1) > 0.98);
    }

    #[test]
    fn schema_mismatch_is_rejected() {
        let base = create_generator(&GeneratorConfig::new(GeneratorKind::Sea(SeaParams::default()), 1)).unwrap();
        let spec = DriftSpec {
            position: 10,
            width: 1,
            successor: GeneratorConfig::new(GeneratorKind::Agrawal(AgrawalParams::default()), 2),
        };
        assert!(matches!(drift_wrap(Box::new(base), &spec), Err(Error::Config { .. })));
    }

    #[test]
    fn zero_width_is_rejected() {
        let base = create_generator(&GeneratorConfig::new(GeneratorKind::Sea(SeaParams::default()), 1)).unwrap();
        let spec = DriftSpec {
            position: 10,
            width: 0,
            successor: GeneratorConfig::new(GeneratorKind::Sea(SeaParams::function(2)), 2),
        };
        assert!(drift_wrap(Box::new(base), &spec).is_err());
    }
}
