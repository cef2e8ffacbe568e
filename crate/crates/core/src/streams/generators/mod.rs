//! Synthetic stream generators.
//!
//! Each generator is deterministic given its seed. Label functions follow
//! the customary definitions used by stream-mining toolkits; each file
//! documents its formula.

mod agrawal;
mod hyperplane;
mod rbf;
mod rtg;
mod sea;

pub use agrawal::AgrawalParams;
pub use hyperplane::HyperplaneParams;
pub use rbf::RbfParams;
pub use rtg::RtgParams;
pub use sea::SeaParams;

use super::{Instance, Stream, StreamSchema};
use crate::{Error, Result};

/// Draws instances of one (possibly self-drifting) concept.
pub(crate) trait Concept: Send {
    fn schema(&self) -> &StreamSchema;
    fn draw(&mut self) -> Instance;
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorKind {
    Sea(SeaParams),
    Agrawal(AgrawalParams),
    Rbf(RbfParams),
    Hyperplane(HyperplaneParams),
    RandomTree(RtgParams),
}

impl GeneratorKind {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::Sea(_) => "SEA",
            GeneratorKind::Agrawal(_) => "AGRAWAL",
            GeneratorKind::Rbf(_) => "RBF",
            GeneratorKind::Hyperplane(_) => "HYPERPLANE",
            GeneratorKind::RandomTree(_) => "RTG",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub kind: GeneratorKind,
    pub seed: u64,
    /// Number of instances before end of stream; unbounded when `None`.
    pub length: Option<u64>,
}

impl GeneratorConfig {
    pub fn new(kind: GeneratorKind, seed: u64) -> Self {
        GeneratorConfig { kind, seed, length: None }
    }

    pub fn with_length(mut self, length: u64) -> Self {
        self.length = Some(length);
        self
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            GeneratorKind::Sea(p) => p.validate(),
            GeneratorKind::Agrawal(p) => p.validate(),
            GeneratorKind::Rbf(p) => p.validate(),
            GeneratorKind::Hyperplane(p) => p.validate(),
            GeneratorKind::RandomTree(p) => p.validate(),
        }
    }
}

/// Deterministic instance source built from a [`GeneratorConfig`].
pub struct GeneratedStream {
    concept: Box<dyn Concept>,
    remaining: Option<u64>,
}

impl Stream for GeneratedStream {
    fn schema(&self) -> &StreamSchema {
        self.concept.schema()
    }

    fn next_instance(&mut self) -> Result<Option<Instance>> {
        if let Some(left) = self.remaining.as_mut() {
            if *left == 0 {
                return Ok(None);
            }
            *left -= 1;
        }
        Ok(Some(self.concept.draw()))
    }
}

pub fn create_generator(config: &GeneratorConfig) -> Result<GeneratedStream> {
    config.validate()?;
    let seed = config.seed;
    let concept: Box<dyn Concept> = match &config.kind {
        GeneratorKind::Sea(p) => Box::new(sea::Sea::new(p.clone(), seed)),
        GeneratorKind::Agrawal(p) => Box::new(agrawal::Agrawal::new(p.clone(), seed)),
        GeneratorKind::Rbf(p) => Box::new(rbf::Rbf::new(p.clone(), seed)),
        GeneratorKind::Hyperplane(p) => Box::new(hyperplane::Hyperplane::new(p.clone(), seed)),
        GeneratorKind::RandomTree(p) => Box::new(rtg::RandomTree::new(p.clone(), seed)),
    };
    Ok(GeneratedStream {
        concept,
        remaining: config.length,
    })
}

pub(crate) fn check(ok: bool, field: &str, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::config(field, reason))
    }
}

pub(crate) fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_length() {
        let cfg = GeneratorConfig::new(GeneratorKind::Sea(SeaParams::default()), 1).with_length(100);
        let mut s = create_generator(&cfg).unwrap();
        let mut n = 0;
        while s.next_instance().unwrap().is_some() {
            n += 1;
        }
        assert_eq!(n, 100);
        assert!(s.next_instance().unwrap().is_none());
    }

    #[test]
    fn schema_shapes() {
        let shape = |kind| {
            let s = create_generator(&GeneratorConfig::new(kind, 0)).unwrap();
            (s.schema().n_features(), s.schema().n_classes())
        };
        assert_eq!(shape(GeneratorKind::Sea(SeaParams::default())), (3, 2));
        assert_eq!(shape(GeneratorKind::Agrawal(AgrawalParams::default())), (9, 2));
        assert_eq!(shape(GeneratorKind::Rbf(RbfParams::default())), (10, 5));
        assert_eq!(shape(GeneratorKind::Hyperplane(HyperplaneParams::default())), (10, 2));
        assert_eq!(shape(GeneratorKind::RandomTree(RtgParams::default())), (10, 2));
    }

    #[test]
    fn invalid_parameters_name_the_field() {
        let bad = GeneratorConfig::new(
            GeneratorKind::Agrawal(AgrawalParams {
                function: 11,
                ..AgrawalParams::default()
            }),
            0,
        );
        match create_generator(&bad) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "function"),
            other => panic!("expected config error, got {:?}", other.err()),
        }
    }
}
