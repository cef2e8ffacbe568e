use std::collections::HashSet;

use crate::{Error, Result};

/// Type of a single input feature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeatureKind {
    Numeric,
    /// Finite value set; instances carry the value index.
    Nominal(Vec<String>),
}

impl FeatureKind {
    pub fn nominal<S: Into<String>>(values: impl IntoIterator<Item = S>) -> Self {
        FeatureKind::Nominal(values.into_iter().map(Into::into).collect())
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, FeatureKind::Numeric)
    }

    /// Number of nominal values, `None` for numeric features.
    pub fn arity(&self) -> Option<usize> {
        match self {
            FeatureKind::Numeric => None,
            FeatureKind::Nominal(values) => Some(values.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feature {
    pub name: String,
    pub kind: FeatureKind,
}

impl Feature {
    pub fn numeric(name: impl Into<String>) -> Self {
        Feature {
            name: name.into(),
            kind: FeatureKind::Numeric,
        }
    }

    pub fn nominal<S: Into<String>>(name: impl Into<String>, values: impl IntoIterator<Item = S>) -> Self {
        Feature {
            name: name.into(),
            kind: FeatureKind::nominal(values),
        }
    }
}

/// Feature and class metadata of a stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamSchema {
    name: String,
    features: Vec<Feature>,
    class_labels: Vec<String>,
}

impl StreamSchema {
    pub fn new(name: impl Into<String>, features: Vec<Feature>, class_labels: Vec<String>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::Schema("a stream needs at least one feature".into()));
        }
        if class_labels.len() < 2 {
            return Err(Error::Schema(format!(
                "a stream needs at least two classes, got {}",
                class_labels.len()
            )));
        }
        let mut seen = HashSet::new();
        for label in &class_labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::Schema(format!("duplicate class label `{label}`")));
            }
        }
        for f in &features {
            if let FeatureKind::Nominal(values) = &f.kind {
                if values.is_empty() {
                    return Err(Error::Schema(format!("nominal feature `{}` has no values", f.name)));
                }
            }
        }
        Ok(StreamSchema {
            name: name.into(),
            features,
            class_labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn feature_kinds(&self) -> Vec<FeatureKind> {
        self.features.iter().map(|f| f.kind.clone()).collect()
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    /// `d`
    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    /// `M`
    pub fn n_classes(&self) -> usize {
        self.class_labels.len()
    }

    /// Same features and classes; the name is ignored.
    pub fn is_compatible(&self, other: &StreamSchema) -> bool {
        self.features == other.features && self.class_labels == other.class_labels
    }

    /// Checks an instance against this schema.
    pub fn validate(&self, instance: &Instance) -> Result<()> {
        if instance.x.len() != self.features.len() {
            return Err(Error::Contract(format!(
                "instance has {} features, schema declares {}",
                instance.x.len(),
                self.features.len()
            )));
        }
        for (value, feature) in instance.x.iter().zip(&self.features) {
            match &feature.kind {
                FeatureKind::Numeric => {
                    if !value.is_finite() {
                        return Err(Error::Contract(format!("feature `{}` is not finite", feature.name)));
                    }
                }
                FeatureKind::Nominal(values) => {
                    if value.fract() != 0.0 || *value < 0.0 || *value >= values.len() as f64 {
                        return Err(Error::Contract(format!(
                            "feature `{}` has invalid nominal index {value}",
                            feature.name
                        )));
                    }
                }
            }
        }
        if let Some(y) = instance.y {
            if y >= self.n_classes() {
                return Err(Error::Contract(format!("class index {y} out of range")));
            }
        }
        Ok(())
    }
}

/// A feature vector with an optional class index.
///
/// Nominal features hold their value index as an exact integer-valued
/// `f64`, numeric features hold the value itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub x: Vec<f64>,
    pub y: Option<usize>,
}

impl Instance {
    pub fn labeled(x: Vec<f64>, y: usize) -> Self {
        Instance { x, y: Some(y) }
    }

    pub fn unlabeled(x: Vec<f64>) -> Self {
        Instance { x, y: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("c{i}")).collect()
    }

    #[test]
    fn rejects_single_class() {
        assert!(StreamSchema::new("s", vec![Feature::numeric("a")], labels(1)).is_err());
    }

    #[test]
    fn rejects_duplicate_labels() {
        let err = StreamSchema::new("s", vec![Feature::numeric("a")], vec!["x".into(), "x".into()]);
        assert!(matches!(err, Err(Error::Schema(_))));
    }

    #[test]
    fn rejects_empty_nominal() {
        let f = Feature::nominal("a", Vec::<String>::new());
        assert!(StreamSchema::new("s", vec![f], labels(2)).is_err());
    }

    #[test]
    fn validates_nominal_range() {
        let s = StreamSchema::new("s", vec![Feature::nominal("a", ["p", "q"])], labels(2)).unwrap();
        assert!(s.validate(&Instance::labeled(vec![1.0], 0)).is_ok());
        assert!(s.validate(&Instance::labeled(vec![2.0], 0)).is_err());
        assert!(s.validate(&Instance::labeled(vec![0.0], 2)).is_err());
    }
}
