use statrs::function::erf::erf;

use crate::streams::FeatureKind;

/// Smallest standard deviation used when evaluating a Gaussian density.
pub const MIN_STD_DEV: f64 = 1e-6;

/// Weighted running mean/variance (West's update).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GaussianEstimator {
    weight: f64,
    mean: f64,
    m2: f64,
}

impl GaussianEstimator {
    pub fn add(&mut self, x: f64, w: f64) {
        if w <= 0.0 {
            return;
        }
        if self.weight == 0.0 {
            self.weight = w;
            self.mean = x;
            self.m2 = 0.0;
            return;
        }
        let total = self.weight + w;
        let delta = x - self.mean;
        self.mean += w * delta / total;
        self.m2 += w * delta * (x - self.mean);
        self.weight = total;
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance `m2 / (w - 1)`; zero while `w <= 1`.
    pub fn variance(&self) -> f64 {
        if self.weight > 1.0 {
            (self.m2 / (self.weight - 1.0)).max(0.0)
        } else {
            0.0
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Log of the normal density, with the standard deviation floored at
    /// [`MIN_STD_DEV`].
    pub fn log_density(&self, x: f64) -> f64 {
        let sd = self.std_dev().max(MIN_STD_DEV);
        let z = (x - self.mean) / sd;
        -0.5 * z * z - sd.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln()
    }

    /// Estimated weight strictly below `x` under the normal approximation.
    pub fn weight_below(&self, x: f64) -> f64 {
        let sd = self.std_dev();
        if sd == 0.0 {
            return if x > self.mean { self.weight } else { 0.0 };
        }
        let cdf = 0.5 * (1.0 + erf((x - self.mean) / (sd * std::f64::consts::SQRT_2)));
        self.weight * cdf
    }
}

/// Per-class Gaussian statistics of one numeric feature.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericObserver {
    pub per_class: Vec<GaussianEstimator>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl NumericObserver {
    pub fn new(n_classes: usize) -> Self {
        NumericObserver {
            per_class: vec![GaussianEstimator::default(); n_classes],
            min: vec![f64::INFINITY; n_classes],
            max: vec![f64::NEG_INFINITY; n_classes],
        }
    }

    pub fn update(&mut self, x: f64, class: usize, w: f64) {
        self.per_class[class].add(x, w);
        self.min[class] = self.min[class].min(x);
        self.max[class] = self.max[class].max(x);
    }

    /// Class weights on each side of `x <= threshold` / `x > threshold`.
    pub fn binary_split(&self, threshold: f64) -> [Vec<f64>; 2] {
        let m = self.per_class.len();
        let mut left = vec![0.0; m];
        let mut right = vec![0.0; m];
        self.binary_split_into(threshold, &mut left, &mut right);
        [left, right]
    }

    /// [`binary_split`](Self::binary_split) into caller buffers of length M.
    pub fn binary_split_into(&self, threshold: f64, left: &mut [f64], right: &mut [f64]) {
        for c in 0..self.per_class.len() {
            let est = &self.per_class[c];
            let (l, r) = if est.weight() <= 0.0 {
                (0.0, 0.0)
            } else if threshold < self.min[c] {
                (0.0, est.weight())
            } else if threshold >= self.max[c] {
                (est.weight(), 0.0)
            } else {
                let below = est.weight_below(threshold).clamp(0.0, est.weight());
                (below, est.weight() - below)
            };
            left[c] = l;
            right[c] = r;
        }
    }

    /// Overall observed range, `None` before any observation.
    pub fn range(&self) -> Option<(f64, f64)> {
        let lo = self.min.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.max.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo <= hi).then_some((lo, hi))
    }
}

/// Per-class value counts of one nominal feature.
#[derive(Debug, Clone, PartialEq)]
pub struct NominalObserver {
    arity: usize,
    /// Row-major `[class][value]`.
    counts: Vec<f64>,
}

impl NominalObserver {
    pub fn new(n_classes: usize, arity: usize) -> Self {
        NominalObserver {
            arity,
            counts: vec![0.0; n_classes * arity],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn update(&mut self, value: usize, class: usize, w: f64) {
        self.counts[class * self.arity + value] += w;
    }

    pub fn count(&self, class: usize, value: usize) -> f64 {
        self.counts[class * self.arity + value]
    }

    /// Class distribution of every value branch.
    pub fn multiway_split(&self) -> Vec<Vec<f64>> {
        let m = self.counts.len() / self.arity;
        (0..self.arity)
            .map(|v| (0..m).map(|c| self.count(c, v)).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Observer {
    Numeric(NumericObserver),
    Nominal(NominalObserver),
}

impl Observer {
    pub fn for_kind(kind: &FeatureKind, n_classes: usize) -> Self {
        match kind {
            FeatureKind::Numeric => Observer::Numeric(NumericObserver::new(n_classes)),
            FeatureKind::Nominal(values) => Observer::Nominal(NominalObserver::new(n_classes, values.len())),
        }
    }

    #[inline]
    pub fn update(&mut self, x: f64, class: usize, w: f64) {
        match self {
            Observer::Numeric(o) => o.update(x, class, w),
            Observer::Nominal(o) => o.update(nominal_index(x, o.arity()), class, w),
        }
    }

    /// Log-likelihood of `x` for `class`; `class_weight` is the class count
    /// at the leaf (nominal features use Laplace smoothing).
    #[inline]
    pub fn log_likelihood(&self, x: f64, class: usize, class_weight: f64) -> f64 {
        match self {
            Observer::Numeric(o) => o.per_class[class].log_density(x),
            Observer::Nominal(o) => {
                let v = nominal_index(x, o.arity());
                ((o.count(class, v) + 1.0) / (class_weight + o.arity() as f64)).ln()
            }
        }
    }
}

#[inline]
pub(crate) fn nominal_index(x: f64, arity: usize) -> usize {
    (x.max(0.0) as usize).min(arity - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_welford_matches_expansion() {
        let data = [(1.0, 2.0), (4.0, 1.0), (-2.0, 3.0), (0.5, 1.0)];
        let mut est = GaussianEstimator::default();
        for (x, w) in data {
            est.add(x, w);
        }
        let wsum: f64 = data.iter().map(|d| d.1).sum();
        let mean = data.iter().map(|(x, w)| x * w).sum::<f64>() / wsum;
        let ss: f64 = data.iter().map(|(x, w)| w * (x - mean).powi(2)).sum();
        assert!((est.mean() - mean).abs() < 1e-12);
        assert!((est.variance() - ss / (wsum - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn zero_weight_is_ignored() {
        let mut est = GaussianEstimator::default();
        est.add(3.0, 0.0);
        assert_eq!(est, GaussianEstimator::default());
    }

    #[test]
    fn binary_split_conserves_weight() {
        let mut o = NumericObserver::new(2);
        for i in 0..20 {
            o.update(i as f64, i % 2, 1.5);
        }
        for t in [-1.0, 3.3, 10.0, 25.0] {
            let [l, r] = o.binary_split(t);
            for c in 0..2 {
                assert!((l[c] + r[c] - 15.0).abs() < 1e-9);
            }
        }
    }
}
