use std::ops::Index;

/// Posterior distribution over the `M` classes of a stream.
///
/// Entries are nonnegative and sum to one (within floating-point error).
/// This is the unit passed between cascade layers.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassVector(Vec<f64>);

impl ClassVector {
    pub fn uniform(n_classes: usize) -> Self {
        ClassVector(vec![1.0 / n_classes as f64; n_classes])
    }

    /// Normalizes nonnegative scores. An all-zero (or non-finite) input
    /// yields the uniform vector.
    pub fn from_scores(mut scores: Vec<f64>) -> Self {
        let total: f64 = scores.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            let n = scores.len();
            return Self::uniform(n);
        }
        for s in scores.iter_mut() {
            *s /= total;
        }
        ClassVector(scores)
    }

    /// Turns log-scores into probabilities (softmax). Entries equal to
    /// `-inf` receive probability zero.
    pub fn from_log_scores(mut logs: Vec<f64>) -> Self {
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY || max.is_nan() {
            return Self::uniform(logs.len());
        }
        for l in logs.iter_mut() {
            *l = (*l - max).exp();
        }
        Self::from_scores(logs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Index of the largest entry; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        argmax(&self.0)
    }

    /// Largest posterior entry (the certainty score).
    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    /// Difference between the two largest entries.
    pub fn margin(&self) -> f64 {
        let (mut first, mut second) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &p in &self.0 {
            if p > first {
                second = first;
                first = p;
            } else if p > second {
                second = p;
            }
        }
        if second == f64::NEG_INFINITY {
            first.max(0.0)
        } else {
            first - second
        }
    }

    /// True when entries are nonnegative and sum to one within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.0.iter().all(|&p| p >= 0.0 && p.is_finite())
            && (self.0.iter().sum::<f64>() - 1.0).abs() <= tol
    }

    /// Unweighted mean of equally sized vectors.
    pub fn mean<'a>(vectors: impl IntoIterator<Item = &'a ClassVector>) -> Self {
        let mut acc: Vec<f64> = Vec::new();
        let mut count = 0usize;
        for v in vectors {
            if acc.is_empty() {
                acc = vec![0.0; v.len()];
            }
            for (a, p) in acc.iter_mut().zip(v.as_slice()) {
                *a += p;
            }
            count += 1;
        }
        for a in acc.iter_mut() {
            *a /= count as f64;
        }
        ClassVector(acc)
    }
}

impl Index<usize> for ClassVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<ClassVector> for Vec<f64> {
    fn from(v: ClassVector) -> Self {
        v.0
    }
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_counts() {
        let v = ClassVector::from_scores(vec![3.0, 1.0]);
        assert_eq!(v.as_slice(), &[0.75, 0.25]);
    }

    #[test]
    fn zero_scores_fall_back_to_uniform() {
        let v = ClassVector::from_scores(vec![0.0; 4]);
        assert_eq!(v.as_slice(), &[0.25; 4]);
    }

    #[test]
    fn argmax_breaks_ties_low() {
        let v = ClassVector::from_scores(vec![1.0, 2.0, 2.0]);
        assert_eq!(v.argmax(), 1);
    }

    #[test]
    fn margin_of_top_two() {
        let v = ClassVector::from_scores(vec![0.5, 0.2, 0.3]);
        assert!((v.margin() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn log_scores_handle_neg_infinity() {
        let v = ClassVector::from_log_scores(vec![f64::NEG_INFINITY, 0.0, 0.0]);
        assert_eq!(v.as_slice(), &[0.0, 0.5, 0.5]);
    }
}
