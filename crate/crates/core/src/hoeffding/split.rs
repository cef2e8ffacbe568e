use super::observer::Observer;
use super::tree::LeafStats;

/// Number of candidate thresholds tried per numeric feature, spread evenly
/// strictly inside the observed range.
pub const NUMERIC_SPLIT_POINTS: usize = 10;

/// Minimum fraction of weight that at least two branches must receive for
/// a split to be considered.
pub const MIN_BRANCH_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitTest {
    /// `x <= threshold` goes to child 0, the rest to child 1.
    Threshold(f64),
    /// One child per nominal value.
    Multiway(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// `None` is the "do not split" candidate with merit 0.
    pub split: Option<(usize, SplitTest)>,
    pub merit: f64,
    pub branches: Vec<Vec<f64>>,
}

/// Outcome of one split attempt at a leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitEvaluation {
    pub best: Candidate,
    pub second_merit: f64,
    /// Hoeffding bound for the leaf's weight.
    pub epsilon: f64,
    /// Total weight at the leaf.
    pub weight: f64,
    pub should_split: bool,
}

/// Shannon entropy (bits) of a weight vector.
pub fn entropy(dist: &[f64]) -> f64 {
    let total: f64 = dist.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    -dist
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            p * p.log2()
        })
        .sum::<f64>()
}

/// Information gain of partitioning `pre` into `branches`. Returns
/// `-inf` when fewer than two branches carry more than
/// [`MIN_BRANCH_FRACTION`] of the weight.
pub fn info_gain<B: AsRef<[f64]>>(pre: &[f64], branches: &[B]) -> f64 {
    gain_from(entropy(pre), branches)
}

fn gain_from<B: AsRef<[f64]>>(pre_entropy: f64, branches: &[B]) -> f64 {
    let weight = |b: &B| b.as_ref().iter().sum::<f64>();
    let total: f64 = branches.iter().map(weight).sum();
    if total <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let big = branches.iter().filter(|b| weight(b) / total > MIN_BRANCH_FRACTION).count();
    if big < 2 {
        return f64::NEG_INFINITY;
    }
    let post: f64 = branches
        .iter()
        .map(|b| weight(b) / total * entropy(b.as_ref()))
        .sum();
    pre_entropy - post
}

fn best_candidate(feature: usize, observer: &Observer, pre: &[f64]) -> Option<Candidate> {
    match observer {
        Observer::Nominal(o) => {
            let branches = o.multiway_split();
            let merit = info_gain(pre, &branches);
            Some(Candidate {
                split: Some((feature, SplitTest::Multiway(o.arity()))),
                merit,
                branches,
            })
        }
        Observer::Numeric(o) => {
            let (lo, hi) = o.range()?;
            if !(lo < hi) {
                return None;
            }
            let m = pre.len();
            let pre_entropy = entropy(pre);
            let mut buf = [vec![0.0; m], vec![0.0; m]];
            let mut best: Option<Candidate> = None;
            for i in 0..NUMERIC_SPLIT_POINTS {
                let t = lo + (hi - lo) * (i + 1) as f64 / (NUMERIC_SPLIT_POINTS + 1) as f64;
                let [l, r] = &mut buf;
                o.binary_split_into(t, l, r);
                let merit = gain_from(pre_entropy, &buf);
                if best.as_ref().is_none_or(|b| merit > b.merit) {
                    best = Some(Candidate {
                        split: Some((feature, SplitTest::Threshold(t))),
                        merit,
                        branches: buf.to_vec(),
                    });
                }
            }
            best
        }
    }
}

/// Ranks the best split of every active feature plus the null split and
/// applies the Hoeffding test. Information gain has range `log2(M)`.
pub fn evaluate_split(leaf: &LeafStats, split_confidence: f64, tie_threshold: f64) -> Option<SplitEvaluation> {
    let pre = leaf.class_counts();
    let n_classes = pre.len();
    let mut candidates: Vec<Candidate> = vec![Candidate {
        split: None,
        merit: 0.0,
        branches: vec![pre.to_vec()],
    }];
    for (&feature, observer) in leaf.features().iter().zip(leaf.observers()) {
        if let Some(c) = best_candidate(feature, observer, pre) {
            candidates.push(c);
        }
    }
    if candidates.len() < 2 {
        return None;
    }
    // Stable sort keeps the null split ahead of equal-merit features.
    candidates.sort_by(|a, b| b.merit.total_cmp(&a.merit));
    let weight = leaf.total_weight();
    let range = (n_classes.max(2) as f64).log2();
    let epsilon = super::bound(range, split_confidence, weight);
    let second_merit = candidates[1].merit;
    let best = candidates.swap_remove(0);
    let should_split = best.split.is_some() && (best.merit - second_merit > epsilon || epsilon < tie_threshold);
    Some(SplitEvaluation {
        best,
        second_merit,
        epsilon,
        weight,
        should_split,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&[1.0, 1.0]), 1.0);
        assert_eq!(entropy(&[5.0, 0.0]), 0.0);
        assert!((entropy(&[1.0, 1.0, 1.0, 1.0]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn perfect_split_gain() {
        let gain = info_gain(&[5.0, 5.0], &[vec![5.0, 0.0], vec![0.0, 5.0]]);
        assert!((gain - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lopsided_split_is_rejected() {
        let gain = info_gain(&[1000.0, 1.0], &[vec![1000.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(gain, f64::NEG_INFINITY);
    }
}
