//! Nominal dataset and an offline exhaustive information-gain oracle for
//! the first split of a Hoeffding tree.

use std::sync::Arc;

use rand::Rng as _;
use sdf_core::hoeffding::TreeConfig;
use sdf_core::rng::seeded;
use sdf_core::streams::FeatureKind;

pub fn nominal_kinds(arities: &[usize]) -> Arc<[FeatureKind]> {
    arities
        .iter()
        .map(|&a| FeatureKind::nominal((0..a).map(|v| format!("v{v}"))))
        .collect()
}

/// Nominal dataset where the class copies feature 0 with probability `p`
/// and is uniform otherwise.
pub fn nominal_data(arities: &[usize], n_classes: usize, p: f64, n: usize, seed: u64) -> Vec<(Vec<f64>, usize)> {
    let mut rng = seeded(seed);
    (0..n)
        .map(|_| {
            let x: Vec<usize> = arities.iter().map(|&a| rng.random_range(0..a)).collect();
            let y = if rng.random::<f64>() < p {
                x[0] % n_classes
            } else {
                rng.random_range(0..n_classes)
            };
            (x.into_iter().map(|v| v as f64).collect(), y)
        })
        .collect()
}

fn entropy_ln(counts: &[f64]) -> f64 {
    let n: f64 = counts.iter().sum();
    let mut h = 0.0;
    for &c in counts {
        if c > 0.0 {
            h -= c / n * (c / n).ln();
        }
    }
    h / std::f64::consts::LN_2
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSplit {
    pub n: usize,
    pub feature: usize,
    pub merit: f64,
    pub second: f64,
    pub epsilon: f64,
}

/// Recomputes every split attempt from the raw prefix of the data and
/// returns the first attempt that passes the bound check.
pub fn exhaustive_first_split(
    data: &[(Vec<f64>, usize)],
    arities: &[usize],
    n_classes: usize,
    cfg: &TreeConfig,
) -> Option<OracleSplit> {
    let grace = cfg.grace_period as usize;
    for n in (grace..=data.len()).step_by(grace) {
        let prefix = &data[..n];
        let mut pre = vec![0.0; n_classes];
        for (_, y) in prefix {
            pre[*y] += 1.0;
        }
        if pre.iter().filter(|&&c| c > 0.0).count() < 2 {
            continue;
        }
        // (merit, feature); the null split has merit 0 and wins ties.
        let mut ranked: Vec<(f64, Option<usize>)> = vec![(0.0, None)];
        for (f, &arity) in arities.iter().enumerate() {
            let mut table = vec![vec![0.0; n_classes]; arity];
            for (x, y) in prefix {
                table[x[f] as usize][*y] += 1.0;
            }
            let sizes: Vec<f64> = table.iter().map(|row| row.iter().sum()).collect();
            let big = sizes.iter().filter(|&&s| s / n as f64 > 0.01).count();
            let merit = if big < 2 {
                f64::NEG_INFINITY
            } else {
                entropy_ln(&pre)
                    - table
                        .iter()
                        .zip(&sizes)
                        .map(|(row, &s)| if s > 0.0 { s / n as f64 * entropy_ln(row) } else { 0.0 })
                        .sum::<f64>()
            };
            ranked.push((merit, Some(f)));
        }
        ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
        let range = (n_classes as f64).log2();
        let epsilon = (range * range * (1.0 / cfg.split_confidence).ln() / (2.0 * n as f64)).sqrt();
        let (merit, best) = ranked[0];
        let second = ranked[1].0;
        if let Some(feature) = best {
            if merit - second > epsilon || epsilon < cfg.tie_threshold {
                return Some(OracleSplit {
                    n,
                    feature,
                    merit,
                    second,
                    epsilon,
                });
            }
        }
    }
    None
}
