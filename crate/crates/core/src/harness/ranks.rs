use std::collections::HashSet;
use std::io::Read;
use std::path::Path;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::{Error, Result};

/// Accuracies (%) of seven stream classifiers on twenty datasets, one row
/// per dataset.
pub const BENCHMARK_ACCURACY_CSV: &str = include_str!("../../data/benchmark_accuracy.csv");

/// Two-tailed Nemenyi critical values at alpha = 0.05 for k = 2..=20.
const Q_05: [f64; 19] = [
    1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164, 3.219, 3.268, 3.313, 3.354, 3.391, 3.426,
    3.458, 3.489, 3.517, 3.544,
];

/// `q_alpha` for `k` methods; only alpha = 0.05 is tabulated.
pub fn nemenyi_q(k: usize, alpha: f64) -> Result<f64> {
    if (alpha - 0.05).abs() > 1e-12 {
        return Err(Error::Domain(format!("critical values are tabulated for alpha = 0.05 only, got {alpha}")));
    }
    k.checked_sub(2)
        .and_then(|i| Q_05.get(i).copied())
        .ok_or_else(|| Error::Domain(format!("critical values cover 2..=20 methods, got {k}")))
}

/// Methods-by-datasets accuracy table.
#[derive(Debug, Clone, PartialEq)]
pub struct RankMatrix {
    methods: Vec<String>,
    datasets: Vec<String>,
    /// `cells[dataset][method]`
    cells: Vec<Vec<Option<f64>>>,
}

fn check_unique(names: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::Data(format!("duplicate {what} `{n}`")));
        }
    }
    Ok(())
}

impl RankMatrix {
    /// `cells[d][m]` is the accuracy of method `m` on dataset `d`; `None`
    /// marks a missing cell.
    pub fn new(methods: Vec<String>, datasets: Vec<String>, cells: Vec<Vec<Option<f64>>>) -> Result<Self> {
        check_unique(&methods, "method")?;
        check_unique(&datasets, "dataset")?;
        if cells.len() != datasets.len() {
            return Err(Error::Data(format!("{} rows for {} datasets", cells.len(), datasets.len())));
        }
        for (d, row) in datasets.iter().zip(&cells) {
            if row.len() != methods.len() {
                return Err(Error::Data(format!(
                    "dataset `{d}` has {} cells for {} methods",
                    row.len(),
                    methods.len()
                )));
            }
        }
        Ok(RankMatrix { methods, datasets, cells })
    }

    /// Reads a CSV whose header is `dataset,<method>...` and whose rows are
    /// `<dataset>,<accuracy>...`. Empty cells are missing values.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers().map_err(|e| Error::Data(e.to_string()))?.clone();
        if header.len() < 2 {
            return Err(Error::Data("header needs a dataset column and at least one method".into()));
        }
        let methods: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut datasets = Vec::new();
        let mut cells = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let line = i + 2;
            let rec = rec.map_err(|e| Error::row(line, e.to_string()))?;
            datasets.push(rec[0].to_string());
            let row = rec
                .iter()
                .skip(1)
                .map(|c| {
                    if c.is_empty() {
                        Ok(None)
                    } else {
                        c.parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite())
                            .map(Some)
                            .ok_or_else(|| Error::row(line, format!("`{c}` is not a number")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            cells.push(row);
        }
        Self::new(methods, datasets, cells)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv(std::fs::File::open(path)?)
    }

    /// The bundled benchmark table.
    pub fn benchmark() -> Self {
        Self::from_csv(BENCHMARK_ACCURACY_CSV.as_bytes()).expect("bundled table parses")
    }

    pub fn methods(&self) -> &[String] {
        &self.methods
    }

    pub fn datasets(&self) -> &[String] {
        &self.datasets
    }

    pub fn get(&self, dataset: usize, method: usize) -> Option<f64> {
        self.cells[dataset][method]
    }

    /// Per-dataset ranks (1 = highest accuracy, ties share the mean rank),
    /// indexed `[dataset][method]`.
    pub fn dataset_ranks(&self) -> Result<Vec<Vec<f64>>> {
        self.cells
            .iter()
            .enumerate()
            .map(|(d, row)| {
                let values = row
                    .iter()
                    .enumerate()
                    .map(|(m, v)| {
                        v.ok_or_else(|| {
                            Error::Data(format!(
                                "missing accuracy for method `{}` on dataset `{}`",
                                self.methods[m], self.datasets[d]
                            ))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Ok(rank_descending(&values))
            })
            .collect()
    }

    /// Mean rank of each method over all datasets.
    pub fn average_ranks(&self) -> Result<Vec<f64>> {
        let ranks = self.dataset_ranks()?;
        let n = ranks.len() as f64;
        Ok((0..self.methods.len())
            .map(|m| ranks.iter().map(|r| r[m]).sum::<f64>() / n)
            .collect())
    }
}

fn rank_descending(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // Positions i..=j hold ranks i+1..=j+1.
        let shared = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = shared;
        }
        i = j + 1;
    }
    ranks
}

#[derive(Debug, Clone, PartialEq)]
pub struct FriedmanNemenyi {
    pub average_ranks: Vec<f64>,
    pub statistic: f64,
    pub p_value: f64,
    pub reject: bool,
    pub critical_distance: f64,
    pub alpha: f64,
}

/// Friedman chi-square test over the rank matrix and the Nemenyi critical
/// distance `q_alpha * sqrt(k(k+1) / 6N)`.
pub fn friedman_nemenyi(matrix: &RankMatrix, alpha: f64) -> Result<FriedmanNemenyi> {
    let k = matrix.methods().len();
    let n = matrix.datasets().len();
    if k < 3 || n < 2 {
        return Err(Error::Domain(format!("need at least 3 methods and 2 datasets, got {k} and {n}")));
    }
    let q = nemenyi_q(k, alpha)?;
    let average_ranks = matrix.average_ranks()?;
    let (kf, nf) = (k as f64, n as f64);
    let sum_sq: f64 = average_ranks.iter().map(|r| r * r).sum();
    let statistic = (12.0 * nf / (kf * (kf + 1.0)) * (sum_sq - kf * (kf + 1.0).powi(2) / 4.0)).max(0.0);
    let chi = ChiSquared::new(kf - 1.0).map_err(|e| Error::Domain(e.to_string()))?;
    let p_value = chi.sf(statistic);
    Ok(FriedmanNemenyi {
        average_ranks,
        statistic,
        p_value,
        reject: p_value < alpha,
        critical_distance: q * (kf * (kf + 1.0) / (6.0 * nf)).sqrt(),
        alpha,
    })
}
