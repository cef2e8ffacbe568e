//! ADWIN adaptive windowing over values in `[0, 1]`.
//!
//! The window is stored as an exponential histogram: row `i` holds up to
//! `max_buckets` buckets summarising `2^i` consecutive values each. After
//! every insertion all bucket boundaries are tested as cut points between
//! an older sub-window `W0` and a newer `W1`. A cut fires when
//!
//! ```text
//! |mean(W0) - mean(W1)| >= sqrt(2/m * var(W) * ln(2/d')) + 2/(3m) * ln(2/d')
//! 1/m = 1/n0 + 1/n1,  d' = delta / n
//! ```
//!
//! in which case the older sub-window of the firing cut with the largest
//! `n0` is dropped. The scan repeats until no cut fires.

use std::collections::VecDeque;

use crate::{Error, Result};

pub const DEFAULT_MAX_BUCKETS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bucket {
    pub count: u64,
    pub sum: f64,
    /// Sum of squared deviations from the bucket mean.
    pub m2: f64,
}

impl Bucket {
    fn single(v: f64) -> Self {
        Bucket {
            count: 1,
            sum: v,
            m2: 0.0,
        }
    }

    /// Combines two adjacent buckets (parallel variance formula).
    pub fn merge(&self, other: &Bucket) -> Bucket {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let d = self.sum / na - other.sum / nb;
        Bucket {
            count: self.count + other.count,
            sum: self.sum + other.sum,
            m2: self.m2 + other.m2 + na * nb / (na + nb) * d * d,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Adwin {
    delta: f64,
    max_buckets: usize,
    /// `rows[i]` holds buckets of size `2^i`, oldest at the front.
    rows: Vec<VecDeque<Bucket>>,
    width: u64,
    sum: f64,
    m2: f64,
    detections: u64,
}

impl Adwin {
    pub fn new(delta: f64) -> Result<Self> {
        Self::with_max_buckets(delta, DEFAULT_MAX_BUCKETS)
    }

    pub fn with_max_buckets(delta: f64, max_buckets: usize) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Domain(format!("ADWIN delta must lie in (0, 1), got {delta}")));
        }
        if max_buckets < 2 {
            return Err(Error::Domain("ADWIN needs at least two buckets per row".into()));
        }
        Ok(Adwin {
            delta,
            max_buckets,
            rows: Vec::new(),
            width: 0,
            sum: 0.0,
            m2: 0.0,
            detections: 0,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Windowed mean; 0 for an empty window.
    pub fn estimate(&self) -> f64 {
        if self.width == 0 {
            0.0
        } else {
            self.sum / self.width as f64
        }
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }

    /// Population variance of the window.
    pub fn variance(&self) -> f64 {
        if self.width == 0 {
            0.0
        } else {
            (self.m2 / self.width as f64).max(0.0)
        }
    }

    pub fn variance_accumulator(&self) -> f64 {
        self.m2
    }

    pub fn detections(&self) -> u64 {
        self.detections
    }

    pub fn rows(&self) -> &[VecDeque<Bucket>] {
        &self.rows
    }

    pub fn max_buckets(&self) -> usize {
        self.max_buckets
    }

    pub fn reset(&mut self) {
        self.rows.clear();
        self.width = 0;
        self.sum = 0.0;
        self.m2 = 0.0;
    }

    /// Adds `v` and reports whether a change was detected.
    pub fn add_element(&mut self, v: f64) -> Result<bool> {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain(format!("ADWIN input must lie in [0, 1], got {v}")));
        }
        Ok(self.update(v))
    }

    /// Unchecked [`add_element`](Self::add_element).
    pub fn update(&mut self, v: f64) -> bool {
        self.insert(v);
        self.compress();
        let mut changed = false;
        while self.width > 1 {
            let Some(n_buckets) = self.widest_cut() else {
                break;
            };
            for _ in 0..n_buckets {
                self.drop_oldest();
            }
            changed = true;
        }
        if changed {
            self.detections += 1;
        }
        changed
    }

    fn insert(&mut self, v: f64) {
        if self.width > 0 {
            let n = self.width as f64;
            let d = v - self.sum / n;
            self.m2 += n / (n + 1.0) * d * d;
        }
        self.width += 1;
        self.sum += v;
        if self.rows.is_empty() {
            self.rows.push(VecDeque::with_capacity(self.max_buckets + 1));
        }
        self.rows[0].push_back(Bucket::single(v));
    }

    fn compress(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.rows[i].len() <= self.max_buckets {
                break;
            }
            let older = self.rows[i].pop_front().expect("row over capacity");
            let newer = self.rows[i].pop_front().expect("row over capacity");
            if i + 1 == self.rows.len() {
                self.rows.push(VecDeque::with_capacity(self.max_buckets + 1));
            }
            self.rows[i + 1].push_back(older.merge(&newer));
            i += 1;
        }
    }

    /// Iterates buckets from oldest to newest.
    pub fn buckets(&self) -> impl Iterator<Item = &Bucket> {
        self.rows.iter().rev().flat_map(|row| row.iter())
    }

    /// Number of oldest buckets forming `W0` for the firing cut with the
    /// largest `n0`, if any cut fires.
    fn widest_cut(&self) -> Option<usize> {
        let n = self.width as f64;
        let log_term = (2.0 * n / self.delta).ln();
        let var = self.variance();
        let mut n0 = 0u64;
        let mut s0 = 0.0;
        let mut widest = None;
        // |mu0 - mu1| >= (2/3)(1/n0 + 1/n1) L  <=>  |s0 n1 - s1 n0| >= (2/3) n L,
        // a division-free necessary condition checked first (with slack).
        let floor = 2.0 / 3.0 * n * log_term * (1.0 - 1e-9);
        let oldest_first = self.rows.iter().rev().flat_map(|row| {
            let (a, b) = row.as_slices();
            a.iter().chain(b)
        });
        for (k, b) in oldest_first.enumerate() {
            n0 += b.count;
            s0 += b.sum;
            let n1 = self.width - n0;
            if n1 == 0 {
                break;
            }
            if (s0 * n1 as f64 - (self.sum - s0) * n0 as f64).abs() < floor {
                continue;
            }
            let inv_m = 1.0 / n0 as f64 + 1.0 / n1 as f64;
            let diff = (s0 / n0 as f64 - (self.sum - s0) / n1 as f64).abs();
            let linear = 2.0 / 3.0 * inv_m * log_term;
            if diff < linear {
                continue;
            }
            let eps = (2.0 * inv_m * var * log_term).sqrt() + linear;
            if diff >= eps {
                widest = Some(k + 1);
            }
        }
        widest
    }

    fn drop_oldest(&mut self) {
        let Some(top) = self.rows.last_mut() else {
            return;
        };
        let b = top.pop_front().expect("non-empty top row");
        if top.is_empty() {
            self.rows.pop();
        }
        let remaining = self.width - b.count;
        if remaining == 0 {
            self.reset();
            return;
        }
        let (n, nb, nr) = (self.width as f64, b.count as f64, remaining as f64);
        let rest_mean = (self.sum - b.sum) / nr;
        let d = b.sum / nb - rest_mean;
        self.m2 = (self.m2 - b.m2 - nb * nr / n * d * d).max(0.0);
        self.width = remaining;
        self.sum -= b.sum;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_window_conventions() {
        let a = Adwin::new(0.002).unwrap();
        assert_eq!(a.estimate(), 0.0);
        assert_eq!(a.width(), 0);
    }

    #[test]
    fn two_values() {
        let mut a = Adwin::new(0.002).unwrap();
        a.add_element(0.0).unwrap();
        a.add_element(1.0).unwrap();
        assert_eq!(a.estimate(), 0.5);
        assert_eq!(a.width(), 2);
    }

    #[test]
    fn constant_stream_never_flags() {
        let mut a = Adwin::new(0.002).unwrap();
        for _ in 0..1000 {
            assert!(!a.add_element(0.5).unwrap());
        }
        assert_eq!(a.estimate(), 0.5);
        assert_eq!(a.width(), 1000);
    }

    #[test]
    fn rejects_out_of_range() {
        let mut a = Adwin::new(0.002).unwrap();
        assert!(matches!(a.add_element(1.5), Err(Error::Domain(_))));
        assert!(a.add_element(-0.1).is_err());
        assert!(Adwin::new(0.0).is_err());
    }

    #[test]
    fn rows_respect_capacity() {
        let mut a = Adwin::new(0.002).unwrap();
        for i in 0..10_000 {
            a.update((i % 2) as f64);
            assert!(a.rows().iter().all(|r| r.len() <= DEFAULT_MAX_BUCKETS));
        }
        for (i, row) in a.rows().iter().enumerate() {
            assert!(row.iter().all(|b| b.count == 1 << i));
        }
    }

    #[test]
    fn shrinks_on_change() {
        let mut a = Adwin::new(0.002).unwrap();
        for _ in 0..500 {
            a.update(0.0);
        }
        let mut flagged = false;
        for _ in 0..500 {
            let before = a.width();
            if a.update(1.0) {
                assert!(a.width() < before + 1);
                flagged = true;
                break;
            }
        }
        assert!(flagged);
    }
}
