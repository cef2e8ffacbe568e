use std::time::{Duration, Instant};

use crate::active::ActiveLearner;
use crate::cascade::StreamingDeepForest;
use crate::{Classifier, DriftReport, Error, Result, Stream};

/// Default tumbling-window length for windowed accuracy.
pub const DEFAULT_WINDOW: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrequentialRecord {
    /// 1-based position in the stream.
    pub index: u64,
    pub predicted: usize,
    pub actual: usize,
    pub queried: bool,
    /// Accuracy over instances `1..=index`.
    pub accuracy: f64,
    /// Labels queried over instances seen.
    pub label_fraction: f64,
}

/// Aggregate over one tumbling window; the last window may be partial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowRecord {
    /// Index of the last instance in the window.
    pub end: u64,
    pub instances: u64,
    pub correct: u64,
    pub queried: u64,
    pub accuracy: f64,
    /// Cumulative accuracy at `end`.
    pub cumulative_accuracy: f64,
    /// Cumulative label fraction at `end`.
    pub label_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub instances: u64,
    pub correct: u64,
    pub accuracy: f64,
    pub labels: u64,
    pub label_fraction: f64,
    pub warnings: usize,
    pub drifts: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Stop after this many instances even if the stream continues.
    pub max_instances: Option<u64>,
    pub window: usize,
    /// Keep one record per instance (windows are always kept).
    pub keep_records: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_instances: None,
            window: DEFAULT_WINDOW,
            keep_records: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub records: Vec<PrequentialRecord>,
    pub windows: Vec<WindowRecord>,
    pub summary: RunSummary,
}

#[derive(Default)]
struct WindowAcc {
    instances: u64,
    correct: u64,
    queried: u64,
}

impl WindowAcc {
    fn add(&mut self, correct: bool, queried: bool) {
        self.instances += 1;
        self.correct += u64::from(correct);
        self.queried += u64::from(queried);
    }

    fn close(&mut self, end: u64, correct: u64, labels: u64) -> WindowRecord {
        let w = WindowRecord {
            end,
            instances: self.instances,
            correct: self.correct,
            queried: self.queried,
            accuracy: self.correct as f64 / self.instances as f64,
            cumulative_accuracy: correct as f64 / end as f64,
            label_fraction: labels as f64 / end as f64,
        };
        *self = WindowAcc::default();
        w
    }
}

/// Tumbling-window aggregates recomputed from per-instance records.
pub fn windows_from_records(records: &[PrequentialRecord], window: usize) -> Vec<WindowRecord> {
    let mut out = Vec::new();
    let mut acc = WindowAcc::default();
    let (mut correct, mut labels) = (0u64, 0u64);
    for r in records {
        let ok = r.predicted == r.actual;
        correct += u64::from(ok);
        labels += u64::from(r.queried);
        acc.add(ok, r.queried);
        if acc.instances as usize == window {
            out.push(acc.close(r.index, correct, labels));
        }
    }
    if acc.instances > 0 {
        let end = records.last().map_or(0, |r| r.index);
        out.push(acc.close(end, correct, labels));
    }
    out
}

/// Test-then-train run: each instance is predicted and recorded first, then
/// offered to the strategy (every label is taken when there is none), and
/// the model trains only on queried labels.
pub fn run_prequential<M: Classifier + ?Sized>(
    model: &mut M,
    stream: &mut dyn Stream,
    mut strategy: Option<&mut ActiveLearner>,
    options: &RunOptions,
) -> Result<RunOutput> {
    if options.window == 0 {
        return Err(Error::config("window", "must be at least 1"));
    }
    if !model.schema().is_compatible(stream.schema()) {
        return Err(Error::config(
            "model",
            format!(
                "model schema `{}` does not match stream schema `{}`",
                model.schema().name(),
                stream.schema().name()
            ),
        ));
    }
    let start = Instant::now();
    let mut records = Vec::new();
    let mut windows = Vec::new();
    let mut acc = WindowAcc::default();
    let (mut seen, mut correct, mut labels) = (0u64, 0u64, 0u64);
    let mut events = DriftReport::default();
    while options.max_instances.is_none_or(|max| seen < max) {
        let Some(instance) = stream.next_instance()? else {
            break;
        };
        let actual = instance
            .y
            .ok_or_else(|| Error::Data(format!("instance {} has no label", seen + 1)))?;
        let (predicted, queried) = match strategy.as_deref_mut() {
            Some(s) => {
                let posterior = model.predict_proba(&instance.x);
                let queried = s.decide(&posterior);
                if queried {
                    events += model.learn(&instance.x, actual);
                }
                (posterior.argmax(), queried)
            }
            None => {
                // The returned prediction precedes the update.
                let (posterior, report) = model.learn_observed(&instance.x, actual);
                events += report;
                (posterior.argmax(), true)
            }
        };
        seen += 1;
        let ok = predicted == actual;
        correct += u64::from(ok);
        labels += u64::from(queried);
        if options.keep_records {
            records.push(PrequentialRecord {
                index: seen,
                predicted,
                actual,
                queried,
                accuracy: correct as f64 / seen as f64,
                label_fraction: labels as f64 / seen as f64,
            });
        }
        acc.add(ok, queried);
        if acc.instances as usize == options.window {
            windows.push(acc.close(seen, correct, labels));
        }
    }
    if acc.instances > 0 {
        windows.push(acc.close(seen, correct, labels));
    }
    let ratio = |n: u64| if seen == 0 { 0.0 } else { n as f64 / seen as f64 };
    let summary = RunSummary {
        instances: seen,
        correct,
        accuracy: ratio(correct),
        labels,
        label_fraction: ratio(labels),
        warnings: events.warnings,
        drifts: events.drifts,
        wall_time: start.elapsed(),
    };
    Ok(RunOutput {
        records,
        windows,
        summary,
    })
}

/// Fully supervised test-then-train run of a cascade that scores every
/// depth at once: output `l` is the run of the same model truncated to
/// `l + 1` layers. Wall time and drift counts are for the whole model.
pub fn run_prequential_by_depth(
    model: &mut StreamingDeepForest,
    stream: &mut dyn Stream,
    options: &RunOptions,
) -> Result<Vec<RunOutput>> {
    if options.window == 0 {
        return Err(Error::config("window", "must be at least 1"));
    }
    if !model.schema().is_compatible(stream.schema()) {
        return Err(Error::config("model", "model schema does not match stream schema"));
    }
    let depth = model.n_layers();
    let start = Instant::now();
    let mut records = vec![Vec::new(); depth];
    let mut windows = vec![Vec::new(); depth];
    let mut accs: Vec<WindowAcc> = (0..depth).map(|_| WindowAcc::default()).collect();
    let mut correct = vec![0u64; depth];
    let mut seen = 0u64;
    let mut events = DriftReport::default();
    while options.max_instances.is_none_or(|max| seen < max) {
        let Some(instance) = stream.next_instance()? else {
            break;
        };
        let actual = instance
            .y
            .ok_or_else(|| Error::Data(format!("instance {} has no label", seen + 1)))?;
        let (by_depth, report) = model.train_observed_by_depth(&instance.x, actual);
        events += report;
        seen += 1;
        for (l, posterior) in by_depth.iter().enumerate() {
            let predicted = posterior.argmax();
            let ok = predicted == actual;
            correct[l] += u64::from(ok);
            if options.keep_records {
                records[l].push(PrequentialRecord {
                    index: seen,
                    predicted,
                    actual,
                    queried: true,
                    accuracy: correct[l] as f64 / seen as f64,
                    label_fraction: 1.0,
                });
            }
            accs[l].add(ok, true);
            if accs[l].instances as usize == options.window {
                windows[l].push(accs[l].close(seen, correct[l], seen));
            }
        }
    }
    let wall_time = start.elapsed();
    Ok((0..depth)
        .map(|l| {
            if accs[l].instances > 0 {
                windows[l].push(accs[l].close(seen, correct[l], seen));
            }
            let ratio = |n: u64| if seen == 0 { 0.0 } else { n as f64 / seen as f64 };
            RunOutput {
                records: std::mem::take(&mut records[l]),
                windows: std::mem::take(&mut windows[l]),
                summary: RunSummary {
                    instances: seen,
                    correct: correct[l],
                    accuracy: ratio(correct[l]),
                    labels: seen,
                    label_fraction: ratio(seen),
                    warnings: events.warnings,
                    drifts: events.drifts,
                    wall_time,
                },
            }
        })
        .collect())
}
