use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;

use sdf_core::active::{ActiveLearner, StrategyKind, DEFAULT_STEP};
use sdf_core::arf::{AdaptiveRandomForest, ArfConfig};
use sdf_core::cascade::{CascadeConfig, StreamingDeepForest};
use sdf_core::harness::{
    friedman_nemenyi, run_prequential, run_prequential_by_depth, RankMatrix, RunOptions, RunOutput, DEFAULT_WINDOW,
};
use sdf_core::hoeffding::{LeafPrediction, TreeConfig};
use sdf_core::rng::derive;
use sdf_core::streams::{create_generator, load_dataset, DataFormat, FeatureKind, LoadOptions, Preset, Stream};
use sdf_core::{Classifier, StreamSchema};

use crate::error::CliError;
use crate::settings::Settings;

/// What a command produced: a CSV body and a human-readable summary.
pub struct Output {
    pub csv: String,
    pub text: String,
}

const DEFAULT_INSTANCES: u64 = 10_000;
const DEFAULT_BUDGETS: &str = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";

fn seed(s: &Settings) -> Result<u64, CliError> {
    s.get_or("seed", 1)
}

pub fn build_stream(s: &Settings) -> Result<Box<dyn Stream>, CliError> {
    let seed = seed(s)?;
    if let Some(path) = s.raw("data") {
        let path = PathBuf::from(path);
        let format = match s.get::<DataFormat>("format")? {
            Some(f) => f,
            None => DataFormat::from_path(&path)
                .ok_or_else(|| CliError::Usage(format!("cannot tell the format of {}; set format", path.display())))?,
        };
        let options = LoadOptions {
            class_column: s.raw("class").map(str::to_string),
        };
        return match load_dataset(&path, format, &options) {
            Ok(stream) => Ok(Box::new(stream)),
            Err(sdf_core::Error::Io(e)) => Err(CliError::Data(format!("cannot read {}: {e}", path.display()))),
            Err(e) => Err(e.into()),
        };
    }
    let instances = s.get_or("instances", DEFAULT_INSTANCES)?;
    if s.raw("generator").is_some() {
        let mut config = s.kv().generator_config()?;
        config.seed = seed;
        config.length = Some(instances);
        return Ok(Box::new(create_generator(&config)?));
    }
    let preset: Preset = s.get_or("stream", Preset::SeaA)?;
    Ok(preset.build(instances, seed)?)
}

fn tree_config(s: &Settings) -> Result<TreeConfig, CliError> {
    let d = TreeConfig::default();
    let leaf_prediction = match s.raw("leaf_prediction").unwrap_or("nba") {
        "mc" => LeafPrediction::MajorityClass,
        "nb" => LeafPrediction::NaiveBayes,
        "nba" => LeafPrediction::NaiveBayesAdaptive,
        other => return Err(CliError::Usage(format!("leaf_prediction must be mc, nb or nba, got `{other}`"))),
    };
    Ok(TreeConfig {
        grace_period: s.get_or("grace_period", d.grace_period)?,
        split_confidence: s.get_or("split_confidence", d.split_confidence)?,
        tie_threshold: s.get_or("tie_threshold", d.tie_threshold)?,
        leaf_prediction,
        ..d
    })
}

fn forest_config(s: &Settings) -> Result<ArfConfig, CliError> {
    let d = ArfConfig::default();
    Ok(ArfConfig {
        n_trees: s.get_or("trees", d.n_trees)?,
        tree: tree_config(s)?,
        lambda: s.get_or("lambda", d.lambda)?,
        warning_delta: s.get_or("warning_delta", d.warning_delta)?,
        drift_delta: s.get_or("drift_delta", d.drift_delta)?,
        seed: derive(seed(s)?, 1),
        parallel: s.get_or("parallel", true)?,
    })
}

fn cascade(s: &Settings, schema: &StreamSchema, layers: usize) -> Result<StreamingDeepForest, CliError> {
    let forest = forest_config(s)?;
    let config = CascadeConfig {
        n_layers: layers,
        seed: forest.seed,
        parallel: forest.parallel,
        forest,
    };
    Ok(StreamingDeepForest::new(schema.clone(), config)?)
}

enum Model {
    Sdf(StreamingDeepForest),
    Arf(AdaptiveRandomForest),
}

impl Model {
    fn build(s: &Settings, schema: &StreamSchema) -> Result<Self, CliError> {
        match s.raw("model").unwrap_or("sdf") {
            "sdf" => Ok(Model::Sdf(cascade(s, schema, s.get_or("layers", 2)?)?)),
            "arf" => Ok(Model::Arf(AdaptiveRandomForest::new(schema.clone(), forest_config(s)?)?)),
            other => Err(CliError::Usage(format!("model must be sdf or arf, got `{other}`"))),
        }
    }

    fn as_classifier(&mut self) -> &mut dyn Classifier {
        match self {
            Model::Sdf(m) => m,
            Model::Arf(m) => m,
        }
    }

    fn summary(&self) -> String {
        match self {
            Model::Sdf(m) => m.summary(),
            Model::Arf(m) => {
                let t = m.totals();
                format!(
                    "model=arf trees={} subspace={} warnings={} drifts={}\n",
                    m.members().len(),
                    m.subspace_size(),
                    t.warnings,
                    t.drifts
                )
            }
        }
    }
}

fn learner(s: &Settings, kind: StrategyKind, budget: f64) -> Result<ActiveLearner, CliError> {
    let step = s.get_or("step", DEFAULT_STEP)?;
    Ok(ActiveLearner::new(kind, budget, derive(seed(s)?, 2))?.with_step(step)?)
}

fn run_options(s: &Settings, keep_records: bool) -> Result<RunOptions, CliError> {
    Ok(RunOptions {
        max_instances: s.get("instances")?,
        window: s.get_or("window", DEFAULT_WINDOW)?,
        keep_records,
    })
}

fn strategy(s: &Settings) -> Result<Option<(StrategyKind, f64)>, CliError> {
    match s.raw("strategy") {
        None | Some("none") => Ok(None),
        Some(name) => {
            let kind: StrategyKind = name.parse()?;
            let budget = s
                .get::<f64>("budget")?
                .ok_or_else(|| CliError::Usage(format!("strategy `{name}` needs a budget")))?;
            Ok(Some((kind, budget)))
        }
    }
}

fn one_run(s: &Settings, active: Option<(StrategyKind, f64)>, keep_records: bool) -> Result<(RunOutput, Model), CliError> {
    let mut stream = build_stream(s)?;
    let mut model = Model::build(s, stream.schema())?;
    let mut learner = active.map(|(k, b)| learner(s, k, b)).transpose()?;
    let out = run_prequential(
        model.as_classifier(),
        stream.as_mut(),
        learner.as_mut(),
        &run_options(s, keep_records)?,
    )?;
    Ok((out, model))
}

fn summary_line(out: &RunOutput) -> String {
    let r = &out.summary;
    format!(
        "instances={} correct={} accuracy={:.6} labels={} label_fraction={:.6} warnings={} drifts={} wall_time_s={:.3}\n",
        r.instances,
        r.correct,
        r.accuracy,
        r.labels,
        r.label_fraction,
        r.warnings,
        r.drifts,
        r.wall_time.as_secs_f64()
    )
}

pub fn run(s: &Settings, per_instance: bool) -> Result<Output, CliError> {
    let (out, model) = one_run(s, strategy(s)?, per_instance)?;
    let mut csv = String::new();
    if per_instance {
        csv.push_str("index,predicted,actual,queried,accuracy,label_fraction\n");
        for r in &out.records {
            let _ = writeln!(
                csv,
                "{},{},{},{},{:.6},{:.6}",
                r.index, r.predicted, r.actual, r.queried, r.accuracy, r.label_fraction
            );
        }
    } else {
        csv.push_str("end,instances,correct,queried,accuracy,cumulative_accuracy,label_fraction\n");
        for w in &out.windows {
            let _ = writeln!(
                csv,
                "{},{},{},{},{:.6},{:.6},{:.6}",
                w.end, w.instances, w.correct, w.queried, w.accuracy, w.cumulative_accuracy, w.label_fraction
            );
        }
    }
    Ok(Output {
        csv,
        text: summary_line(&out) + &model.summary(),
    })
}

fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>, CliError> {
    raw.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("cannot parse `{v}` in {what}")))
        })
        .collect()
}

pub fn sweep(s: &Settings) -> Result<Output, CliError> {
    let budgets: Vec<f64> = parse_list(s.raw("budgets").unwrap_or(DEFAULT_BUDGETS), "budgets")?;
    let strategies: Vec<StrategyKind> = s
        .raw("strategies")
        .unwrap_or("vu,avu")
        .split(',')
        .map(|v| v.trim().parse().map_err(CliError::from))
        .collect::<Result<_, _>>()?;
    let grid: Vec<(StrategyKind, f64)> = strategies
        .iter()
        .flat_map(|&k| budgets.iter().map(move |&b| (k, b)))
        .collect();
    let results: Vec<RunOutput> = grid
        .par_iter()
        .map(|&(k, b)| one_run(s, Some((k, b)), false).map(|(out, _)| out))
        .collect::<Result<_, _>>()?;
    let mut csv = String::from("strategy,budget,instances,accuracy,labels,label_fraction\n");
    let mut text = String::new();
    for ((k, b), out) in grid.iter().zip(&results) {
        let r = &out.summary;
        let _ = writeln!(
            csv,
            "{k},{b},{},{:.6},{},{:.6}",
            r.instances, r.accuracy, r.labels, r.label_fraction
        );
        let _ = write!(text, "strategy={k} budget={b} {}", summary_line(out));
    }
    Ok(Output { csv, text })
}

pub fn depth(s: &Settings) -> Result<Output, CliError> {
    let layers: usize = s.get_or("layers", 3)?;
    let mut stream = build_stream(s)?;
    let mut model = cascade(s, stream.schema(), layers)?;
    let outs = run_prequential_by_depth(&mut model, stream.as_mut(), &run_options(s, false)?)?;
    let mut csv = String::from("layers,instances,correct,accuracy\n");
    for (l, out) in outs.iter().enumerate() {
        let r = &out.summary;
        let _ = writeln!(csv, "{},{},{},{:.6}", l + 1, r.instances, r.correct, r.accuracy);
    }
    let wall = outs.first().map(|o| o.summary.wall_time.as_secs_f64()).unwrap_or(0.0);
    Ok(Output {
        csv,
        text: format!("wall_time_s={wall:.3}\n{}", model.summary()),
    })
}

pub fn rank(s: &Settings) -> Result<Output, CliError> {
    let matrix = match s.raw("input") {
        Some(path) => RankMatrix::from_path(path)?,
        None => RankMatrix::benchmark(),
    };
    let alpha = s.get_or("alpha", 0.05)?;
    let ranks = matrix.average_ranks()?;
    let mut csv = String::from("method,mean_rank\n");
    for (m, r) in matrix.methods().iter().zip(&ranks) {
        let _ = writeln!(csv, "{m},{r:.2}");
    }
    let text = match friedman_nemenyi(&matrix, alpha) {
        Ok(t) => format!(
            "methods={} datasets={} friedman_chi2={:.4} p_value={:.3e} reject={} critical_distance={:.4} alpha={}\n",
            matrix.methods().len(),
            matrix.datasets().len(),
            t.statistic,
            t.p_value,
            t.reject,
            t.critical_distance,
            t.alpha
        ),
        Err(sdf_core::Error::Domain(msg)) if matrix.methods().len() < 3 || matrix.datasets().len() < 2 => {
            format!("friedman test skipped: {msg}\n")
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Output { csv, text })
}

pub fn generate(s: &Settings) -> Result<Output, CliError> {
    if s.raw("data").is_some() {
        return Err(CliError::Usage("generate needs a synthetic stream, not a data file".into()));
    }
    let mut stream = build_stream(s)?;
    let schema = stream.schema().clone();
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Runtime(e.to_string());
    let mut header: Vec<&str> = schema.features().iter().map(|f| f.name.as_str()).collect();
    header.push("class");
    w.write_record(&header).map_err(csv_err)?;
    let mut n = 0u64;
    while let Some(inst) = stream.next_instance()? {
        let mut row: Vec<String> = inst
            .x
            .iter()
            .zip(schema.features())
            .map(|(v, f)| match &f.kind {
                FeatureKind::Numeric => v.to_string(),
                FeatureKind::Nominal(values) => values[*v as usize].clone(),
            })
            .collect();
        let y = inst.y.expect("generated instances are labeled");
        row.push(schema.class_labels()[y].clone());
        w.write_record(&row).map_err(csv_err)?;
        n += 1;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(Output {
        csv: String::from_utf8(bytes).expect("csv output is UTF-8"),
        text: format!("stream={} instances={n}\n", schema.name()),
    })
}
