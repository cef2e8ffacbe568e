//! `sdf`: generate drifting streams, run prequential experiments with the
//! streaming deep forest, sweep labeling budgets, ablate depth and rank
//! methods.
//!
//! Every setting can come from a `key = value` file (`--config`); flags
//! override it. CSV output starts with a `# config_hash=<sha256>` line.
//!
//! Exit codes: 0 success, 1 usage, 2 data error, 3 runtime error.

mod commands;
mod error;
mod settings;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::CliError;
use settings::Settings;

#[derive(Parser)]
#[command(name = "sdf", version, about = "Streaming deep forest experiments")]
struct Cli {
    /// Base random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write CSV here instead of stdout; the summary then goes to stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Key-value settings file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Window size for accuracy reporting.
    #[arg(long, global = true)]
    window: Option<usize>,
    /// Extra setting as key=value (repeatable), e.g. generator parameters.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic stream as CSV.
    Generate(StreamArgs),
    /// Prequential run of one model, optionally under a labeling strategy.
    Run {
        #[command(flatten)]
        stream: StreamArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// none, vu, vru, avu, ss or ss:<b>.
        #[arg(long)]
        strategy: Option<String>,
        /// Labeling budget in [0, 1].
        #[arg(long)]
        budget: Option<f64>,
        /// Threshold adjusting step.
        #[arg(long)]
        step: Option<f64>,
        /// Emit one row per instance instead of per window.
        #[arg(long)]
        per_instance: bool,
    },
    /// Budgets x strategies grid of runs.
    Sweep {
        #[command(flatten)]
        stream: StreamArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated budgets (default 0.1,...,0.9).
        #[arg(long)]
        budgets: Option<String>,
        /// Comma-separated strategies (default vu,avu).
        #[arg(long)]
        strategies: Option<String>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Accuracy of the cascade truncated at every depth up to --layers.
    Depth {
        #[command(flatten)]
        stream: StreamArgs,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Average ranks and Friedman/Nemenyi test of an accuracy table.
    Rank {
        /// CSV with a `dataset` column and one column per method; the
        /// bundled benchmark table when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Args)]
struct StreamArgs {
    /// Named stream: SEA_a, SEA_g, AGR_a, AGR_g, RBF_m, RBF_f, HYPER, RTG.
    #[arg(long)]
    stream: Option<String>,
    /// Generator family (sea, agrawal, rbf, hyperplane, rtg); parameters via --set.
    #[arg(long)]
    generator: Option<String>,
    /// CSV or ARFF dataset instead of a generator.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Class column of --data.
    #[arg(long)]
    class: Option<String>,
    /// Number of instances.
    #[arg(long, short = 'n')]
    instances: Option<u64>,
}

#[derive(Args)]
struct ModelArgs {
    /// sdf or arf.
    #[arg(long)]
    model: Option<String>,
    /// Cascade layers.
    #[arg(long)]
    layers: Option<usize>,
    /// Trees per forest.
    #[arg(long)]
    trees: Option<usize>,
    /// Train forests one after another.
    #[arg(long)]
    sequential: bool,
}

impl StreamArgs {
    fn apply(self, s: &mut Settings) {
        s.flag("stream", self.stream);
        s.flag("generator", self.generator);
        s.flag("data", self.data.map(|p| p.display().to_string()));
        s.flag("class", self.class);
        s.flag("instances", self.instances);
    }
}

impl ModelArgs {
    fn apply(self, s: &mut Settings) {
        s.flag("model", self.model);
        s.flag("layers", self.layers);
        s.flag("trees", self.trees);
        s.flag("parallel", self.sequential.then_some(false));
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let name = match &cli.command {
        Command::Generate(_) => "generate",
        Command::Run { .. } => "run",
        Command::Sweep { .. } => "sweep",
        Command::Depth { .. } => "depth",
        Command::Rank { .. } => "rank",
    };
    let mut s = Settings::load(name, cli.config.as_deref())?;
    for pair in &cli.set {
        s.assign(pair)?;
    }
    s.flag("seed", cli.seed);
    s.flag("window", cli.window);
    let output = match cli.command {
        Command::Generate(stream) => {
            stream.apply(&mut s);
            commands::generate(&s)?
        }
        Command::Run {
            stream,
            model,
            strategy,
            budget,
            step,
            per_instance,
        } => {
            stream.apply(&mut s);
            model.apply(&mut s);
            s.flag("strategy", strategy);
            s.flag("budget", budget);
            s.flag("step", step);
            commands::run(&s, per_instance)?
        }
        Command::Sweep {
            stream,
            model,
            budgets,
            strategies,
            step,
        } => {
            stream.apply(&mut s);
            model.apply(&mut s);
            s.flag("budgets", budgets);
            s.flag("strategies", strategies);
            s.flag("step", step);
            commands::sweep(&s)?
        }
        Command::Depth { stream, model } => {
            stream.apply(&mut s);
            model.apply(&mut s);
            commands::depth(&s)?
        }
        Command::Rank { input } => {
            s.flag("input", input.map(|p| p.display().to_string()));
            commands::rank(&s)?
        }
    };
    let body = format!("# config_hash={}\n{}", s.hash(), output.csv);
    match cli.output {
        Some(path) => {
            std::fs::write(&path, body)
                .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
            print!("{}", output.text);
        }
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            eprint!("{}", output.text);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
