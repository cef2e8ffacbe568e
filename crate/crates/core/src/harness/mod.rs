//! Test-then-train evaluation and rank statistics for comparing methods
//! across datasets.

mod prequential;
mod ranks;

pub use prequential::{
    run_prequential, run_prequential_by_depth, windows_from_records, PrequentialRecord, RunOptions, RunOutput, RunSummary, WindowRecord,
    DEFAULT_WINDOW,
};
pub use ranks::{friedman_nemenyi, nemenyi_q, FriedmanNemenyi, RankMatrix, BENCHMARK_ACCURACY_CSV};
