//! Labeling-budget strategies for streams and the expected-threshold
//! recurrence they follow under uniformly distributed certainty.

mod budget;
mod recurrence;

pub use budget::{decide, decide_scored, ActiveLearner, BudgetState, StrategyKind, DEFAULT_STEP};
pub use recurrence::{label_fraction_simulation, threshold_limit_oracle, CertaintyLaw, ThresholdRecurrence};
