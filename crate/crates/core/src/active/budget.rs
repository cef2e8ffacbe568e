use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use crate::rng::{seeded, Rng};
use crate::{ClassVector, Error, Result};

/// Default threshold adjusting step `s`.
pub const DEFAULT_STEP: f64 = 0.01;

/// Smallest randomized threshold used by VRU.
const MIN_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StrategyKind {
    /// Variable uncertainty.
    Vu,
    /// Variable uncertainty with a threshold randomized by `eta ~ N(1, 1)`.
    Vru,
    /// Selective sampling: query with probability `b / (b + margin)`.
    Ss { b: f64 },
    /// Variable uncertainty plus random queries with probability `2(B - 0.5)`.
    Avu,
}

impl StrategyKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            StrategyKind::Ss { b } if !(*b > 0.0 && b.is_finite()) => Err(Error::config("b", "must be positive")),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyKind::Vu => f.write_str("VU"),
            StrategyKind::Vru => f.write_str("VRU"),
            StrategyKind::Ss { b } => write!(f, "SS:{b}"),
            StrategyKind::Avu => f.write_str("AVU"),
        }
    }
}

/// Parses `VU`, `VRU`, `AVU`, `SS` (b = 1) or `SS:<b>`, case-insensitively.
impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, arg) = match lower.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (lower.as_str(), None),
        };
        let kind = match (name, arg) {
            ("vu", None) => StrategyKind::Vu,
            ("vru", None) => StrategyKind::Vru,
            ("avu", None) => StrategyKind::Avu,
            ("ss", None) => StrategyKind::Ss { b: 1.0 },
            ("ss", Some(b)) => StrategyKind::Ss {
                b: b.parse().map_err(|_| Error::config("strategy", format!("bad SS parameter `{b}`")))?,
            },
            _ => return Err(Error::config("strategy", format!("unknown strategy `{s}`"))),
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// Labels acquired `c`, instances seen `k`, budget `B`, threshold and step.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetState {
    labels: u64,
    seen: u64,
    budget: f64,
    threshold: f64,
    step: f64,
}

impl BudgetState {
    pub fn new(budget: f64, step: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&budget) {
            return Err(Error::config("budget", "must lie in [0, 1]"));
        }
        if !(step > 0.0 && step < 1.0) {
            return Err(Error::config("step", "must lie in (0, 1)"));
        }
        Ok(BudgetState {
            labels: 0,
            seen: 0,
            budget,
            threshold: 1.0,
            step,
        })
    }

    pub fn labels(&self) -> u64 {
        self.labels
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// `c / k`, zero before the first instance.
    pub fn label_fraction(&self) -> f64 {
        if self.seen == 0 {
            0.0
        } else {
            self.labels as f64 / self.seen as f64
        }
    }

    /// Whether the budget is spent for the next instance: `c / k >= B`
    /// with `k` counting that instance.
    pub fn exhausted(&self) -> bool {
        self.labels as f64 / (self.seen + 1) as f64 >= self.budget
    }
}

/// Decides whether to query the label of an instance with the given
/// posterior. Counts the instance, and the label when queried.
pub fn decide(strategy: &StrategyKind, posterior: &ClassVector, state: &mut BudgetState, rng: &mut Rng) -> bool {
    decide_scored(strategy, posterior.max(), posterior.margin(), state, rng)
}

/// [`decide`] on a precomputed certainty (top posterior) and margin
/// (top-1 minus top-2 posterior).
pub fn decide_scored(strategy: &StrategyKind, certainty: f64, margin: f64, state: &mut BudgetState, rng: &mut Rng) -> bool {
    let exhausted = state.exhausted();
    state.seen += 1;
    if exhausted {
        return false;
    }
    let s = state.step;
    let query = match strategy {
        StrategyKind::Vu | StrategyKind::Avu => {
            if certainty < state.threshold {
                state.threshold *= 1.0 - s;
                true
            } else {
                state.threshold *= 1.0 + s;
                // Drawn by both so that they consume the same random stream.
                let rho: f64 = rng.random();
                matches!(strategy, StrategyKind::Avu) && rho < 2.0 * (state.budget - 0.5)
            }
        }
        StrategyKind::Vru => {
            let z: f64 = StandardNormal.sample(rng);
            let eta = 1.0 + z;
            let randomized = (state.threshold * eta).max(MIN_THRESHOLD);
            if certainty < randomized {
                state.threshold *= 1.0 - s;
                true
            } else {
                state.threshold *= 1.0 + s;
                false
            }
        }
        StrategyKind::Ss { b } => {
            let rho: f64 = rng.random();
            rho < b / (b + margin.abs())
        }
    };
    if query {
        state.labels += 1;
    }
    query
}

/// A strategy bundled with its budget state and random stream.
#[derive(Debug, Clone)]
pub struct ActiveLearner {
    kind: StrategyKind,
    state: BudgetState,
    rng: Rng,
}

impl ActiveLearner {
    pub fn new(kind: StrategyKind, budget: f64, seed: u64) -> Result<Self> {
        kind.validate()?;
        Ok(ActiveLearner {
            kind,
            state: BudgetState::new(budget, DEFAULT_STEP)?,
            rng: seeded(seed),
        })
    }

    pub fn with_step(mut self, step: f64) -> Result<Self> {
        self.state = BudgetState::new(self.state.budget, step)?;
        Ok(self)
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn state(&self) -> &BudgetState {
        &self.state
    }

    pub fn decide(&mut self, posterior: &ClassVector) -> bool {
        decide(&self.kind, posterior, &mut self.state, &mut self.rng)
    }
}
