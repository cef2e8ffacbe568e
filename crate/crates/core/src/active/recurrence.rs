use rand::Rng as _;

use super::budget::{decide_scored, BudgetState, StrategyKind, DEFAULT_STEP};
use crate::rng::{derive, seeded};
use crate::{Error, Result};

/// Expected certainty threshold under certainty `u ~ U(a, b)`:
/// `t' = (t - a)/(b - a) * t(1 - s) + (b - t)/(b - a) * t(1 + s)`,
/// starting from `t = b`. Its limit is `(a + b) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdRecurrence {
    a: f64,
    b: f64,
    s: f64,
    theta: f64,
}

impl ThresholdRecurrence {
    pub fn new(a: f64, b: f64, s: f64) -> Result<Self> {
        if !(a >= 0.0 && a < b && b.is_finite()) {
            return Err(Error::Domain(format!("certainty range needs 0 <= a < b, got a={a}, b={b}")));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::Domain(format!("step must lie in (0, 1), got {s}")));
        }
        Ok(ThresholdRecurrence { a, b, s, theta: b })
    }

    /// Restarts from `theta`, which must lie in `(0, b]`.
    pub fn starting_at(mut self, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= self.b) {
            return Err(Error::Domain(format!("start must lie in (0, {}], got {theta}", self.b)));
        }
        self.theta = theta;
        Ok(self)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn limit(&self) -> f64 {
        (self.a + self.b) / 2.0
    }

    pub fn step(&mut self) -> f64 {
        let (a, b, s, t) = (self.a, self.b, self.s, self.theta);
        let below = ((t - a) / (b - a)).clamp(0.0, 1.0);
        self.theta = below * t * (1.0 - s) + (1.0 - below) * t * (1.0 + s);
        self.theta
    }
}

/// Trajectory of the expected threshold: the start value followed by
/// `iterations` steps.
pub fn threshold_limit_oracle(mut rec: ThresholdRecurrence, iterations: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(iterations + 1);
    out.push(rec.theta());
    for _ in 0..iterations {
        out.push(rec.step());
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CertaintyLaw {
    Uniform { a: f64, b: f64 },
}

/// Runs a strategy over `n` synthetic certainty draws and returns `c / k`
/// after each step. Draws are read as the top posterior of a binary
/// problem, so the margin passed to selective sampling is `|2u - 1|`.
pub fn label_fraction_simulation(
    strategy: StrategyKind,
    budget: f64,
    law: CertaintyLaw,
    n: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Domain("simulation needs at least one step".into()));
    }
    strategy.validate()?;
    let CertaintyLaw::Uniform { a, b } = law;
    if !(a <= b) {
        return Err(Error::Domain(format!("empty certainty range [{a}, {b}]")));
    }
    let mut draws = seeded(derive(seed, 0));
    let mut rng = seeded(derive(seed, 1));
    let mut state = BudgetState::new(budget, DEFAULT_STEP)?;
    Ok((0..n)
        .map(|_| {
            let u = a + (b - a) * draws.random::<f64>();
            decide_scored(&strategy, u, (2.0 * u - 1.0).abs(), &mut state, &mut rng);
            state.label_fraction()
        })
        .collect())
}
