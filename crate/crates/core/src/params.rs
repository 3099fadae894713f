use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::GmabError;
use crate::selection::FinalCriterion;
use crate::space::SearchSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Minimize,
    Maximize,
}

impl Direction {
    /// Maps a value between the problem's orientation and the internal
    /// minimization orientation. The map is its own inverse.
    pub fn orient(self, value: f64) -> f64 {
        match self {
            Direction::Minimize => value,
            Direction::Maximize => -value,
        }
    }
}

impl FromStr for Direction {
    type Err = GmabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "min" | "minimize" => Ok(Direction::Minimize),
            "max" | "maximize" => Ok(Direction::Maximize),
            other => Err(GmabError::InvalidParams(format!("unknown direction {other:?}"))),
        }
    }
}

/// Fixed-budget stopping rule; the run stops as soon as any set limit is hit.
///
/// The limit is checked between iterations, so an iteration that starts below
/// the replication limit always completes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StoppingBudget {
    pub max_replications: Option<u64>,
    pub max_iterations: Option<u64>,
    pub max_wall_seconds: Option<f64>,
}

impl StoppingBudget {
    pub fn replications(n: u64) -> Self {
        StoppingBudget {
            max_replications: Some(n),
            ..Default::default()
        }
    }

    pub fn iterations(n: u64) -> Self {
        StoppingBudget {
            max_iterations: Some(n),
            ..Default::default()
        }
    }

    pub fn wall_seconds(s: f64) -> Self {
        StoppingBudget {
            max_wall_seconds: Some(s),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), GmabError> {
        if self.max_replications.is_none()
            && self.max_iterations.is_none()
            && self.max_wall_seconds.is_none()
        {
            return Err(GmabError::InvalidParams("stopping budget has no limit".into()));
        }
        if self.max_replications == Some(0) {
            return Err(GmabError::InvalidParams("replication budget must be positive".into()));
        }
        if let Some(s) = self.max_wall_seconds {
            if !(s > 0.0 && s.is_finite()) {
                return Err(GmabError::InvalidParams(format!("wall-clock budget {s} must be positive")));
            }
        }
        Ok(())
    }

    /// `iterations` counts completed iterations after initialization.
    pub fn exhausted(&self, replications: u64, iterations: u64, wall_seconds: f64) -> bool {
        self.max_replications.is_some_and(|b| replications >= b)
            || self.max_iterations.is_some_and(|b| iterations >= b)
            || self.max_wall_seconds.is_some_and(|b| wall_seconds >= b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmabParams {
    /// Elite set size; even, at least 2 and smaller than the search space.
    pub m: usize,
    pub p_cr: f64,
    pub p_mu: f64,
    pub direction: Direction,
    pub seed: u64,
    /// Seed of the simulation-noise stream; defaults to `seed`. The noise
    /// stream is distinct from every algorithm stream either way.
    pub noise_seed: Option<u64>,
    pub budget: StoppingBudget,
    /// Criterion used for the final answer and for trace checkpoints.
    pub criterion: FinalCriterion,
    /// Cumulative replication counts at which the incumbent is recorded.
    pub checkpoints: Vec<u64>,
}

impl Default for GmabParams {
    fn default() -> Self {
        GmabParams {
            m: 20,
            p_cr: 1.0,
            p_mu: 0.25,
            direction: Direction::Minimize,
            seed: 0,
            noise_seed: None,
            budget: StoppingBudget::replications(10_000),
            criterion: FinalCriterion::Fsc1,
            checkpoints: Vec::new(),
        }
    }
}

impl GmabParams {
    pub fn noise_seed(&self) -> u64 {
        self.noise_seed.unwrap_or(self.seed)
    }

    pub fn validate(&self, space: &SearchSpace) -> Result<(), GmabError> {
        if self.m < 2 || self.m % 2 != 0 {
            return Err(GmabError::InvalidParams(format!(
                "m = {} must be an even number of at least 2",
                self.m
            )));
        }
        if BigUint::from(self.m) >= space.cardinality() {
            return Err(GmabError::InvalidParams(format!(
                "m = {} must be smaller than the number of feasible solutions ({})",
                self.m,
                space.cardinality()
            )));
        }
        if !(0.0..=1.0).contains(&self.p_cr) {
            return Err(GmabError::InvalidParams(format!("p_cr = {} outside [0, 1]", self.p_cr)));
        }
        if !(self.p_mu > 0.0 && self.p_mu <= 1.0) {
            return Err(GmabError::InvalidParams(format!("p_mu = {} outside (0, 1]", self.p_mu)));
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GmabError::InvalidParams("checkpoint grid must be strictly increasing".into()));
        }
        self.budget.validate()
    }
}
