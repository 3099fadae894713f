use std::collections::VecDeque;

use rand_distr::{Distribution, Poisson};

use crate::error::{EvalError, GmabError};
use crate::objective::Objective;
use crate::rng::Stream;
use crate::space::{SearchSpace, Solution};

/// Reference optimal average cost and policy of the default configuration.
pub const TP1_REFERENCE_OPTIMUM: f64 = 106.167;
pub const TP1_REFERENCE_SOLUTION: [i64; 2] = [17, 36];

/// Starting inventory of each replication.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum InitialInventory {
    /// Start at the order-up-to level `S`.
    #[default]
    OrderUpTo,
    Level(i64),
}

/// Periodic-review `(s, S)` inventory system with Poisson demand and full
/// backlogging. Decision variables are `x1 = s` and `x2 = S - s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tp1Config {
    pub horizon: u32,
    pub demand_mean: f64,
    pub fixed_order_cost: f64,
    pub unit_order_cost: f64,
    pub holding_cost: f64,
    pub shortage_cost: f64,
    pub initial_inventory: InitialInventory,
    /// Periods between placing and receiving an order.
    pub lead_time: usize,
    pub lower: i64,
    pub upper: i64,
}

impl Default for Tp1Config {
    fn default() -> Self {
        Tp1Config {
            horizon: 30,
            demand_mean: 25.0,
            fixed_order_cost: 32.0,
            unit_order_cost: 3.0,
            holding_cost: 1.0,
            shortage_cost: 5.0,
            initial_inventory: InitialInventory::OrderUpTo,
            lead_time: 0,
            lower: 1,
            upper: 100,
        }
    }
}

impl Tp1Config {
    pub fn validate(&self) -> Result<(), GmabError> {
        let costs = [self.fixed_order_cost, self.unit_order_cost, self.holding_cost, self.shortage_cost];
        if costs.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(GmabError::InvalidParams("inventory costs must be finite and non-negative".into()));
        }
        if self.horizon == 0 {
            return Err(GmabError::InvalidParams("horizon must be at least one period".into()));
        }
        if !(self.demand_mean.is_finite() && self.demand_mean >= 0.0) {
            return Err(GmabError::InvalidParams(format!("demand mean {}", self.demand_mean)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Tp1 {
    config: Tp1Config,
    space: SearchSpace,
    demand: Option<Poisson<f64>>,
}

impl Tp1 {
    pub fn new(config: Tp1Config) -> Result<Self, GmabError> {
        config.validate()?;
        let space = SearchSpace::uniform(2, config.lower, config.upper)?;
        let demand = if config.demand_mean > 0.0 {
            Some(Poisson::new(config.demand_mean).map_err(|e| GmabError::InvalidParams(e.to_string()))?)
        } else {
            None
        };
        Ok(Tp1 { config, space, demand })
    }

    pub fn config(&self) -> &Tp1Config {
        &self.config
    }

    /// Average cost per period of one replication of policy `(s, big_s)`.
    pub fn simulate_policy(&self, s: i64, big_s: i64, rng: &mut Stream) -> f64 {
        let c = &self.config;
        let mut level = match c.initial_inventory {
            InitialInventory::OrderUpTo => big_s,
            InitialInventory::Level(v) => v,
        };
        let mut pipeline: VecDeque<i64> = std::iter::repeat(0).take(c.lead_time).collect();
        let mut total = 0.0;
        for _ in 0..c.horizon {
            let position = level + pipeline.iter().sum::<i64>();
            let order = if position < s { big_s - position } else { 0 };
            if order > 0 {
                total += c.fixed_order_cost + c.unit_order_cost * order as f64;
            }
            pipeline.push_back(order);
            level += pipeline.pop_front().unwrap_or(0);
            let demand = self.demand.as_ref().map_or(0, |d| d.sample(rng) as i64);
            level -= demand;
            total += if level >= 0 {
                c.holding_cost * level as f64
            } else {
                c.shortage_cost * -level as f64
            };
        }
        total / c.horizon as f64
    }
}

impl Default for Tp1 {
    fn default() -> Self {
        Tp1::new(Tp1Config::default()).expect("default configuration is valid")
    }
}

impl Objective for Tp1 {
    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn simulate(&mut self, x: &Solution, rng: &mut Stream) -> Result<f64, EvalError> {
        let c = x.coords();
        Ok(self.simulate_policy(c[0], c[0] + c[1], rng))
    }

    fn optimum_value(&self) -> Option<f64> {
        (self.config == Tp1Config::default()).then_some(TP1_REFERENCE_OPTIMUM)
    }

    fn name(&self) -> String {
        "tp1".into()
    }
}
