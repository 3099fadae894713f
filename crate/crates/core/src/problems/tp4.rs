use rand_distr::{Distribution, Normal};

use crate::error::EvalError;
use crate::objective::Objective;
use crate::rng::Stream;
use crate::space::{SearchSpace, Solution};

/// Constants of the separable two-bump surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tp4Config {
    pub beta1: f64,
    pub beta2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub xi1: f64,
    pub xi2: f64,
}

impl Default for Tp4Config {
    fn default() -> Self {
        Tp4Config { beta1: 300.0, beta2: 500.0, gamma1: 0.001, gamma2: 0.005, xi1: -38.0, xi2: 56.0 }
    }
}

impl Tp4Config {
    pub fn component(&self, x: i64) -> f64 {
        let x = x as f64;
        -(self.beta1 * (-self.gamma1 * (x - self.xi1).powi(2)).exp()
            + self.beta2 * (-self.gamma2 * (x - self.xi2).powi(2)).exp())
    }
}

/// One coordinate's contribution with the default constants.
pub fn tp4_component(x: i64) -> f64 {
    Tp4Config::default().component(x)
}

pub fn tp4_true(x: &Solution) -> f64 {
    x.coords().iter().map(|&v| tp4_component(v)).sum()
}

/// `D`-dimensional surface on `[-100, 100]^D` with `2^D` local optima.
#[derive(Debug, Clone)]
pub struct Tp4 {
    config: Tp4Config,
    space: SearchSpace,
    noise: Normal<f64>,
    optimum: f64,
}

impl Tp4 {
    /// # Panics
    /// If `dims` is zero or `noise_std` is negative or not finite.
    pub fn new(dims: usize, noise_std: f64) -> Self {
        Tp4::with_config(dims, noise_std, Tp4Config::default())
    }

    pub fn with_config(dims: usize, noise_std: f64, config: Tp4Config) -> Self {
        let space = SearchSpace::uniform(dims, -100, 100).expect("at least one dimension");
        // Separable, so the lattice optimum is D times the best coordinate.
        let best = (-100..=100).map(|v| config.component(v)).fold(f64::INFINITY, f64::min);
        Tp4 {
            config,
            space,
            noise: Normal::new(0.0, noise_std).expect("finite non-negative std"),
            optimum: best * dims as f64,
        }
    }

    pub fn dims(&self) -> usize {
        self.space.dims()
    }

    pub fn noise_std(&self) -> f64 {
        self.noise.std_dev()
    }

    pub fn config(&self) -> &Tp4Config {
        &self.config
    }

    fn g(&self, x: &Solution) -> f64 {
        x.coords().iter().map(|&v| self.config.component(v)).sum()
    }
}

impl Objective for Tp4 {
    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn simulate(&mut self, x: &Solution, rng: &mut Stream) -> Result<f64, EvalError> {
        Ok(self.g(x) + self.noise.sample(rng))
    }

    fn true_value(&self, x: &Solution) -> Option<f64> {
        Some(self.g(x))
    }

    fn optimum_value(&self) -> Option<f64> {
        Some(self.optimum)
    }

    fn name(&self) -> String {
        format!("tp4-d{}", self.dims())
    }
}
