use std::f64::consts::PI;

use rand_distr::{Distribution, Normal};

use crate::error::EvalError;
use crate::objective::Objective;
use crate::rng::Stream;
use crate::space::{SearchSpace, Solution};

pub const TP3_OPTIMUM: f64 = -20.0;

fn bump(x: i64) -> f64 {
    let y = x as f64 / 100.0;
    (0.05 * PI * y).sin().powi(6) / 2f64.powf(2.0 * ((y - 90.0) / 50.0).powi(2))
}

/// Two-dimensional multimodal surface on `[0, 10000]^2` with 25 local
/// optima and its global minimum `-20` at `(9000, 9000)`.
pub fn tp3_true(x1: i64, x2: i64) -> f64 {
    -10.0 * (bump(x1) + bump(x2))
}

#[derive(Debug, Clone)]
pub struct Tp3 {
    space: SearchSpace,
    noise: Normal<f64>,
}

impl Tp3 {
    pub fn with_noise(noise_std: f64) -> Self {
        Tp3 {
            space: SearchSpace::uniform(2, 0, 10_000).expect("valid box"),
            noise: Normal::new(0.0, noise_std).expect("finite non-negative std"),
        }
    }

    pub fn noise_std(&self) -> f64 {
        self.noise.std_dev()
    }
}

impl Default for Tp3 {
    fn default() -> Self {
        Tp3::with_noise(1.0)
    }
}

impl Objective for Tp3 {
    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn simulate(&mut self, x: &Solution, rng: &mut Stream) -> Result<f64, EvalError> {
        let c = x.coords();
        Ok(tp3_true(c[0], c[1]) + self.noise.sample(rng))
    }

    fn true_value(&self, x: &Solution) -> Option<f64> {
        let c = x.coords();
        Some(tp3_true(c[0], c[1]))
    }

    fn optimum_value(&self) -> Option<f64> {
        Some(TP3_OPTIMUM)
    }

    fn name(&self) -> String {
        "tp3".into()
    }
}
