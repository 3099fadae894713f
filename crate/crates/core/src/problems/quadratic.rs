use rand_distr::{Distribution, Normal};

use crate::error::EvalError;
use crate::objective::Objective;
use crate::rng::Stream;
use crate::space::{SearchSpace, Solution};

/// `sum (x_d - c_d)^2` plus Gaussian noise. Handy for small exhaustive checks.
#[derive(Debug, Clone)]
pub struct NoisyQuadratic {
    space: SearchSpace,
    center: Vec<i64>,
    noise: Normal<f64>,
}

impl NoisyQuadratic {
    pub fn new(space: SearchSpace, center: Vec<i64>, noise_std: f64) -> Self {
        assert_eq!(space.dims(), center.len(), "center dimension");
        NoisyQuadratic {
            space,
            center,
            noise: Normal::new(0.0, noise_std).expect("finite non-negative std"),
        }
    }

    pub fn g(&self, x: &Solution) -> f64 {
        x.coords()
            .iter()
            .zip(&self.center)
            .map(|(&a, &c)| ((a - c) as f64).powi(2))
            .sum()
    }
}

impl Objective for NoisyQuadratic {
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
        self.space.contains(&Solution::new(self.center.clone())).then_some(0.0)
    }

    fn name(&self) -> String {
        "quadratic".into()
    }
}
