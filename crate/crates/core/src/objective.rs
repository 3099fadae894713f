use crate::error::{EvalError, GmabError};
use crate::params::Direction;
use crate::rng::Stream;
use crate::space::{SearchSpace, Solution};

/// A stochastic objective `G(x)` observed through simulation.
///
/// Implementations must make the sample mean of repeated observations a
/// strongly consistent estimator of `g(x) = E[G(x)]`; the global convergence
/// of the solver rests on that property and it is not checked at runtime.
/// Every draw must come from the supplied stream so that runs are
/// reproducible.
pub trait Objective {
    fn space(&self) -> &SearchSpace;

    /// One independent realization of `G(x)` in the problem's own direction.
    fn simulate(&mut self, x: &Solution, rng: &mut Stream) -> Result<f64, EvalError>;

    /// Exact `g(x)` when an analytic form is known.
    fn true_value(&self, _x: &Solution) -> Option<f64> {
        None
    }

    /// Optimal objective value when known (exactly or from a reference study).
    fn optimum_value(&self) -> Option<f64> {
        None
    }

    fn name(&self) -> String;
}

impl<O: Objective + ?Sized> Objective for Box<O> {
    fn space(&self) -> &SearchSpace {
        (**self).space()
    }

    fn simulate(&mut self, x: &Solution, rng: &mut Stream) -> Result<f64, EvalError> {
        (**self).simulate(x, rng)
    }

    fn true_value(&self, x: &Solution) -> Option<f64> {
        (**self).true_value(x)
    }

    fn optimum_value(&self) -> Option<f64> {
        (**self).optimum_value()
    }

    fn name(&self) -> String {
        (**self).name()
    }
}

/// A finite observation, always in minimization orientation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Observation(f64);

impl Observation {
    pub fn new(value: f64) -> Result<Self, EvalError> {
        if value.is_finite() {
            Ok(Observation(value))
        } else {
            Err(EvalError::NonFinite(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Simulate `x` once. Observations of maximization problems are negated
/// here so the rest of the solver always minimizes.
pub fn evaluate<O: Objective + ?Sized>(
    problem: &mut O,
    x: &Solution,
    stream: &mut Stream,
    direction: Direction,
) -> Result<Observation, GmabError> {
    if !problem.space().validate(x)? {
        return Err(GmabError::OutOfBounds(x.coords().to_vec()));
    }
    let raw = Observation::new(problem.simulate(x, stream)?)?;
    Ok(Observation(direction.orient(raw.0)))
}
