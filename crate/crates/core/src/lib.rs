//! Genetic multi-armed bandit (GMAB) for discrete optimization via simulation.
//!
//! The solver keeps a full memory of every visited lattice point (replication
//! count and observation sum) and uses genetic operators on the current best
//! `m` sample means to decide what to simulate next. Memory is indexed by two
//! balanced trees: an AVL lookup tree keyed by an integer solution code and a
//! red-black tree keyed by sample mean.
//!
//! ```
//! use gmab_core::problems::Tp3;
//! use gmab_core::{GmabParams, Solver, StoppingBudget};
//!
//! let mut problem = Tp3::default();
//! let params = GmabParams {
//!     budget: StoppingBudget::replications(2_000),
//!     seed: 7,
//!     ..GmabParams::default()
//! };
//! let result = Solver::new(&mut problem, params).unwrap().run().unwrap();
//! assert!(result.replications >= 2_000);
//! ```

pub mod clock;
pub mod error;
pub mod genetic;
pub mod memory;
pub mod objective;
pub mod params;
pub mod problems;
pub mod rng;
pub mod selection;
pub mod solver;
pub mod space;

pub use error::{EvalError, GmabError};
pub use memory::{LinearMemory, Memory, MemoryStore, PositionCode, SolutionRecord};
pub use objective::{evaluate, Objective, Observation};
pub use params::{Direction, GmabParams, StoppingBudget};
pub use selection::FinalCriterion;
pub use solver::{Checkpoint, IterationReport, RunFailure, RunResult, RunTrace, Solver};
pub use space::{SearchSpace, Solution};
