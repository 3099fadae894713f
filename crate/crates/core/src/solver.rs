//! The GMAB main loop.
//!
//! Initialization simulates `m` distinct uniformly drawn solutions once.
//! Every iteration then
//!
//! 1. extracts the `m` best sample means `E_k` from memory,
//! 2. builds offspring `M_k` with [`genetic_modification`],
//! 3. simulates every solution of `S_k = E_k ∪ M_k` exactly once, in
//!    ascending position order, and folds the observations into memory.
//!
//! The budget is checked between iterations only. The final answer is
//! chosen once, after the loop, with the configured [`FinalCriterion`].

use crate::clock::Stopwatch;
use crate::error::GmabError;
use crate::genetic::{genetic_modification, MutationConfig};
use crate::memory::{Memory, MemoryStore, PositionCode};
use crate::objective::{evaluate, Objective};
use crate::params::GmabParams;
use crate::rng::{stream, AlgorithmStreams, Stream, StreamKind};
use crate::selection::FinalCriterion;
use crate::space::Solution;

/// Incumbent recorded when the cumulative replication count first reaches
/// a grid value.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    /// Grid value this checkpoint stands for.
    pub replications: u64,
    /// Replications actually performed when it was taken.
    pub actual_replications: u64,
    pub incumbent: Solution,
    /// Sample mean in the problem's own orientation.
    pub mean: f64,
    pub n: u64,
    pub true_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunTrace {
    pub checkpoints: Vec<Checkpoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best: Solution,
    pub best_position: PositionCode,
    /// Sample mean in the problem's own orientation.
    pub best_mean: f64,
    pub best_n: u64,
    pub true_value: Option<f64>,
    pub trace: RunTrace,
    pub iterations: u64,
    pub replications: u64,
    pub visited: usize,
    pub wall_seconds: f64,
}

/// A run aborted by an error, with the trace gathered so far.
#[derive(Debug, Clone)]
pub struct RunFailure {
    pub error: GmabError,
    pub trace: RunTrace,
    pub iterations: u64,
    pub replications: u64,
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "run aborted after {} replications: {}", self.replications, self.error)
    }
}

impl std::error::Error for RunFailure {}

/// What one iteration did.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationReport {
    /// Iteration index `k`, starting at 1.
    pub k: u64,
    /// `E_k` in ascending sample-mean order.
    pub elites: Vec<PositionCode>,
    /// `M_k` as produced by the genetic operators.
    pub offspring: Vec<Solution>,
    /// `S_k` in evaluation order.
    pub visited: Vec<PositionCode>,
    pub new_solutions: usize,
}

/// Incumbent under some criterion, in the problem's orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct Incumbent {
    pub position: PositionCode,
    pub solution: Solution,
    pub mean: f64,
    pub n: u64,
}

pub struct Solver<'a, O: Objective + ?Sized, M: Memory = MemoryStore> {
    problem: &'a mut O,
    params: GmabParams,
    mutation: MutationConfig,
    mem: M,
    streams: AlgorithmStreams,
    noise: Stream,
    iterations: u64,
    replications: u64,
    initialized: bool,
    clock: Stopwatch,
    trace: RunTrace,
    next_checkpoint: usize,
}

impl<'a, O: Objective + ?Sized> Solver<'a, O, MemoryStore> {
    pub fn new(problem: &'a mut O, params: GmabParams) -> Result<Self, GmabError> {
        let mem = MemoryStore::new(problem.space());
        Self::with_memory(problem, params, mem)
    }
}

impl<'a, O: Objective + ?Sized, M: Memory> Solver<'a, O, M> {
    /// Solver over a caller-supplied (empty) memory implementation.
    pub fn with_memory(problem: &'a mut O, params: GmabParams, mem: M) -> Result<Self, GmabError> {
        params.validate(problem.space())?;
        if !mem.is_empty() {
            return Err(GmabError::Memory("solver needs an empty memory".into()));
        }
        Ok(Solver {
            mutation: MutationConfig::for_space(problem.space(), params.p_mu),
            streams: AlgorithmStreams::new(params.seed),
            noise: stream(params.noise_seed(), StreamKind::Noise),
            problem,
            params,
            mem,
            iterations: 0,
            replications: 0,
            initialized: false,
            clock: Stopwatch::start(),
            trace: RunTrace::default(),
            next_checkpoint: 0,
        })
    }

    pub fn params(&self) -> &GmabParams {
        &self.params
    }

    pub fn memory(&self) -> &M {
        &self.mem
    }

    pub fn problem(&self) -> &O {
        self.problem
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn replications(&self) -> u64 {
        self.replications
    }

    pub fn trace(&self) -> &RunTrace {
        &self.trace
    }

    pub fn elapsed_seconds(&self) -> f64 {
        self.clock.elapsed_secs()
    }

    /// Draws `m` distinct solutions uniformly (rejecting repeats through
    /// the lookup tree) and simulates each once. Returns `S_0`.
    pub fn initialize(&mut self) -> Result<Vec<PositionCode>, GmabError> {
        if self.initialized {
            return Err(GmabError::InvalidParams("solver already initialized".into()));
        }
        let space = self.problem.space().clone();
        let mut initial = Vec::with_capacity(self.params.m);
        while initial.len() < self.params.m {
            let x = space.sample_uniform(&mut self.streams.initial);
            let (p, is_new) = self.mem.lookup_or_insert(&x);
            if is_new {
                initial.push(p);
            }
        }
        self.initialized = true;
        for &p in &initial {
            let obs = evaluate(self.problem, &self.mem.record(p).solution, &mut self.noise, self.params.direction)?;
            self.mem.record_observation(p, obs.value());
            self.replications += 1;
        }
        self.record_checkpoints();
        Ok(initial)
    }

    /// Runs one iteration; initializes first if needed.
    pub fn iterate(&mut self) -> Result<IterationReport, GmabError> {
        if !self.initialized {
            self.initialize()?;
        }
        let elites = self.mem.extract_best_m(self.params.m, &mut self.streams.tie_break)?;
        let elite_solutions: Vec<Solution> =
            elites.iter().map(|&p| self.mem.record(p).solution.clone()).collect();
        let offspring = genetic_modification(
            &elite_solutions,
            self.problem.space(),
            self.params.p_cr,
            &self.mutation,
            &mut self.streams.operators,
        )?;

        let mut new_solutions = 0;
        for x in &offspring {
            let (p, is_new) = self.mem.lookup_or_insert(x);
            new_solutions += usize::from(is_new);
            self.mem.cache_position(p);
        }
        let mut visited = self.mem.cache().to_vec();
        visited.sort_unstable();
        for &p in &visited {
            let obs = evaluate(self.problem, &self.mem.record(p).solution, &mut self.noise, self.params.direction)?;
            self.mem.record_observation(p, obs.value());
        }
        self.mem.clear_cache();
        self.iterations += 1;
        self.replications += visited.len() as u64;
        self.record_checkpoints();

        Ok(IterationReport { k: self.iterations, elites, offspring, visited, new_solutions })
    }

    pub fn should_stop(&self) -> bool {
        self.params
            .budget
            .exhausted(self.replications, self.iterations, self.clock.elapsed_secs())
    }

    /// Current incumbent under `criterion`.
    pub fn incumbent(&self, criterion: FinalCriterion) -> Option<Incumbent> {
        let p = criterion.select(self.mem.records(), self.replications)?;
        let rec = self.mem.record(p);
        Some(Incumbent {
            position: p,
            solution: rec.solution.clone(),
            mean: self.params.direction.orient(rec.mean()?),
            n: rec.n,
        })
    }

    fn record_checkpoints(&mut self) {
        let grid = &self.params.checkpoints;
        if self.next_checkpoint >= grid.len() || grid[self.next_checkpoint] > self.replications {
            return;
        }
        let Some(inc) = self.incumbent(self.params.criterion) else {
            return;
        };
        let true_value = self.problem.true_value(&inc.solution);
        while self.next_checkpoint < grid.len() && grid[self.next_checkpoint] <= self.replications {
            self.trace.checkpoints.push(Checkpoint {
                replications: grid[self.next_checkpoint],
                actual_replications: self.replications,
                incumbent: inc.solution.clone(),
                mean: inc.mean,
                n: inc.n,
                true_value,
            });
            self.next_checkpoint += 1;
        }
    }

    /// Iterates until the budget is exhausted and applies the final
    /// selection criterion once.
    pub fn run(mut self) -> Result<RunResult, RunFailure> {
        if let Err(error) = self.run_loop() {
            return Err(RunFailure {
                error,
                trace: self.trace,
                iterations: self.iterations,
                replications: self.replications,
            });
        }
        Ok(self.finish())
    }

    fn run_loop(&mut self) -> Result<(), GmabError> {
        if !self.initialized {
            self.initialize()?;
        }
        while !self.should_stop() {
            self.iterate()?;
        }
        Ok(())
    }

    /// Final answer for the current state.
    pub fn finish(self) -> RunResult {
        let inc = self
            .incumbent(self.params.criterion)
            .expect("an initialized solver has observed solutions");
        RunResult {
            true_value: self.problem.true_value(&inc.solution),
            best: inc.solution,
            best_position: inc.position,
            best_mean: inc.mean,
            best_n: inc.n,
            iterations: self.iterations,
            replications: self.replications,
            visited: self.mem.len(),
            wall_seconds: self.clock.elapsed_secs(),
            trace: self.trace,
        }
    }
}
