//! Experiment configuration.
//!
//! Options come from a flat `key=value` file and from command-line flags
//! with the same names; flags win. Keys may use `-` or `_`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use gmab_core::problems::{ExternalSim, Tp1, Tp3, Tp4, DEFAULT_TIMEOUT};
use gmab_core::{FinalCriterion, GmabParams, Objective, StoppingBudget};

use crate::error::BenchError;

pub const KEYS: &[&str] = &[
    "problem",
    "dims",
    "noise-std",
    "m",
    "p-cr",
    "p-mu",
    "budget-reps",
    "budget-iters",
    "runs",
    "seed",
    "fsc",
    "checkpoints",
    "out",
    "external-cmd",
    "true-value-reps",
    "parallel",
];

/// Unparsed option values keyed by flag name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawOptions(BTreeMap<String, String>);

fn normalize(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('_', "-").to_ascii_lowercase()
}

impl RawOptions {
    pub fn parse_file_contents(text: &str) -> Result<Self, BenchError> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| BenchError::Config(format!("line {}: expected key=value", i + 1)))?;
            let key = normalize(k);
            if !KEYS.contains(&key.as_str()) {
                return Err(BenchError::Config(format!("line {}: unknown key {key:?}", i + 1)));
            }
            map.insert(key, v.trim().to_string());
        }
        Ok(RawOptions(map))
    }

    pub fn from_file(path: &Path) -> Result<Self, BenchError> {
        Self::parse_file_contents(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(normalize(key), value.into());
    }

    pub fn remove(&mut self, key: &str) -> Option<String> {
        self.0.remove(&normalize(key))
    }

    /// Values from `other` replace ours.
    pub fn merge(mut self, other: RawOptions) -> Self {
        self.0.extend(other.0);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, BenchError> {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|_| BenchError::Config(format!("bad value {v:?} for {key}"))))
            .transpose()
    }

    pub fn parse_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, BenchError> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse::<T>())
                    .collect::<Result<Vec<T>, _>>()
                    .map_err(|_| BenchError::Config(format!("bad list {v:?} for {key}")))
            })
            .transpose()
    }

    pub fn flag(&self, key: &str) -> Result<bool, BenchError> {
        match self.get(key) {
            None => Ok(false),
            Some("" | "1" | "true" | "yes") => Ok(true),
            Some("0" | "false" | "no") => Ok(false),
            Some(v) => Err(BenchError::Config(format!("bad boolean {v:?} for {key}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    Tp1,
    Tp3 { noise_std: f64 },
    Tp4 { dims: usize, noise_std: f64 },
    External { command: String },
}

impl ProblemSpec {
    pub fn build(&self) -> Result<Box<dyn Objective>, BenchError> {
        Ok(match self {
            ProblemSpec::Tp1 => Box::new(Tp1::default()),
            ProblemSpec::Tp3 { noise_std } => Box::new(Tp3::with_noise(*noise_std)),
            ProblemSpec::Tp4 { dims, noise_std } => Box::new(Tp4::new(*dims, *noise_std)),
            ProblemSpec::External { command } => Box::new(ExternalSim::from_command_line(command, external_timeout())?),
        })
    }

    pub fn label(&self) -> String {
        match self {
            ProblemSpec::Tp1 => "tp1".into(),
            ProblemSpec::Tp3 { .. } => "tp3".into(),
            ProblemSpec::Tp4 { dims, .. } => format!("tp4-d{dims}"),
            ProblemSpec::External { .. } => "external".into(),
        }
    }
}

fn external_timeout() -> Duration {
    std::env::var("GMAB_EXTERNAL_TIMEOUT_SECS")
        .ok()
        .and_then(|v| v.parse::<f64>().ok())
        .map(Duration::from_secs_f64)
        .unwrap_or(DEFAULT_TIMEOUT)
}

/// 50, 100, 200, 500, 1000, 2000, 5000, ... up to `limit`, plus `limit`
/// itself when it is not on the grid.
pub fn default_checkpoints(limit: u64) -> Vec<u64> {
    let mut grid = Vec::new();
    let mut decade = 10u64;
    'outer: loop {
        for mult in [1, 2, 5] {
            let Some(v) = decade.checked_mul(mult) else { break 'outer };
            if v >= 50 {
                if v > limit {
                    break 'outer;
                }
                grid.push(v);
            }
        }
        match decade.checked_mul(10) {
            Some(d) => decade = d,
            None => break,
        }
    }
    if grid.last() != Some(&limit) && limit >= 1 && limit != u64::MAX {
        grid.push(limit);
    }
    grid
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    /// Template parameters; run `i` uses seed `base_seed + i`.
    pub params: GmabParams,
    pub runs: u64,
    pub base_seed: u64,
    pub out: PathBuf,
    /// Replications of the fresh Monte-Carlo estimate used when a problem
    /// has no analytic true value.
    pub true_value_reps: u64,
    pub parallel: bool,
}

impl ExperimentConfig {
    pub fn from_options(opts: &RawOptions) -> Result<Self, BenchError> {
        let noise: Option<f64> = opts.parse("noise-std")?;
        let problem = match opts.get("problem").unwrap_or("tp3") {
            "tp1" => ProblemSpec::Tp1,
            "tp3" => ProblemSpec::Tp3 { noise_std: noise.unwrap_or(1.0) },
            "tp4" => ProblemSpec::Tp4 { dims: opts.parse("dims")?.unwrap_or(5), noise_std: noise.unwrap_or(1.0) },
            "external" => ProblemSpec::External {
                command: opts
                    .get("external-cmd")
                    .ok_or_else(|| BenchError::Config("--problem external needs --external-cmd".into()))?
                    .to_string(),
            },
            other => return Err(BenchError::Config(format!("unknown problem {other:?}"))),
        };
        if let ProblemSpec::Tp3 { noise_std } | ProblemSpec::Tp4 { noise_std, .. } = problem {
            if !(noise_std.is_finite() && noise_std >= 0.0) {
                return Err(BenchError::Config(format!("noise-std {noise_std}")));
            }
        }
        if let ProblemSpec::Tp4 { dims: 0, .. } = problem {
            return Err(BenchError::Config("dims must be positive".into()));
        }

        let reps: Option<u64> = opts.parse("budget-reps")?;
        let iters: Option<u64> = opts.parse("budget-iters")?;
        let budget = match (reps, iters) {
            (None, None) => StoppingBudget::replications(10_000),
            (r, i) => StoppingBudget { max_replications: r, max_iterations: i, max_wall_seconds: None },
        };
        let checkpoints = match opts.parse_list::<u64>("checkpoints")? {
            Some(list) => list,
            None => default_checkpoints(budget.max_replications.unwrap_or(u64::MAX)),
        };
        let base_seed = opts.parse("seed")?.unwrap_or(0);
        let defaults = GmabParams::default();
        let params = GmabParams {
            m: opts.parse("m")?.unwrap_or(defaults.m),
            p_cr: opts.parse("p-cr")?.unwrap_or(defaults.p_cr),
            p_mu: opts.parse("p-mu")?.unwrap_or(defaults.p_mu),
            seed: base_seed,
            budget,
            criterion: opts.parse::<FinalCriterion>("fsc")?.unwrap_or_default(),
            checkpoints,
            ..defaults
        };
        if !params.checkpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(BenchError::Config("checkpoints must be strictly increasing".into()));
        }
        params.budget.validate()?;
        let runs = opts.parse("runs")?.unwrap_or(1);
        if runs == 0 {
            return Err(BenchError::Config("runs must be at least 1".into()));
        }
        Ok(ExperimentConfig {
            problem,
            params,
            runs,
            base_seed,
            out: opts.get("out").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".")),
            true_value_reps: opts.parse("true-value-reps")?.unwrap_or(10_000),
            parallel: opts.flag("parallel")?,
        })
    }

    pub fn params_for_run(&self, run_id: u64) -> GmabParams {
        GmabParams { seed: self.base_seed.wrapping_add(run_id), ..self.params.clone() }
    }
}
