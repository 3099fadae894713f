//! Final selection criteria.
//!
//! * FSC1: among the solutions whose sample mean is no worse than that of the
//!   most-replicated solution, minimize the [0, 1]-scaled mean plus the
//!   Hoeffding radius `sqrt(2 ln N / n)` (a pessimistic UCB score).
//! * FSC2: best sample mean.
//! * FSC3: most replications.
//!
//! All criteria work in minimization orientation.

use std::fmt;
use std::str::FromStr;

use crate::error::GmabError;
use crate::memory::{PositionCode, SolutionRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum FinalCriterion {
    #[default]
    Fsc1,
    Fsc2,
    Fsc3,
}

impl FinalCriterion {
    pub const ALL: [FinalCriterion; 3] = [FinalCriterion::Fsc1, FinalCriterion::Fsc2, FinalCriterion::Fsc3];

    /// Applies the criterion to the observed records. Returns `None` when
    /// nothing has been observed yet.
    pub fn select(self, records: &[SolutionRecord], total_replications: u64) -> Option<PositionCode> {
        match self {
            FinalCriterion::Fsc1 => fsc1(records, total_replications),
            FinalCriterion::Fsc2 => fsc2(records),
            FinalCriterion::Fsc3 => fsc3(records),
        }
    }
}

impl fmt::Display for FinalCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            FinalCriterion::Fsc1 => 1,
            FinalCriterion::Fsc2 => 2,
            FinalCriterion::Fsc3 => 3,
        };
        write!(f, "fsc{n}")
    }
}

impl FromStr for FinalCriterion {
    type Err = GmabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().trim_start_matches("fsc") {
            "1" => Ok(FinalCriterion::Fsc1),
            "2" => Ok(FinalCriterion::Fsc2),
            "3" => Ok(FinalCriterion::Fsc3),
            _ => Err(GmabError::InvalidParams(format!("unknown final selection criterion {s:?}"))),
        }
    }
}

/// `sqrt(2 ln(total_n) / n_x)`, the radius for confidence level
/// `delta = total_n^-4`.
pub fn confidence_radius(total_n: u64, n_x: u64) -> f64 {
    debug_assert!(total_n >= n_x && n_x >= 1);
    (2.0 * (total_n as f64).ln() / n_x as f64).sqrt()
}

/// Min-max scales the means of `set` to [0, 1]. If every mean is equal the
/// scaled values are all zero.
pub fn normalize_means(set: &[(PositionCode, f64)]) -> Vec<(PositionCode, f64)> {
    let best = set.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
    let worst = set.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
    let range = worst - best;
    set.iter()
        .map(|&(p, mean)| (p, if range > 0.0 { (mean - best) / range } else { 0.0 }))
        .collect()
}

fn observed(records: &[SolutionRecord]) -> impl Iterator<Item = (PositionCode, &SolutionRecord, f64)> {
    records
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.mean().map(|m| (PositionCode(i), r, m)))
}

/// Most-replicated record, ties by better mean then lower position.
fn most_replicated(records: &[SolutionRecord]) -> Option<(PositionCode, f64)> {
    observed(records)
        .min_by(|a, b| b.1.n.cmp(&a.1.n).then(a.2.total_cmp(&b.2)).then(a.0.cmp(&b.0)))
        .map(|(p, _, m)| (p, m))
}

pub fn fsc1(records: &[SolutionRecord], total_replications: u64) -> Option<PositionCode> {
    let (z, z_mean) = most_replicated(records)?;
    let nondominated: Vec<(PositionCode, f64)> = observed(records)
        .filter(|(_, _, m)| *m <= z_mean)
        .map(|(p, _, m)| (p, m))
        .collect();
    if nondominated.len() == 1 {
        return Some(z);
    }
    let total = total_replications.max(1);
    normalize_means(&nondominated)
        .into_iter()
        .map(|(p, scaled)| {
            let n = records[p.0].n;
            (p, scaled + confidence_radius(total.max(n), n), n)
        })
        .min_by(|a, b| {
            a.1.total_cmp(&b.1)
                .then(b.2.cmp(&a.2))
                .then(a.0.cmp(&b.0))
        })
        .map(|(p, _, _)| p)
}

/// Best mean, ties by more replications then lower position.
pub fn fsc2(records: &[SolutionRecord]) -> Option<PositionCode> {
    observed(records)
        .min_by(|a, b| a.2.total_cmp(&b.2).then(b.1.n.cmp(&a.1.n)).then(a.0.cmp(&b.0)))
        .map(|(p, _, _)| p)
}

pub fn fsc3(records: &[SolutionRecord]) -> Option<PositionCode> {
    most_replicated(records).map(|(p, _)| p)
}

/// Ordering helper exposed for callers that rank by FSC1 score.
pub fn fsc1_score(scaled_mean: f64, total_n: u64, n_x: u64) -> f64 {
    scaled_mean + confidence_radius(total_n, n_x)
}
