//! Full memory of visited solutions.
//!
//! [`MemoryStore`] keeps one [`SolutionRecord`] per visited solution in
//! first-visit order (the index is the [`PositionCode`]) and indexes the
//! records with two trees: an AVL lookup tree from [`SolutionCode`] to
//! position, and a red-black tree ordered by [`SatKey`] (sample mean, then
//! position) from which the elite set is extracted.

pub mod avl;
mod code;
mod linear;
pub mod rbtree;
mod store;

use std::cmp::Ordering;
use std::fmt;

use rand::seq::index;

pub use code::{decimal_digits, encode, CodeLayout, SolutionCode};
pub use linear::LinearMemory;
pub use store::MemoryStore;

use crate::error::GmabError;
use crate::rng::Stream;
use crate::space::Solution;

/// Index of a visited solution in the record store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PositionCode(pub usize);

impl fmt::Display for PositionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// Replication count `n` and observation sum `r` of one visited solution.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionRecord {
    pub solution: Solution,
    pub n: u64,
    pub r: f64,
}

impl SolutionRecord {
    pub fn new(solution: Solution) -> Self {
        SolutionRecord { solution, n: 0, r: 0.0 }
    }

    /// Sample mean; `None` before the first observation.
    pub fn mean(&self) -> Option<f64> {
        (self.n > 0).then(|| self.r / self.n as f64)
    }
}

/// Sample-average tree key: ascending mean, ties by ascending position.
#[derive(Debug, Clone, Copy)]
pub struct SatKey {
    pub mean: f64,
    pub position: PositionCode,
}

impl Ord for SatKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mean
            .total_cmp(&other.mean)
            .then(self.position.cmp(&other.position))
    }
}

impl PartialOrd for SatKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for SatKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for SatKey {}

/// Operations the solver needs from its memory.
///
/// Two implementations with the same tie-breaking stream must return
/// identical results for identical call sequences.
pub trait Memory {
    /// Position of `x`, appending a fresh record (`n = 0`, `r = 0`) if `x`
    /// has not been visited. The flag is `true` for a new record.
    fn lookup_or_insert(&mut self, x: &Solution) -> (PositionCode, bool);

    /// Removes the `m` best solutions from the ordering, stores them in the
    /// cache and returns them in ascending key order.
    fn extract_best_m(&mut self, m: usize, rng: &mut Stream) -> Result<Vec<PositionCode>, GmabError>;

    /// Adds `p` to the cache unless already there; returns whether it was added.
    fn cache_position(&mut self, p: PositionCode) -> bool;

    fn cache(&self) -> &[PositionCode];

    /// Adds one observation to `p` and re-keys it; returns the new mean.
    fn record_observation(&mut self, p: PositionCode, value: f64) -> f64;

    fn clear_cache(&mut self);

    /// All visited records, indexed by position.
    fn records(&self) -> &[SolutionRecord];

    fn record(&self, p: PositionCode) -> &SolutionRecord {
        &self.records()[p.0]
    }

    fn len(&self) -> usize {
        self.records().len()
    }

    fn is_empty(&self) -> bool {
        self.records().is_empty()
    }

    /// Every visited solution exactly once, in position order.
    fn all_records(&self) -> Box<dyn Iterator<Item = (PositionCode, &SolutionRecord)> + '_> {
        Box::new(self.records().iter().enumerate().map(|(i, r)| (PositionCode(i), r)))
    }
}

/// Outcome of resolving ties at the elite cut.
#[derive(Debug, Clone, PartialEq)]
pub struct TieResolution {
    /// The elite set in ascending key order.
    pub chosen: Vec<SatKey>,
    /// Tied candidates left out; they go back into the ordering.
    pub rejected: Vec<SatKey>,
}

/// Decides which candidates sharing the cut mean enter the elite set.
///
/// `best` holds the `m` smallest keys in order; `tied_beyond` holds, in
/// order, every further key whose mean equals the mean of the last element
/// of `best`. Solutions strictly better than the cut mean are always kept.
/// When ties cross the cut, the tied slots go to a uniformly random subset
/// of all tied candidates drawn from `rng`; otherwise `rng` is not touched.
pub fn resolve_cut_ties(best: Vec<SatKey>, tied_beyond: Vec<SatKey>, rng: &mut Stream) -> TieResolution {
    let Some(cut) = best.last().map(|k| k.mean) else {
        return TieResolution { chosen: best, rejected: tied_beyond };
    };
    if tied_beyond.is_empty() {
        return TieResolution { chosen: best, rejected: Vec::new() };
    }
    let strict = best.iter().take_while(|k| k.mean.total_cmp(&cut) == Ordering::Less).count();
    let mut chosen = best;
    let tied_slots = chosen.len() - strict;
    let mut pool: Vec<SatKey> = chosen.drain(strict..).collect();
    pool.extend(tied_beyond);

    let mut picks = index::sample(rng, pool.len(), tied_slots).into_vec();
    picks.sort_unstable();
    let mut taken = vec![false; pool.len()];
    for &i in &picks {
        taken[i] = true;
    }
    let mut rejected = Vec::with_capacity(pool.len() - tied_slots);
    for (key, keep) in pool.into_iter().zip(taken) {
        if keep {
            chosen.push(key);
        } else {
            rejected.push(key);
        }
    }
    TieResolution { chosen, rejected }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, StreamKind};

    fn key(mean: f64, p: usize) -> SatKey {
        SatKey { mean, position: PositionCode(p) }
    }

    #[test]
    fn sat_key_order() {
        assert!(key(1.0, 5) < key(2.0, 0));
        assert!(key(1.0, 0) < key(1.0, 1));
        assert!(key(-0.5, 9) < key(0.0, 0));
    }

    #[test]
    fn no_ties_leaves_rng_untouched() {
        let mut rng = stream(1, StreamKind::TieBreak);
        let before = rng.clone();
        let out = resolve_cut_ties(vec![key(1.0, 0), key(2.0, 1)], vec![], &mut rng);
        assert_eq!(out.chosen, vec![key(1.0, 0), key(2.0, 1)]);
        assert!(out.rejected.is_empty());
        assert_eq!(rng, before);
    }

    #[test]
    fn strictly_better_always_kept() {
        for seed in 0..50 {
            let mut rng = stream(seed, StreamKind::TieBreak);
            let out = resolve_cut_ties(
                vec![key(1.0, 3), key(2.0, 0), key(2.0, 1)],
                vec![key(2.0, 2), key(2.0, 4)],
                &mut rng,
            );
            assert_eq!(out.chosen.len(), 3);
            assert_eq!(out.chosen[0], key(1.0, 3));
            assert_eq!(out.rejected.len(), 2);
            assert!(out.chosen[1] < out.chosen[2]);
        }
    }

    #[test]
    fn record_mean() {
        let mut r = SolutionRecord::new(Solution::from([1]));
        assert_eq!(r.mean(), None);
        r.n = 3;
        r.r = -60.0;
        assert_eq!(r.mean(), Some(-20.0));
    }
}
