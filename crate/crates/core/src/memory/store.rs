use std::io::{self, Write};

use super::avl::AvlMap;
use super::code::{CodeLayout, SolutionCode};
use super::rbtree::RbTree;
use super::{resolve_cut_ties, Memory, PositionCode, SatKey, SolutionRecord};
use crate::error::GmabError;
use crate::rng::Stream;
use crate::space::{SearchSpace, Solution};

/// Tree-indexed full memory.
#[derive(Debug, Clone)]
pub struct MemoryStore {
    layout: CodeLayout,
    records: Vec<SolutionRecord>,
    lut: AvlMap<SolutionCode, PositionCode>,
    sat: RbTree<SatKey, ()>,
    cache: Vec<PositionCode>,
    in_sat: Vec<bool>,
    in_cache: Vec<bool>,
}

impl MemoryStore {
    pub fn new(space: &SearchSpace) -> Self {
        MemoryStore {
            layout: CodeLayout::new(space),
            records: Vec::new(),
            lut: AvlMap::new(),
            sat: RbTree::new(),
            cache: Vec::new(),
            in_sat: Vec::new(),
            in_cache: Vec::new(),
        }
    }

    pub fn sat_len(&self) -> usize {
        self.sat.len()
    }

    pub fn lut_len(&self) -> usize {
        self.lut.len()
    }

    /// SAT contents in key order.
    pub fn sat_keys(&self) -> Vec<SatKey> {
        self.sat.iter().map(|(k, _)| *k).collect()
    }

    pub fn code_of(&self, x: &Solution) -> SolutionCode {
        self.layout.encode(x)
    }

    pub fn position_of(&self, x: &Solution) -> Option<PositionCode> {
        self.lut.get(&self.layout.encode(x)).copied()
    }

    /// Structural audit of both trees and of their agreement with the records.
    pub fn audit(&self) -> Result<(), String> {
        self.lut.audit().map_err(|e| format!("lookup tree: {e}"))?;
        self.sat.audit().map_err(|e| format!("sample-average tree: {e}"))?;
        if self.lut.len() != self.records.len() {
            return Err(format!("{} lookup nodes for {} records", self.lut.len(), self.records.len()));
        }
        for (code, p) in self.lut.iter() {
            if self.layout.encode(&self.records[p.0].solution) != *code {
                return Err(format!("lookup node {p} has a foreign code"));
            }
        }
        let mut flagged = 0;
        for (key, _) in self.sat.iter() {
            let rec = &self.records[key.position.0];
            if rec.mean().map(f64::to_bits) != Some(key.mean.to_bits()) {
                return Err(format!("stale sample-average node for {}", key.position));
            }
            if !self.in_sat[key.position.0] {
                return Err(format!("{} is in the tree but not flagged", key.position));
            }
            flagged += 1;
        }
        if flagged != self.in_sat.iter().filter(|&&b| b).count() {
            return Err("membership flags disagree with the tree".into());
        }
        Ok(())
    }

    /// Newline-delimited `position,code,n,r,mean` rows in position order.
    pub fn dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (i, rec) in self.records.iter().enumerate() {
            let mean = rec.mean().map(|m| m.to_string()).unwrap_or_default();
            writeln!(out, "{i},{},{},{},{mean}", self.layout.encode(&rec.solution), rec.n, rec.r)?;
        }
        Ok(())
    }
}

impl Memory for MemoryStore {
    fn lookup_or_insert(&mut self, x: &Solution) -> (PositionCode, bool) {
        let next = PositionCode(self.records.len());
        let (&p, is_new) = self.lut.get_or_insert_with(self.layout.encode(x), || next);
        if is_new {
            self.records.push(SolutionRecord::new(x.clone()));
            self.in_sat.push(false);
            self.in_cache.push(false);
        }
        (p, is_new)
    }

    fn extract_best_m(&mut self, m: usize, rng: &mut Stream) -> Result<Vec<PositionCode>, GmabError> {
        if !self.cache.is_empty() {
            return Err(GmabError::Memory("cache must be empty before elite extraction".into()));
        }
        if self.sat.len() < m || m == 0 {
            return Err(GmabError::Memory(format!(
                "cannot extract {m} elites from {} ranked solutions",
                self.sat.len()
            )));
        }
        let mut best = Vec::with_capacity(m);
        for _ in 0..m {
            let (key, ()) = self.sat.pop_first().expect("size checked");
            best.push(key);
        }
        let cut = best[m - 1].mean;
        let mut tied_beyond = Vec::new();
        while let Some((key, _)) = self.sat.first() {
            if key.mean.total_cmp(&cut).is_ne() {
                break;
            }
            tied_beyond.push(self.sat.pop_first().expect("non-empty").0);
        }
        let resolution = resolve_cut_ties(best, tied_beyond, rng);
        for key in resolution.rejected {
            self.sat.insert(key, ());
        }
        let elites: Vec<PositionCode> = resolution.chosen.iter().map(|k| k.position).collect();
        for &p in &elites {
            self.in_sat[p.0] = false;
            self.cache_position(p);
        }
        Ok(elites)
    }

    fn cache_position(&mut self, p: PositionCode) -> bool {
        if self.in_cache[p.0] {
            return false;
        }
        self.in_cache[p.0] = true;
        self.cache.push(p);
        true
    }

    fn cache(&self) -> &[PositionCode] {
        &self.cache
    }

    fn record_observation(&mut self, p: PositionCode, value: f64) -> f64 {
        let rec = &mut self.records[p.0];
        if self.in_sat[p.0] {
            // A revisited non-elite still has its node from an earlier iteration.
            let stale = SatKey { mean: rec.r / rec.n as f64, position: p };
            self.sat.remove(&stale);
        }
        rec.n += 1;
        rec.r += value;
        let mean = rec.r / rec.n as f64;
        self.sat.insert(SatKey { mean, position: p }, ());
        self.in_sat[p.0] = true;
        mean
    }

    fn clear_cache(&mut self) {
        for p in self.cache.drain(..) {
            self.in_cache[p.0] = false;
        }
    }

    fn records(&self) -> &[SolutionRecord] {
        &self.records
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, StreamKind};

    fn store() -> MemoryStore {
        MemoryStore::new(&SearchSpace::uniform(2, 1, 100).unwrap())
    }

    #[test]
    fn lookup_or_insert_examples() {
        let mut mem = store();
        assert_eq!(mem.lookup_or_insert(&Solution::from([17, 36])), (PositionCode(0), true));
        assert_eq!(mem.lookup_or_insert(&Solution::from([17, 36])), (PositionCode(0), false));
        assert_eq!(mem.lookup_or_insert(&Solution::from([17, 37])), (PositionCode(1), true));
        assert_eq!(mem.record(PositionCode(0)).n, 0);
        assert_eq!(mem.sat_len(), 0);
        mem.audit().unwrap();
    }

    #[test]
    fn record_observation_examples() {
        let mut mem = store();
        let (p, _) = mem.lookup_or_insert(&Solution::from([5, 5]));
        assert_eq!(mem.record_observation(p, 4.0), 4.0);
        assert_eq!(mem.sat_keys(), vec![SatKey { mean: 4.0, position: p }]);
        assert_eq!(mem.record_observation(p, 2.0), 3.0);
        assert_eq!(mem.sat_keys(), vec![SatKey { mean: 3.0, position: p }]);
        mem.audit().unwrap();

        let (q, _) = mem.lookup_or_insert(&Solution::from([6, 5]));
        for v in [-20.0, -25.0, -15.0] {
            mem.record_observation(q, v);
        }
        assert_eq!(mem.record(q).n, 3);
        assert_eq!(mem.record(q).r, -60.0);
        assert_eq!(mem.record_observation(q, 0.0), -15.0);
    }

    fn with_means(means: &[f64]) -> MemoryStore {
        let mut mem = MemoryStore::new(&SearchSpace::uniform(1, 0, 100).unwrap());
        for (i, &m) in means.iter().enumerate() {
            let (p, _) = mem.lookup_or_insert(&Solution::from([i as i64]));
            mem.record_observation(p, m);
        }
        mem
    }

    #[test]
    fn extract_best_m_examples() {
        let mut rng = stream(0, StreamKind::TieBreak);
        let mut mem = with_means(&[1.0, 2.0, 3.0]);
        assert_eq!(mem.extract_best_m(2, &mut rng).unwrap(), vec![PositionCode(0), PositionCode(1)]);
        assert_eq!(mem.sat_keys(), vec![SatKey { mean: 3.0, position: PositionCode(2) }]);
        assert_eq!(mem.cache(), &[PositionCode(0), PositionCode(1)]);

        let mut mem = with_means(&[1.0, 2.0, 3.0]);
        assert_eq!(mem.extract_best_m(3, &mut rng).unwrap().len(), 3);
        assert_eq!(mem.sat_len(), 0);
    }

    #[test]
    fn extract_best_m_errors() {
        let mut rng = stream(0, StreamKind::TieBreak);
        let mut mem = with_means(&[1.0, 2.0]);
        assert!(mem.extract_best_m(3, &mut rng).is_err());
        mem.extract_best_m(1, &mut rng).unwrap();
        assert!(mem.extract_best_m(1, &mut rng).is_err(), "cache not cleared");
    }

    #[test]
    fn tied_cut_is_uniform() {
        let mut rng = stream(42, StreamKind::TieBreak);
        let mut excluded = [0u32; 3];
        let trials = 10_000;
        for _ in 0..trials {
            let mut mem = with_means(&[5.0, 5.0, 5.0]);
            let elites = mem.extract_best_m(2, &mut rng).unwrap();
            assert!(elites[0] < elites[1]);
            let left = mem.sat_keys();
            assert_eq!(left.len(), 1);
            excluded[left[0].position.0] += 1;
            mem.audit().unwrap();
        }
        for count in excluded {
            let freq = count as f64 / trials as f64;
            // 1/3 +- 4 standard errors.
            assert!((freq - 1.0 / 3.0).abs() < 4.0 * (2.0f64 / 9.0 / trials as f64).sqrt(), "{freq}");
        }
    }

    #[test]
    fn full_iteration_restores_tree_size() {
        let mut rng = stream(3, StreamKind::TieBreak);
        let mut mem = with_means(&[4.0, 1.0, 3.0, 2.0, 6.0]);
        let elites = mem.extract_best_m(2, &mut rng).unwrap();
        assert_eq!(elites, vec![PositionCode(1), PositionCode(3)]);
        // Offspring: one new solution and one revisited non-elite.
        let (new, is_new) = mem.lookup_or_insert(&Solution::from([50]));
        assert!(is_new);
        mem.cache_position(new);
        let (old, is_new) = mem.lookup_or_insert(&Solution::from([4]));
        assert!(!is_new);
        mem.cache_position(old);
        assert!(!mem.cache_position(old));
        let visit: Vec<_> = mem.cache().to_vec();
        for p in visit {
            mem.record_observation(p, 0.5);
        }
        mem.clear_cache();
        assert!(mem.cache().is_empty());
        assert_eq!(mem.sat_len(), mem.records().len());
        assert_eq!(mem.record(PositionCode(4)).mean(), Some(3.25));
        mem.audit().unwrap();
        mem.clear_cache();
        assert!(mem.cache().is_empty());
    }

    #[test]
    fn all_records_counts() {
        let mem = store();
        assert_eq!(mem.all_records().count(), 0);
        let mem = with_means(&[1.0, 2.0, 3.0]);
        assert_eq!(mem.all_records().count(), 3);
        assert_eq!(mem.all_records().count(), mem.lut_len());
    }

    #[test]
    fn dump_format() {
        let mut mem = store();
        let (p, _) = mem.lookup_or_insert(&Solution::from([17, 36]));
        mem.record_observation(p, 4.0);
        mem.record_observation(p, 2.0);
        mem.lookup_or_insert(&Solution::from([1, 1]));
        let mut out = Vec::new();
        mem.dump(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "0,1635,2,6,3\n1,0,0,0,\n");
    }
}
