use super::{resolve_cut_ties, Memory, PositionCode, SatKey, SolutionRecord};
use crate::error::GmabError;
use crate::rng::Stream;
use crate::space::Solution;

/// Reference memory built from linear scans and a full sort on every
/// extraction. Quadratic overall; meant for cross-checking [`super::MemoryStore`]
/// on small problems.
#[derive(Debug, Default)]
pub struct LinearMemory {
    records: Vec<SolutionRecord>,
    ranked: Vec<bool>,
    cache: Vec<PositionCode>,
}

impl Memory for LinearMemory {
    fn lookup_or_insert(&mut self, x: &Solution) -> (PositionCode, bool) {
        if let Some(i) = self.records.iter().position(|r| &r.solution == x) {
            return (PositionCode(i), false);
        }
        self.records.push(SolutionRecord::new(x.clone()));
        self.ranked.push(false);
        (PositionCode(self.records.len() - 1), true)
    }

    fn extract_best_m(&mut self, m: usize, rng: &mut Stream) -> Result<Vec<PositionCode>, GmabError> {
        if !self.cache.is_empty() {
            return Err(GmabError::Memory("cache must be empty before elite extraction".into()));
        }
        let mut keys: Vec<SatKey> = (0..self.records.len())
            .filter(|&i| self.ranked[i])
            .map(|i| SatKey { mean: self.records[i].mean().unwrap(), position: PositionCode(i) })
            .collect();
        if keys.len() < m || m == 0 {
            return Err(GmabError::Memory(format!("cannot extract {m} elites from {} ranked solutions", keys.len())));
        }
        keys.sort();
        let cut = keys[m - 1].mean;
        let tied: Vec<SatKey> = keys[m..].iter().take_while(|k| k.mean == cut).copied().collect();
        let res = resolve_cut_ties(keys[..m].to_vec(), tied, rng);
        let elites: Vec<PositionCode> = res.chosen.iter().map(|k| k.position).collect();
        for &p in &elites {
            self.ranked[p.0] = false;
            self.cache_position(p);
        }
        Ok(elites)
    }

    fn cache_position(&mut self, p: PositionCode) -> bool {
        if self.cache.contains(&p) {
            return false;
        }
        self.cache.push(p);
        true
    }

    fn cache(&self) -> &[PositionCode] {
        &self.cache
    }

    fn record_observation(&mut self, p: PositionCode, value: f64) -> f64 {
        let r = &mut self.records[p.0];
        r.n += 1;
        r.r += value;
        self.ranked[p.0] = true;
        r.r / r.n as f64
    }

    fn clear_cache(&mut self) {
        self.cache.clear();
    }

    fn records(&self) -> &[SolutionRecord] {
        &self.records
    }
}
