use std::fmt;

use num_bigint::BigUint;
use rand::Rng;

use crate::error::GmabError;

/// A point of the integer lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution(Vec<i64>);

impl Solution {
    pub fn new(coords: Vec<i64>) -> Self {
        Solution(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }
}

impl From<Vec<i64>> for Solution {
    fn from(coords: Vec<i64>) -> Self {
        Solution(coords)
    }
}

impl<const N: usize> From<[i64; N]> for Solution {
    fn from(coords: [i64; N]) -> Self {
        Solution(coords.to_vec())
    }
}

/// Semicolon-joined coordinates, the format used in trace files.
impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Integer box `{x : lower[d] <= x[d] <= upper[d]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpace {
    lower: Vec<i64>,
    upper: Vec<i64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<i64>, upper: Vec<i64>) -> Result<Self, GmabError> {
        if lower.is_empty() {
            return Err(GmabError::InvalidSpace("at least one dimension required".into()));
        }
        if lower.len() != upper.len() {
            return Err(GmabError::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if let Some(d) = (0..lower.len()).find(|&d| lower[d] > upper[d]) {
            return Err(GmabError::InvalidSpace(format!(
                "dimension {d}: lower bound {} exceeds upper bound {}",
                lower[d], upper[d]
            )));
        }
        let space = SearchSpace { lower, upper };
        if space.cardinality() < BigUint::from(2u32) {
            return Err(GmabError::InvalidSpace("the box must contain at least two points".into()));
        }
        Ok(space)
    }

    /// The same bounds on every dimension.
    pub fn uniform(dims: usize, lower: i64, upper: i64) -> Result<Self, GmabError> {
        Self::new(vec![lower; dims], vec![upper; dims])
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[i64] {
        &self.lower
    }

    pub fn upper(&self) -> &[i64] {
        &self.upper
    }

    /// Number of lattice values in dimension `d`.
    pub fn width(&self, d: usize) -> u64 {
        (self.upper[d] - self.lower[d]) as u64 + 1
    }

    pub fn cardinality(&self) -> BigUint {
        (0..self.dims()).fold(BigUint::from(1u32), |acc, d| acc * self.width(d))
    }

    pub fn contains(&self, x: &Solution) -> bool {
        x.dims() == self.dims()
            && x.coords()
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }

    /// Componentwise membership test; a dimension mismatch is an error.
    pub fn validate(&self, x: &Solution) -> Result<bool, GmabError> {
        if x.dims() != self.dims() {
            return Err(GmabError::DimensionMismatch {
                expected: self.dims(),
                got: x.dims(),
            });
        }
        Ok(self.contains(x))
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Solution {
        Solution(
            self.lower
                .iter()
                .zip(&self.upper)
                .map(|(&lo, &hi)| rng.random_range(lo..=hi))
                .collect(),
        )
    }
}
