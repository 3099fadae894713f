use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::space::{SearchSpace, Solution};

/// Positional-numeral encoding of a lattice point.
///
/// Each dimension gets `ceil(log10(width))` decimal digits, most significant
/// dimension first, and holds the offset `x[d] - lower[d]`. When all
/// dimensions share a digit count, the weight of dimension `d` (0-based) is
/// `10^(digits * (D - 1 - d))`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SolutionCode(BigUint);

impl SolutionCode {
    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl fmt::Display for SolutionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Precomputed per-dimension weights for [`SolutionCode`].
#[derive(Debug, Clone)]
pub struct CodeLayout {
    lower: Vec<i64>,
    weights: Vec<BigUint>,
}

/// Smallest `k` with `10^k >= width`, i.e. `ceil(log10(width))`.
pub fn decimal_digits(width: u64) -> u32 {
    let mut k = 0;
    let mut p: u128 = 1;
    while p < width as u128 {
        p *= 10;
        k += 1;
    }
    k
}

impl CodeLayout {
    pub fn new(space: &SearchSpace) -> Self {
        let dims = space.dims();
        let mut weights = vec![BigUint::zero(); dims];
        let mut acc = BigUint::one();
        for d in (0..dims).rev() {
            weights[d] = acc.clone();
            acc *= BigUint::from(10u32).pow(decimal_digits(space.width(d)));
        }
        CodeLayout { lower: space.lower().to_vec(), weights }
    }

    pub fn encode(&self, x: &Solution) -> SolutionCode {
        let mut code = BigUint::zero();
        for ((&v, &lo), w) in x.coords().iter().zip(&self.lower).zip(&self.weights) {
            let offset = (v - lo) as u64;
            if offset != 0 {
                code += w * offset;
            }
        }
        SolutionCode(code)
    }
}

/// Code of `x` within `space`. Callers must ensure `x` lies in `space`.
pub fn encode(space: &SearchSpace, x: &Solution) -> SolutionCode {
    CodeLayout::new(space).encode(x)
}
